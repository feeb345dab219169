// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any fails.

#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "capcalc/engine.hpp"
#include "capcalc/externality.hpp"
#include "capcalc/game.hpp"
#include "capcalc/paradox.hpp"
#include "capcalc/pivot.hpp"
#include "support/fixtures.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

using namespace capcalc;
namespace ct = capcalc::testing;

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

struct Verdict {
    bool pass = true;
    std::ostringstream detail;

    void expect(bool ok, const std::string& what) {
        if (!ok) {
            if (pass) detail << "failed: ";
            else detail << "; ";
            detail << what;
            pass = false;
        }
    }
};

bool same_profiles(std::vector<Profile> a, std::vector<Profile> b) {
    auto key = [](const Profile& p, const Profile& q) { return std::tie(p.row, p.col) < std::tie(q.row, q.col); };
    std::sort(a.begin(), a.end(), key);
    std::sort(b.begin(), b.end(), key);
    return a == b;
}

bool contains(const std::vector<Profile>& v, const Profile& p) { return std::find(v.begin(), v.end(), p) != v.end(); }

// The scenario population shared by criteria 5 and 6.
const std::vector<ScenarioData>& random_scenarios() {
    static const auto population = [] {
        std::mt19937_64 rng(20260101);
        ct::ScenarioShape shape{6, 3, 4, 2, 5};
        std::vector<ScenarioData> out;
        for (int i = 0; i < 1000; ++i) out.push_back(ct::random_scenario(rng, shape));
        return out;
    }();
    return population;
}

void sale_game(Verdict& v) {
    auto g = ct::fixture_game("sale");
    const auto t0 = Clock::now();
    auto eq = pure_nash(g);
    const double ms = ms_since(t0);
    v.expect(contains(eq, {"buy", "sell"}), "(buy, sell) missing");
    v.expect(same_profiles(eq, {{"buy", "sell"}, {"no buy", "no sell"}}), "equilibrium set differs");
    v.expect(same_profiles(eq, ct::brute_force_nash(g)), "oracle disagrees");
    v.expect(ms < 1.0, "took " + std::to_string(ms) + " ms");
    v.detail << (v.pass ? "" : " | ") << eq.size() << " equilibria in " << ms << " ms";
}

void threat_game(Verdict& v) {
    auto g = ct::fixture_game("threat");
    auto dom = dominant_strategies(g, Player::row);
    v.expect(dom == std::vector<DominantStrategy>{{"threaten", Dominance::weak}}, "row dominance");
    v.expect(contains(pure_nash(g), {"threaten", "give"}), "(threaten, give) missing");
    // The second table names Sona's column "give" where the first said "sell".
    auto t = deterrence_threshold(g, "threaten", {"buy", "give"});
    v.expect(t.penalty == 600.0 && t.open, "threshold " + std::to_string(t.penalty));
    v.detail << (v.pass ? "" : " | ") << "penalty > " << t.penalty << " (open=" << t.open << ")";
}

void sen_paradox(Verdict& v) {
    auto doc = ct::fixture_profile("sen-lady-chatterley");
    auto verdict = detect_paradox(doc.profile, doc.rights);
    auto cycle = verdict.cycle;
    std::sort(cycle.begin(), cycle.end());
    v.expect(verdict.cycle.size() == 3 &&
                 cycle == std::vector<std::string>{"lewd-reads", "no-one-reads", "prude-reads"},
             "cycle");
    auto choice = choose(doc.profile, doc.rights, ChoicePolicy::rights_first);
    v.expect(choice.chosen == "lewd-reads", "rights-first choice");
    v.expect(choice.pareto_superior == std::vector<std::string>{"prude-reads"}, "pareto-superior set");
    bool flagged = verdict.pareto_inferior.size() == 1 && verdict.pareto_inferior[0].outcome == "lewd-reads" &&
                   verdict.pareto_inferior[0].dominated_by == std::vector<std::string>{"prude-reads"};
    v.expect(flagged, "pareto-inferior flag");
    v.detail << (v.pass ? "" : " | ") << "cycle of " << verdict.cycle.size() << ", chosen "
             << choice.chosen.value_or("none");
}

void pivot_bound(Verdict& v) {
    const auto t0 = Clock::now();
    const double lp = tie_probability_log(22000);
    auto report = verify_bound(22000);
    const double ms = ms_since(t0);
    v.expect(lp < 11000 * std::log(0.75), "bound does not hold");
    v.expect(report.holds && report.margin_ln > 0, "report");
    v.expect(tie_probability_exact(1) == Rational(1, 2), "k=1");
    v.expect(tie_probability_exact(2) == Rational(1, 6), "k=2");
    v.expect(tie_probability_exact(5) == Rational(1, 252), "k=5");
    double worst = 0;
    for (std::uint64_t k = 1; k <= 50; ++k) {
        const double exact = tie_probability_exact(k).convert_to<double>();
        worst = std::max(worst, std::abs(std::exp(tie_probability_log(k)) - exact) / exact);
    }
    v.expect(worst <= 1e-10, "log/exact relative error " + std::to_string(worst));
    v.expect(ms < 1000.0, "took " + std::to_string(ms) + " ms");
    v.detail << (v.pass ? "" : " | ") << "ln P = " << lp << ", margin " << report.margin_ln << " nats ("
             << report.margin_log10 << " decades), worst rel err " << worst << ", " << ms << " ms";
}

void monotonicity(Verdict& v) {
    std::size_t checks = 0, violations = 0;
    for (const auto& d : random_scenarios()) {
        auto s = Scenario::build(d);
        for (const auto& a : d.agents)
            for (const auto& w : d.states) {
                const double V = capability_value(s, a, w.id).value;
                ++checks;
                if (V < d.values.at(a).at(w.id)) ++violations;
                for (const auto& p : d.procedures) {
                    ++checks;
                    if (gain(s, a, w.id, p.name).gain < 0) ++violations;
                }
                for (const auto& c : d.capabilities) {
                    if (c.owner != a) continue;
                    const std::vector<std::string> banned{c.name};
                    ++checks;
                    if (capability_value(restrict_capabilities(s, a, banned), a, w.id).value > V) ++violations;
                }
            }
    }
    v.expect(violations == 0, std::to_string(violations) + " violations");
    v.detail << (v.pass ? "" : " | ") << checks << " checks over " << random_scenarios().size() << " scenarios";
}

void oracle_equivalence(Verdict& v) {
    const auto t0 = Clock::now();
    std::size_t checks = 0, mismatches = 0;
    for (const auto& d : random_scenarios()) {
        auto s = Scenario::build(d);
        for (const auto& a : d.agents)
            for (const auto& w : d.states) {
                ++checks;
                if (capability_value(s, a, w.id).value != ct::brute_force_capability_value(d, a, w.id)) ++mismatches;
            }
    }
    const double ms = ms_since(t0);
    v.expect(mismatches == 0, std::to_string(mismatches) + " mismatches");
    v.expect(ms < 30000.0, "took " + std::to_string(ms) + " ms");
    v.detail << (v.pass ? "" : " | ") << checks << " values in " << ms << " ms";
}

void independence(Verdict& v) {
    auto aditi = ct::fixture_scenario("aditi");
    auto verdict = check_independence(aditi);
    v.expect(!verdict.holds, "aditi passes");
    v.expect(verdict.violations ==
                 std::vector<ExternalityRecord>{{"aditi", "walk", "home", "mother", -2, Sign::negative}},
             "aditi records");

    std::size_t bundled = 0;
    for (const auto& entry : std::filesystem::directory_iterator(CAPCALC_FIXTURES_DIR)) {
        const auto name = entry.path().filename().string();
        if (!name.ends_with(".scenario.json")) continue;
        auto s = load_scenario(ct::read_fixture(name));
        if (!s.data().factor_spec || !check_factorization(s).holds) continue;
        ++bundled;
        v.expect(check_independence(s).holds, name + " factorizes but is not independent");
    }
    v.expect(bundled > 0, "no bundled scenario factorizes");

    std::mt19937_64 rng(7);
    std::size_t factorized = 0;
    for (int i = 0; i < 200; ++i) {
        auto s = Scenario::build(ct::random_product_scenario(rng, i % 2 == 1));
        if (!check_factorization(s).holds) continue;
        ++factorized;
        v.expect(check_independence(s).holds, "random product scenario " + std::to_string(i));
    }
    v.detail << (v.pass ? "" : " | ") << "aditi: " << verdict.violations.size() << " record; " << bundled
             << " bundled and " << factorized << "/200 random scenarios factorize, all independent";
}

void equilibrium_oracle(Verdict& v) {
    std::mt19937_64 rng(8080);
    std::size_t mismatches = 0, equilibria = 0;
    for (int i = 0; i < 1000; ++i) {
        auto g = ct::random_game(rng, 4, 10);
        auto eq = pure_nash(g);
        equilibria += eq.size();
        if (!same_profiles(eq, ct::brute_force_nash(g))) ++mismatches;
    }
    v.expect(mismatches == 0, std::to_string(mismatches) + " mismatches");
    v.detail << (v.pass ? "" : " | ") << "1000 games, " << equilibria << " equilibria";
}

struct Run {
    int code = -1;
    std::string out;
};

Run run_cli(const std::string& args) {
    const std::string cmd = "cd '" + std::string(CAPCALC_FIXTURES_DIR) + "' && '" + CAPCALC_CLI_PATH + "' " + args +
                            " 2>/dev/null";
    Run r;
    FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe) return r;
    char buf[4096];
    std::size_t n;
    while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, n);
    const int status = pclose(pipe);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

void cli_determinism(Verdict& v) {
    std::ifstream in(CAPCALC_FIXTURE_COMMANDS);
    v.expect(static_cast<bool>(in), "command list missing");
    std::string line;
    std::size_t commands = 0;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        ++commands;
        auto first = run_cli(line);
        auto second = run_cli(line);
        v.expect(first.code == 0 && second.code == 0, "exit " + std::to_string(first.code) + ": " + line);
        v.expect(first.out == second.out, "output differs: " + line);
        v.expect(!first.out.empty(), "no output: " + line);
    }
    v.detail << (v.pass ? "" : " | ") << commands << " commands, run twice each";
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<void(Verdict&)>>> criteria{
        {"sale game equilibria", sale_game},
        {"threat game dominance and deterrence", threat_game},
        {"liberal paradox cycle and choice", sen_paradox},
        {"pivot bound and exact tie probabilities", pivot_bound},
        {"monotonicity suite", monotonicity},
        {"capability value oracle equivalence", oracle_equivalence},
        {"independence and factorization", independence},
        {"equilibrium oracle", equilibrium_oracle},
        {"cli determinism", cli_determinism},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Verdict v;
        try {
            criteria[i].second(v);
        } catch (const std::exception& e) {
            v.expect(false, std::string("exception: ") + e.what());
        }
        std::cout << "criterion " << i + 1 << " " << (v.pass ? "PASS" : "FAIL") << "  " << criteria[i].first
                  << ": " << v.detail.str() << std::endl;
        failed += v.pass ? 0 : 1;
    }
    std::cout << (failed == 0 ? "all criteria pass" : std::to_string(failed) + " criteria failed") << std::endl;
    return failed == 0 ? 0 : 1;
}
