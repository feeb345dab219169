#include "cli.hpp"

#include <openssl/evp.h>

#include <charconv>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "capcalc/engine.hpp"
#include "capcalc/error.hpp"
#include "capcalc/externality.hpp"
#include "capcalc/game.hpp"
#include "capcalc/kernels.hpp"
#include "capcalc/model.hpp"
#include "capcalc/paradox.hpp"
#include "capcalc/pivot.hpp"

#ifndef CAPCALC_FIXTURES_DIR
#define CAPCALC_FIXTURES_DIR "fixtures"
#endif

namespace capcalc::cli {

namespace fs = std::filesystem;
using ojson = nlohmann::ordered_json;

namespace {

class LoadFailure : public Error {
public:
    using Error::Error;
};

class UsageError : public Error {
public:
    using Error::Error;
};

std::string num(double x) {
    char buf[64];
    const auto r = std::to_chars(buf, buf + sizeof buf, x);
    return {buf, r.ptr};
}

std::string joined(const std::vector<std::string>& v, std::string_view sep, std::string_view empty = "(none)") {
    if (v.empty()) return std::string(empty);
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += sep;
        out += v[i];
    }
    return out;
}

std::string sha256_hex(const std::string& bytes) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1)
        throw Error("sha256 digest failed");
    std::ostringstream hex;
    for (unsigned int i = 0; i < len; ++i) hex << std::hex << std::setw(2) << std::setfill('0') << int(digest[i]);
    return hex.str();
}

struct Input {
    std::string path;  // as given on the command line
    std::string text;
    std::string sha256;
};

Input read_input(const std::string& path) {
    fs::path p = path;
    if (!fs::exists(p)) {
        const auto alt = fs::path(fixtures_dir()) / path;
        if (fs::exists(alt)) p = alt;
    }
    std::ifstream f(p, std::ios::binary);
    if (!f) throw LoadFailure("cannot read input file \"" + path + "\"");
    std::ostringstream buf;
    buf << f.rdbuf();
    Input in{path, buf.str(), {}};
    in.sha256 = sha256_hex(in.text);
    return in;
}

struct Report {
    Report() = default;
    Report(std::string cmd, std::vector<Input> in) : command(std::move(cmd)), inputs(std::move(in)) {}

    std::string command;
    std::vector<Input> inputs;
    ojson findings = ojson::object();
    std::ostringstream text;
};

void emit(const Report& r, bool json, std::ostream& out) {
    if (json) {
        ojson doc;
        doc["command"] = r.command;
        doc["format"] = "json";
        doc["inputs"] = ojson::array();
        for (const auto& in : r.inputs) doc["inputs"].push_back({{"path", in.path}, {"sha256", in.sha256}});
        doc["findings"] = r.findings;
        out << doc.dump(2) << "\n";
        return;
    }
    out << "capcalc " << r.command << "\n";
    for (const auto& in : r.inputs) out << "input " << in.path << " sha256:" << in.sha256 << "\n";
    out << "\n" << r.text.str();
}

std::string path_text(const std::vector<std::string>& witness) { return joined(witness, " -> ", "(stay)"); }

ojson provenance_json(const std::vector<Provenance>& ps) {
    ojson out = ojson::array();
    for (const auto& p : ps) {
        ojson j{{"source", to_string(p.source)}};
        if (!p.agent.empty()) j["agent"] = p.agent;
        out.push_back(std::move(j));
    }
    return out;
}

std::string provenance_text(const std::vector<Provenance>& ps) {
    std::vector<std::string> parts;
    for (const auto& p : ps) parts.push_back(p.agent.empty() ? to_string(p.source) : to_string(p.source) + " of " + p.agent);
    return joined(parts, ", ");
}

ojson edges_json(const std::vector<Edge>& edges) {
    ojson out = ojson::array();
    for (const auto& e : edges)
        out.push_back({{"better", e.better}, {"worse", e.worse}, {"provenance", provenance_json(e.provenance)}});
    return out;
}

void edges_text(std::ostream& os, const std::vector<Edge>& edges, std::string_view indent) {
    if (edges.empty()) os << indent << "(none)\n";
    for (const auto& e : edges) os << indent << e.better << " > " << e.worse << "  [" << provenance_text(e.provenance) << "]\n";
}

// --- scenario commands -----------------------------------------------------------

Report cmd_value(const std::string& file, const std::string& agent, const std::string& state,
                 const std::vector<std::string>& with) {
    Report r{"value", {read_input(file)}};
    const auto s = load_scenario(r.inputs[0].text);
    const auto cv = capability_value(s, agent, state, with);
    const auto rs = reachable(s, agent, state, with);

    auto& f = r.findings;
    f["agent"] = cv.agent;
    f["origin"] = cv.origin;
    f["procedures"] = with;
    f["local_value"] = cv.local_value;
    f["capability_value"] = cv.value;
    f["best_state"] = cv.best_state;
    f["witness"] = cv.witness;
    f["reachable"] = ojson::array();

    auto& t = r.text;
    t << "agent: " << cv.agent << "\norigin: " << cv.origin << "\nprocedures: " << joined(with, ", ") << "\n";
    t << "v = " << num(cv.local_value) << "\nV = " << num(cv.value) << "\n";
    t << "best state: " << cv.best_state << "\nwitness: " << path_text(cv.witness) << "\n";
    t << "reachable states:\n";
    for (const auto& st : rs.states) {
        const double v = local_value(s, agent, st);
        f["reachable"].push_back({{"state", st}, {"local_value", v}, {"witness", rs.witness.at(st)}});
        t << "  " << st << "  v=" << num(v) << "  via " << path_text(rs.witness.at(st)) << "\n";
    }
    return r;
}

Report cmd_gain(const std::string& file, const std::string& agent, const std::string& state, const std::string& proc) {
    Report r{"gain", {read_input(file)}};
    const auto s = load_scenario(r.inputs[0].text);
    const auto g = gain(s, agent, state, proc);
    const bool beneficiary = s.move(s.move_index(proc)).usable_by(s.agent_index(agent));

    r.findings = {{"agent", g.agent},           {"origin", g.origin},       {"procedure", g.procedure},
                  {"beneficiary", beneficiary}, {"value_before", g.value_before}, {"value_after", g.value_after},
                  {"gain", g.gain}};
    r.text << "agent: " << g.agent << "\norigin: " << g.origin << "\nprocedure: " << g.procedure
           << (beneficiary ? "" : " (agent is not a beneficiary)") << "\n";
    r.text << "V without = " << num(g.value_before) << "\nV with = " << num(g.value_after) << "\ngain = " << num(g.gain)
           << "\n";
    return r;
}

OriginMap load_origins(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("origins: malformed JSON: ") + e.what());
    }
    if (!j.is_object()) throw ParseError("origins: expected an object mapping agent to state");
    OriginMap out;
    for (const auto& [agent, state] : j.items()) {
        if (!state.is_string()) throw ParseError("origins." + agent + ": expected a state id string");
        out.emplace(agent, state.get<std::string>());
    }
    return out;
}

std::string winner_name(const ProcedureComparison& c) {
    switch (c.winner) {
        case Winner::first: return c.first;
        case Winner::second: return c.second;
        case Winner::tie: return "tie";
    }
    return "?";
}

Report cmd_compare(const std::string& file, const std::string& origins_file, const std::string& p,
                   const std::string& q, const std::string& aggregator) {
    Report r{"compare", {read_input(file), read_input(origins_file)}};
    const auto s = load_scenario(r.inputs[0].text);
    const auto origins = load_origins(r.inputs[1].text);
    const auto agg = parse_aggregator(aggregator);
    const auto c = compare_procedures(s, origins, p, q, agg);
    const double pc_first = per_capita_gain(s, origins, p);
    const double pc_second = per_capita_gain(s, origins, q);

    auto& f = r.findings;
    f["aggregator"] = to_string(agg);
    f["first"] = c.first;
    f["second"] = c.second;
    f["gains"] = ojson::array();
    auto& t = r.text;
    t << "aggregator: " << to_string(agg) << "\n";
    t << "agent  origin  gain(" << c.first << ")  gain(" << c.second << ")\n";
    for (std::size_t i = 0; i < c.gains_first.size(); ++i) {
        const auto& a = c.gains_first[i];
        const auto& b = c.gains_second[i];
        f["gains"].push_back({{"agent", a.agent}, {"origin", a.origin}, {"gain_first", a.gain}, {"gain_second", b.gain}});
        t << "  " << a.agent << "  " << a.origin << "  " << num(a.gain) << "  " << num(b.gain) << "\n";
    }
    f["score_first"] = c.score_first;
    f["score_second"] = c.score_second;
    f["winner"] = winner_name(c);
    f["beneficiaries_first"] = c.beneficiaries_first;
    f["beneficiaries_second"] = c.beneficiaries_second;
    f["per_capita_first"] = pc_first;
    f["per_capita_second"] = pc_second;
    t << "score(" << c.first << ") = " << num(c.score_first) << "\nscore(" << c.second << ") = " << num(c.score_second)
      << "\nwinner: " << winner_name(c) << "\n";
    t << "beneficiaries(" << c.first << "): " << joined(c.beneficiaries_first, ", ") << "\n";
    t << "beneficiaries(" << c.second << "): " << joined(c.beneficiaries_second, ", ") << "\n";
    t << "per-capita gain(" << c.first << ") = " << num(pc_first) << "\nper-capita gain(" << c.second
      << ") = " << num(pc_second) << "\n";
    return r;
}

Report cmd_independence(const std::string& file) {
    Report r{"independence", {read_input(file)}};
    const auto s = load_scenario(r.inputs[0].text);
    const auto v = check_independence(s);

    auto& f = r.findings;
    auto& t = r.text;
    f["holds"] = v.holds;
    f["violations"] = ojson::array();
    t << "independence: " << (v.holds ? "holds" : "violated") << "\n";
    for (const auto& e : v.violations) {
        f["violations"].push_back({{"actor", e.actor},
                                   {"capability", e.capability},
                                   {"state", e.state},
                                   {"affected", e.affected},
                                   {"delta", e.delta},
                                   {"sign", to_string(e.sign)}});
        t << "  " << e.actor << " uses " << e.capability << " at " << e.state << ": " << e.affected << " changes by "
          << num(e.delta) << " (" << to_string(e.sign) << ")\n";
    }
    if (s.data().factor_spec) {
        const auto fv = check_factorization(s);
        ojson fj{{"holds", fv.holds}, {"violations", ojson::array()}};
        t << "factorization: " << (fv.holds ? "holds" : "violated") << "\n";
        for (const auto& x : fv.violations) {
            fj["violations"].push_back({{"rule", to_string(x.rule)},
                                        {"agent", x.agent},
                                        {"capability", x.capability},
                                        {"first", x.first},
                                        {"second", x.second},
                                        {"coordinate", x.coordinate}});
            if (x.rule == FactorizationRule::value_depends_on_other_coordinate)
                t << "  value of " << x.agent << " differs between " << x.first << " and " << x.second
                  << " though coordinate " << x.coordinate << " agrees\n";
            else
                t << "  " << x.capability << " of " << x.agent << " moves " << x.first << " -> " << x.second
                  << ", changing coordinate " << x.coordinate << "\n";
        }
        f["factorization"] = std::move(fj);
    } else {
        f["factorization"] = nullptr;
        t << "factorization: not declared\n";
    }
    return r;
}

Report cmd_greedy(const std::string& file, const std::string& agent, const std::string& state, std::size_t max_steps) {
    Report r{"greedy", {read_input(file)}};
    const auto s = load_scenario(r.inputs[0].text);
    const auto tr = greedy_trajectory(s, agent, state, max_steps);
    const auto term = tr.terminated == Termination::fixpoint ? "fixpoint" : "step-cap";

    r.findings = {{"agent", tr.agent}, {"origin", tr.origin}, {"steps", ojson::array()}, {"terminated", term}};
    r.text << "agent: " << tr.agent << "\norigin: " << tr.origin << " (v=" << num(local_value(s, agent, state)) << ")\n";
    for (const auto& st : tr.steps) {
        r.findings["steps"].push_back({{"capability", st.capability}, {"state", st.state}, {"value", st.value}});
        r.text << "  " << st.capability << " -> " << st.state << " (v=" << num(st.value) << ")\n";
    }
    r.text << "terminated: " << term << "\n";
    return r;
}

Report cmd_restrict(const std::string& file, const std::string& agent, const std::vector<std::string>& banned) {
    Report r{"restrict", {read_input(file)}};
    const auto s = load_scenario(r.inputs[0].text);
    const auto restricted = restrict_capabilities(s, agent, banned);
    const auto a = s.agent_index(agent);
    const auto before = capability_values_serial(s);
    const auto after = capability_values_serial(restricted);

    r.findings = {{"agent", s.agent(a)}, {"banned", banned}, {"origins", ojson::array()}};
    r.text << "agent: " << s.agent(a) << "\nbanned: " << joined(banned, ", ") << "\norigin  V before  V after\n";
    for (std::size_t w = 0; w < s.state_count(); ++w) {
        r.findings["origins"].push_back(
            {{"origin", s.state(w)}, {"value_before", before.at(a, w)}, {"value_after", after.at(a, w)}});
        r.text << "  " << s.state(w) << "  " << num(before.at(a, w)) << "  " << num(after.at(a, w)) << "\n";
    }
    return r;
}

Report cmd_transfer(const std::string& file, const std::string& capability, const std::string& state,
                    const std::string& aggregator) {
    Report r{"transfer", {read_input(file)}};
    const auto s = load_scenario(r.inputs[0].text);
    const auto t = transfer_analysis(s, capability, state, parse_aggregator(aggregator));

    r.findings = {{"capability", t.capability}, {"from", t.from}, {"to", t.to}, {"deltas", ojson::array()}};
    r.text << "capability: " << t.capability << "\nmove: " << t.from << " -> " << t.to << "\n";
    for (const auto& [agent, d] : t.deltas) {
        r.findings["deltas"].push_back({{"agent", agent}, {"delta", d}});
        r.text << "  " << agent << "  " << num(d) << "\n";
    }
    r.findings["aggregator"] = to_string(t.aggregator);
    r.findings["aggregate_change"] = t.aggregate_change;
    r.findings["improving_despite_loser"] = t.improving_despite_loser;
    r.text << "aggregate (" << to_string(t.aggregator) << ") = " << num(t.aggregate_change) << "\n";
    r.text << "aggregate-improving despite a loser: " << (t.improving_despite_loser ? "yes" : "no") << "\n";
    return r;
}

Report cmd_table(const std::string& file, const std::vector<std::string>& with) {
    Report r{"table", {read_input(file)}};
    const auto s = load_scenario(r.inputs[0].text);
    const auto values = capability_values(s, with);

    ojson rows = ojson::array();
    r.text << "procedures: " << joined(with, ", ") << "\n";
    for (std::size_t a = 0; a < s.agent_count(); ++a) {
        r.text << s.agent(a) << ":\n";
        for (std::size_t w = 0; w < s.state_count(); ++w) {
            rows.push_back({{"agent", s.agent(a)},
                            {"origin", s.state(w)},
                            {"local_value", s.value(a, w)},
                            {"capability_value", values.at(a, w)}});
            r.text << "  " << s.state(w) << "  v=" << num(s.value(a, w)) << "  V=" << num(values.at(a, w)) << "\n";
        }
    }
    r.findings = {{"procedures", with}, {"rows", std::move(rows)}};
    return r;
}

// --- games --------------------------------------------------------------------------

void describe_game(Report& r, const NormalFormGame& g) {
    auto& f = r.findings;
    auto& t = r.text;
    f["row_strategies"] = g.row_strategies;
    f["col_strategies"] = g.col_strategies;
    ojson cells = ojson::array();
    t << "payoffs (row, column):\n";
    for (std::size_t i = 0; i < g.row_strategies.size(); ++i) {
        t << "  " << g.row_strategies[i] << ":";
        for (std::size_t j = 0; j < g.col_strategies.size(); ++j) {
            cells.push_back({g.at(i, j).row, g.at(i, j).col});
            t << "  " << g.col_strategies[j] << "=(" << num(g.at(i, j).row) << ", " << num(g.at(i, j).col) << ")";
        }
        t << "\n";
    }
    f["payoffs"] = std::move(cells);

    f["equilibria"] = ojson::array();
    t << "pure Nash equilibria:\n";
    const auto eq = pure_nash(g);
    if (eq.empty()) t << "  (none)\n";
    for (const auto& p : eq) {
        f["equilibria"].push_back({{"row", p.row}, {"col", p.col}});
        t << "  (" << p.row << ", " << p.col << ")\n";
    }

    f["dominant"] = ojson::object();
    for (const auto player : {Player::row, Player::col}) {
        const auto name = player == Player::row ? "row" : "col";
        ojson list = ojson::array();
        t << "dominant strategies (" << name << "):";
        const auto ds = dominant_strategies(g, player);
        if (ds.empty()) t << " (none)";
        for (const auto& d : ds) {
            const auto kind = d.kind == Dominance::strict ? "strict" : "weak";
            list.push_back({{"strategy", d.strategy}, {"kind", kind}});
            t << " " << d.strategy << " (" << kind << ")";
        }
        t << "\n";
        f["dominant"][name] = std::move(list);
    }
}

Report cmd_equilibrium(const std::string& file, const std::string& deter, const std::string& target) {
    Report r{"equilibrium", {read_input(file)}};
    const auto g = load_game(r.inputs[0].text);
    describe_game(r, g);

    if (deter.empty() != target.empty()) throw UsageError("--deter and --target must be given together");
    if (deter.empty()) {
        r.findings["deterrence"] = nullptr;
        return r;
    }
    const auto comma = target.find(',');
    if (comma == std::string::npos || target.find(',', comma + 1) != std::string::npos)
        throw UsageError("--target expects ROW,COL");
    const Profile tp{target.substr(0, comma), target.substr(comma + 1)};
    const auto d = deterrence_threshold(g, deter, tp);
    r.findings["deterrence"] = {{"deterred", deter},
                                {"target", {{"row", tp.row}, {"col", tp.col}}},
                                {"penalty", d.penalty},
                                {"open", d.open}};
    r.text << "deterrence of " << deter << " toward (" << tp.row << ", " << tp.col << "): penalty "
           << (d.open ? "> " : ">= ") << num(d.penalty) << "\n";
    return r;
}

Report cmd_game(const std::string& file, const std::string& row_agent, const std::string& col_agent,
                const std::vector<std::string>& row_caps, const std::vector<std::string>& col_caps,
                const std::string& origin) {
    Report r{"game", {read_input(file)}};
    const auto s = load_scenario(r.inputs[0].text);
    const auto g = game_from_scenario(s, row_agent, col_agent, row_caps, col_caps, origin);
    r.findings["row_agent"] = row_agent;
    r.findings["col_agent"] = col_agent;
    r.findings["origin"] = origin;
    r.text << "row: " << row_agent << "  column: " << col_agent << "  origin: " << origin << "\n";
    describe_game(r, g);
    return r;
}

// --- social choice ------------------------------------------------------------------

Report cmd_paradox(const std::string& file, const std::string& policy_name, bool& failed) {
    Report r{"paradox", {read_input(file)}};
    const auto doc = load_profile(r.inputs[0].text);
    const auto policy = parse_policy(policy_name);
    const auto v = detect_paradox(doc.profile, doc.rights);
    const auto c = choose(doc.profile, doc.rights, policy);
    const auto rights = rights_edges(doc.profile, doc.rights).edges();
    const auto pareto = pareto_edges(doc.profile).edges();

    auto& f = r.findings;
    auto& t = r.text;
    f["outcomes"] = doc.profile.outcomes;
    f["rights_edges"] = edges_json(rights);
    f["pareto_edges"] = edges_json(pareto);
    t << "rights edges:\n";
    edges_text(t, rights, "  ");
    t << "pareto edges:\n";
    edges_text(t, pareto, "  ");

    f["cycle"] = v.cycle;
    f["cycle_edges"] = edges_json(v.cycle_edges);
    if (v.cycle.empty()) {
        t << "cycle: none\n";
    } else {
        t << "cycle: " << joined(v.cycle, " > ") << " > " << v.cycle.front() << "\n";
        edges_text(t, v.cycle_edges, "  ");
    }
    f["pareto_inferior"] = ojson::array();
    for (const auto& p : v.pareto_inferior) {
        f["pareto_inferior"].push_back({{"outcome", p.outcome}, {"dominated_by", p.dominated_by}});
        t << "pareto-inferior rights-maximal outcome: " << p.outcome << " (dominated by "
          << joined(p.dominated_by, ", ") << ")\n";
    }
    f["clean"] = v.clean();
    t << "verdict: " << (v.clean() ? "clean" : "paradox") << "\n";

    ojson cj{{"policy", to_string(c.policy)},
             {"chosen", c.chosen ? ojson(*c.chosen) : ojson(nullptr)},
             {"maximal", c.maximal},
             {"pareto_superior", c.pareto_superior},
             {"overridden_rights", edges_json(c.overridden_rights)},
             {"failure_cycle", c.failure_cycle}};
    f["choice"] = std::move(cj);
    t << "choice (" << to_string(c.policy) << "): ";
    if (c.chosen) {
        t << *c.chosen << "\n";
        t << "  maximal: " << joined(c.maximal, ", ") << "\n";
        t << "  pareto-superior alternatives: " << joined(c.pareto_superior, ", ") << "\n";
        t << "  overridden rights:\n";
        edges_text(t, c.overridden_rights, "    ");
    } else {
        t << "none, every outcome is beaten; cycle " << joined(c.failure_cycle, " > ") << "\n";
    }
    failed = !c.chosen;
    return r;
}

// --- pivot --------------------------------------------------------------------------

struct PivotArgs {
    std::uint64_t k = 0;
    std::uint64_t electorate = 0;
    std::optional<double> h;
    bool exact = false;
    std::optional<double> epsilon;
    std::optional<std::uint64_t> population;
    std::optional<double> cost;
};

Report cmd_pivot(const PivotArgs& a) {
    Report r{"pivot", {}};
    if ((a.k == 0) == (a.electorate == 0)) throw UsageError("give exactly one of --k or --electorate");
    const auto q = a.k ? TieQuery::from_half(a.k) : TieQuery::from_electorate(a.electorate);
    const auto b = verify_bound(q.half());

    auto& f = r.findings;
    auto& t = r.text;
    f["k"] = q.half();
    f["electorate"] = q.electorate();
    f["log_probability"] = b.log_probability;
    f["log10_probability"] = b.log_probability / std::log(10.0);
    t << "k = " << q.half() << " (tie among " << q.electorate() << " other voters)\n";
    t << "ln P(tie) = " << num(b.log_probability) << "\nlog10 P(tie) = " << num(b.log_probability / std::log(10.0))
      << "\n";
    if (a.exact) {
        const auto p = tie_probability_exact(q.half());
        f["exact"] = p.str();
        t << "P(tie) = " << p.str() << "\n";
    } else {
        f["exact"] = nullptr;
    }
    f["bound"] = {{"exponent", b.exponent},
                  {"log_bound", b.log_bound},
                  {"holds", b.holds},
                  {"margin_ln", b.margin_ln},
                  {"margin_log10", b.margin_log10},
                  {"log_probability_by_factors", b.log_probability_by_factors},
                  {"factor_route_holds", b.factor_route_holds},
                  {"factors_total", b.factors_total},
                  {"factors_in_half_to_three_quarters", b.factors_in_half_to_three_quarters},
                  {"factors_at_most_three_quarters", b.factors_at_most_three_quarters},
                  {"smallest_factor", b.smallest_factor},
                  {"largest_factor", b.largest_factor},
                  {"factor_count_implies_bound", b.factor_count_implies_bound}};
    t << "bound P < 0.75^" << num(b.exponent) << ": " << (b.holds ? "holds" : "fails") << " (margin " << num(b.margin_ln)
      << " nats, " << num(b.margin_log10) << " decades)\n";
    t << "factor route: ln P = " << num(b.log_probability_by_factors) << ", bound "
      << (b.factor_route_holds ? "holds" : "fails") << "; " << b.factors_at_most_three_quarters << " of "
      << b.factors_total << " factors <= 0.75, " << b.factors_in_half_to_three_quarters << " in [0.50, 0.75]\n";

    if (a.h) {
        const auto hr = expected_harm(q, *a.h);
        f["harm"] = {{"h", hr.h},
                     {"expected_harm", hr.expected_harm},
                     {"log_expected_harm", hr.log_expected_harm ? ojson(*hr.log_expected_harm) : ojson(nullptr)},
                     {"underflow", hr.underflow}};
        t << "expected harm = " << num(hr.expected_harm);
        if (hr.log_expected_harm) t << " (ln " << num(*hr.log_expected_harm) << (hr.underflow ? ", underflow" : "") << ")";
        t << "\n";
    } else {
        f["harm"] = nullptr;
    }

    if (a.epsilon || a.population || a.cost) {
        if (!a.epsilon || !a.population || !a.cost)
            throw UsageError("--epsilon, --population and --cost must be given together");
        const HarmModel m{*a.epsilon, a.h.value_or(0.0), *a.population, *a.cost};
        const auto th = epsilon_threshold(m, q);
        f["threshold"] = {{"epsilon", m.epsilon},
                          {"population", m.population},
                          {"total_effect", th.total_effect},
                          {"unit_cost", th.unit_cost},
                          {"act", th.act},
                          {"private_gain_exceeds_expected_harm", *th.private_gain_exceeds_expected_harm}};
        t << "epsilon * N = " << num(th.total_effect) << " vs cost " << num(th.unit_cost) << ": "
          << (th.act ? "act" : "do not act") << "\n";
        t << "private gain exceeds expected social harm: " << (*th.private_gain_exceeds_expected_harm ? "yes" : "no")
          << "\n";
    } else {
        f["threshold"] = nullptr;
    }
    return r;
}

}  // namespace

std::string fixtures_dir() {
    if (const char* env = std::getenv("CAPCALC_FIXTURES"); env && *env) return env;
    return CAPCALC_FIXTURES_DIR;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"capcalc: capability values, externalities, games, rights paradoxes and pivotal votes"};
    app.require_subcommand(1);
    app.fallthrough();
    std::string format = "text";
    app.add_option("--format", format, "Report format")->check(CLI::IsMember({"text", "json"}));

    std::string file, file2, agent, state, proc, p, q, aggregator = "utilitarian-sum", policy = "rights-first";
    std::string deter, target, row_agent, col_agent, capability;
    std::vector<std::string> with, banned, row_caps, col_caps;
    std::size_t max_steps = 1000;
    PivotArgs pivot;

    auto* value = app.add_subcommand("value", "Local value v and capability value V of an agent at a state");
    value->add_option("scenario", file)->required();
    value->add_option("agent", agent)->required();
    value->add_option("state", state)->required();
    value->add_option("--with", with, "Social procedure available to the agent (repeatable)");

    auto* gain_cmd = app.add_subcommand("gain", "Gain G(i, w, b) from a social procedure");
    gain_cmd->add_option("scenario", file)->required();
    gain_cmd->add_option("agent", agent)->required();
    gain_cmd->add_option("state", state)->required();
    gain_cmd->add_option("procedure", proc)->required();

    auto* compare = app.add_subcommand("compare", "Compare two procedures over a population");
    compare->add_option("scenario", file)->required();
    compare->add_option("origins", file2, "JSON object agent -> origin state")->required();
    compare->add_option("first", p)->required();
    compare->add_option("second", q)->required();
    compare->add_option("--aggregator", aggregator, "utilitarian-sum | maximin | prioritarian");

    auto* independence = app.add_subcommand("independence", "Externalities, independence and product structure");
    independence->add_option("scenario", file)->required();

    auto* greedy = app.add_subcommand("greedy", "Greedy improvement trajectory");
    greedy->add_option("scenario", file)->required();
    greedy->add_option("agent", agent)->required();
    greedy->add_option("state", state)->required();
    greedy->add_option("--max-steps", max_steps);

    auto* restrict_cmd = app.add_subcommand("restrict", "Capability values before and after banning capabilities");
    restrict_cmd->add_option("scenario", file)->required();
    restrict_cmd->add_option("agent", agent)->required();
    restrict_cmd->add_option("banned", banned);

    auto* transfer = app.add_subcommand("transfer", "Per-agent effect of one capability application");
    transfer->add_option("scenario", file)->required();
    transfer->add_option("capability", capability)->required();
    transfer->add_option("state", state)->required();
    transfer->add_option("--aggregator", aggregator, "utilitarian-sum | maximin | prioritarian");

    auto* table = app.add_subcommand("table", "v and V for every agent and origin");
    table->add_option("scenario", file)->required();
    table->add_option("--with", with, "Social procedure, used by its beneficiaries (repeatable)");

    auto* equilibrium = app.add_subcommand("equilibrium", "Pure Nash equilibria, dominance and deterrence");
    equilibrium->add_option("game", file)->required();
    equilibrium->add_option("--deter", deter, "Row strategy to deter");
    equilibrium->add_option("--target", target, "Equilibrium to restore, as ROW,COL");

    auto* game = app.add_subcommand("game", "Build a two-player game from a scenario");
    game->add_option("scenario", file)->required();
    game->add_option("--row-agent", row_agent)->required();
    game->add_option("--col-agent", col_agent)->required();
    game->add_option("--row-cap", row_caps, "Row capability (repeatable)");
    game->add_option("--col-cap", col_caps, "Column capability (repeatable)");
    game->add_option("--origin", state)->required();

    auto* paradox = app.add_subcommand("paradox", "Rights, Pareto and the liberal paradox");
    paradox->add_option("profile", file)->required();
    paradox->add_option("--policy", policy, "rights-first | pareto-first");

    auto* pivot_cmd = app.add_subcommand("pivot", "Pivotal-vote probability and harm thresholds");
    pivot_cmd->add_option("--k", pivot.k, "Half the number of other voters");
    pivot_cmd->add_option("--electorate", pivot.electorate, "Number of other voters (even)");
    pivot_cmd->set_help_flag("--help", "Print this help message and exit");
    pivot_cmd->add_option("--h", pivot.h, "Harm if the bad outcome wins");
    pivot_cmd->add_flag("--exact", pivot.exact, "Also print the exact rational");
    pivot_cmd->add_option("--epsilon", pivot.epsilon, "Private gain per act");
    pivot_cmd->add_option("--population", pivot.population, "Number of people affected");
    pivot_cmd->add_option("--cost", pivot.cost, "Cost to compare epsilon * N against");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return kUsage;
    }

    try {
        bool failed = false;
        Report r;
        if (*value) r = cmd_value(file, agent, state, with);
        else if (*gain_cmd) r = cmd_gain(file, agent, state, proc);
        else if (*compare) r = cmd_compare(file, file2, p, q, aggregator);
        else if (*independence) r = cmd_independence(file);
        else if (*greedy) r = cmd_greedy(file, agent, state, max_steps);
        else if (*restrict_cmd) r = cmd_restrict(file, agent, banned);
        else if (*transfer) r = cmd_transfer(file, capability, state, aggregator);
        else if (*table) r = cmd_table(file, with);
        else if (*equilibrium) r = cmd_equilibrium(file, deter, target);
        else if (*game) r = cmd_game(file, row_agent, col_agent, row_caps, col_caps, state);
        else if (*paradox) r = cmd_paradox(file, policy, failed);
        else if (*pivot_cmd) r = cmd_pivot(pivot);
        emit(r, format == "json", out);
        return failed ? kDomainError : kOk;
    } catch (const UsageError& e) {
        err << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const LoadFailure& e) {
        err << "error: " << e.what() << "\n";
        return kLoadFailure;
    } catch (const ParseError& e) {
        err << "error: " << e.what() << "\n";
        return kLoadFailure;
    } catch (const ValidationError& e) {
        err << "error: " << e.what() << "\n";
        return kLoadFailure;
    } catch (const NameError& e) {
        err << "error: " << e.what() << "\n";
        return kUnknownName;
    } catch (const DomainError& e) {
        err << "error: " << e.what() << "\n";
        return kDomainError;
    }
}

}  // namespace capcalc::cli
