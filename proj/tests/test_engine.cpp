#include <algorithm>
#include <random>

#include "doctest.h"

#include "capcalc/engine.hpp"
#include "capcalc/error.hpp"
#include "support/fixtures.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

using namespace capcalc;
using capcalc::testing::fixture_scenario;

namespace {

// First sequence, in length-then-lexicographic order over usable map names, reaching each state.
std::map<StateId, std::vector<std::string>> brute_force_witnesses(const ScenarioData& d, const AgentId& agent,
                                                                  const StateId& origin) {
    std::vector<std::pair<std::string, const TransitionMap*>> maps;
    for (const auto& c : d.capabilities)
        if (c.owner == agent) maps.emplace_back(c.name, &c.transitions);
    std::sort(maps.begin(), maps.end());
    std::map<StateId, std::vector<std::string>> out;
    std::vector<std::size_t> seq;
    for (std::size_t len = 0; len <= d.states.size(); ++len) {
        if (len > 0 && maps.empty()) break;
        seq.assign(len, 0);
        while (true) {
            StateId w = origin;
            std::vector<std::string> names;
            for (const auto i : seq) {
                w = testing::apply_map(*maps[i].second, w);
                names.push_back(maps[i].first);
            }
            out.emplace(w, names);  // keeps the first
            // Odometer with the most significant digit first, so iteration is lexicographic.
            std::size_t pos = len;
            while (pos > 0 && ++seq[pos - 1] == maps.size()) seq[--pos] = 0;
            if (pos == 0) break;
        }
    }
    return out;
}

}  // namespace

TEST_CASE("aditi reaches the ice cream") {
    auto s = fixture_scenario("aditi");
    CHECK(local_value(s, "aditi", "home") == 0);
    auto cv = capability_value(s, "aditi", "home");
    CHECK(cv.value == 5);
    CHECK(cv.local_value == 0);
    CHECK(cv.best_state == "has-icecream");
    CHECK(cv.witness == std::vector<std::string>{"walk", "buy"});

    auto mother = capability_value(s, "mother", "home");
    CHECK(mother.value == 0);
    CHECK(mother.witness.empty());

    auto r = reachable(s, "aditi", "home");
    CHECK(r.states == std::vector<StateId>{"home", "shop", "has-icecream"});
    CHECK(r.witness.at("shop") == std::vector<std::string>{"walk"});
}

TEST_CASE("procedures are offered only to their beneficiaries") {
    auto sj = fixture_scenario("shiva-jack");
    const std::vector<std::string> transit{"accessible-transit"};
    CHECK(capability_value(sj, "shiva", "home", transit).value == 20);
    CHECK_THROWS_AS(capability_value(sj, "jack", "home", transit), DomainError);
}

TEST_CASE("unknown names raise NameError") {
    auto s = fixture_scenario("aditi");
    CHECK_THROWS_AS(local_value(s, "ghost", "home"), NameError);
    CHECK_THROWS_AS(capability_value(s, "aditi", "moon"), NameError);
    CHECK_THROWS_AS(gain(s, "aditi", "home", "teleport"), NameError);
    const std::vector<std::string> banned{"fly"};
    CHECK_THROWS_AS(restrict_capabilities(s, "aditi", banned), NameError);
    const std::vector<std::string> not_owned{"walk"};
    CHECK_THROWS_AS(restrict_capabilities(s, "mother", not_owned), NameError);
}

TEST_CASE("procedure gains") {
    auto far = fixture_scenario("aditi-far");
    auto g = gain(far, "aditi", "bus-stop", "bus");
    CHECK(g.value_before == 0);
    CHECK(g.value_after == 5);
    CHECK(g.gain == 5);
    // The neighbor can already drive from home; from the stop the bus is the only way on.
    CHECK(gain(far, "neighbor", "home", "bus").gain == 0);
    CHECK(gain(far, "neighbor", "bus-stop", "bus").gain == 4);

    auto sj = fixture_scenario("shiva-jack");
    CHECK(gain(sj, "shiva", "home", "accessible-transit").gain == 10);
    CHECK(capability_value(sj, "jack", "home").value == 20);
    // Jack is not a beneficiary of the transit procedure.
    CHECK(gain(sj, "jack", "home", "accessible-transit").gain == 0);
}

TEST_CASE("pool versus bus") {
    auto s = fixture_scenario("pool-bus");
    OriginMap origins{{"alice", "home"}, {"bob", "home"}, {"carol", "home"}};

    auto util = compare_procedures(s, origins, "pool", "bus", Aggregator::utilitarian_sum);
    CHECK(util.score_first == 12);
    CHECK(util.score_second == 9);
    CHECK(util.winner == Winner::first);
    CHECK(util.beneficiaries_first == std::vector<AgentId>{"alice", "bob"});
    CHECK(util.beneficiaries_second == std::vector<AgentId>{"carol"});

    // min V goes -4 -> -4 under the pool, -4 -> 0 under the bus.
    auto mm = compare_procedures(s, origins, "pool", "bus", Aggregator::maximin);
    CHECK(mm.score_first == 0);
    CHECK(mm.score_second == 4);
    CHECK(mm.winner == Winner::second);

    // Weights 1/(1 + V - min V): alice and bob 1/5, carol 1.
    auto pr = compare_procedures(s, origins, "pool", "bus", Aggregator::prioritarian);
    CHECK(pr.score_first == doctest::Approx(12.0 / 5));
    CHECK(pr.score_second == 9);
    CHECK(pr.winner == Winner::second);

    CHECK(per_capita_gain(s, origins, "pool") == 4);
    CHECK(per_capita_gain(s, origins, "bus") == 3);

    OriginMap partial{{"alice", "home"}};
    CHECK_THROWS_AS(compare_procedures(s, partial, "pool", "bus", Aggregator::maximin), DomainError);
    CHECK_THROWS_AS(compare_procedures(s, origins, "pool", "ferry", Aggregator::maximin), NameError);
}

TEST_CASE("restriction and greedy") {
    auto s = fixture_scenario("gun-school");
    const std::vector<std::string> banned{"enter-school-armed"};
    auto r = restrict_capabilities(s, "carrier", banned);
    CHECK(capability_value(s, "carrier", "street").value == 3);
    CHECK(capability_value(r, "carrier", "street").value == 2);
    CHECK_FALSE(r.find_move("enter-school-armed"));

    auto a = fixture_scenario("aditi");
    auto t = greedy_trajectory(a, "aditi", "home", 10);
    REQUIRE(t.steps.size() == 2);
    CHECK(t.steps[0].capability == "walk");
    CHECK(t.steps[1].state == "has-icecream");
    CHECK(t.terminated == Termination::fixpoint);

    auto capped = greedy_trajectory(a, "aditi", "home", 1);
    CHECK(capped.steps.size() == 1);
    CHECK(capped.terminated == Termination::step_cap);
}

TEST_CASE("monotonicity and bounds [property]") {
    std::mt19937_64 rng(2024);
    for (int iter = 0; iter < 300; ++iter) {
        auto s = Scenario::build(testing::random_scenario(rng));
        for (std::size_t a = 0; a < s.agent_count(); ++a)
            for (std::size_t w = 0; w < s.state_count(); ++w) {
                const auto& agent = s.agent(a);
                const auto& origin = s.state(w);
                auto cv = capability_value(s, agent, origin);
                CHECK(cv.value >= s.value(a, w));
                for (const auto& p : s.data().procedures) CHECK(gain(s, agent, origin, p.name).gain >= 0);
                for (const auto& c : s.data().capabilities) {
                    if (c.owner != agent) continue;
                    const std::vector<std::string> banned{c.name};
                    CHECK(capability_value(restrict_capabilities(s, agent, banned), agent, origin).value <= cv.value);
                }
                auto t = greedy_trajectory(s, agent, origin, 20);
                double prev = s.value(a, w);
                for (const auto& step : t.steps) {
                    CHECK(step.value > prev);
                    prev = step.value;
                }
                CHECK(prev <= cv.value);
            }
    }
}

TEST_CASE("capability value matches enumeration [property]") {
    std::mt19937_64 rng(77);
    for (int iter = 0; iter < 300; ++iter) {
        auto d = testing::random_scenario(rng);
        auto s = Scenario::build(d);
        for (const auto& a : d.agents)
            for (const auto& w : d.states) {
                std::vector<std::string> procs;
                for (const auto& p : d.procedures)
                    if (p.beneficiaries.contains(a)) procs.push_back(p.name);
                CHECK(capability_value(s, a, w.id).value == testing::brute_force_capability_value(d, a, w.id));
                CHECK(capability_value(s, a, w.id, procs).value ==
                      testing::brute_force_capability_value(d, a, w.id, procs));
            }
    }
}

TEST_CASE("witnesses are the least shortest sequences [property]") {
    std::mt19937_64 rng(5);
    for (int iter = 0; iter < 200; ++iter) {
        auto d = testing::random_scenario(rng);
        auto s = Scenario::build(d);
        for (const auto& a : d.agents)
            for (const auto& w : d.states) {
                auto r = reachable(s, a, w.id);
                auto expected = brute_force_witnesses(d, a, w.id);
                REQUIRE(r.witness.size() == expected.size());
                for (const auto& [state, path] : expected) CHECK(r.witness.at(state) == path);
                CHECK(r.states.front() == w.id);

                auto cv = capability_value(s, a, w.id);
                StateId end = w.id;
                for (const auto& name : cv.witness)
                    for (const auto& c : d.capabilities)
                        if (c.name == name) end = testing::apply_map(c.transitions, end);
                CHECK(end == cv.best_state);
                CHECK(d.values.at(a).at(end) == cv.value);
            }
    }
}
