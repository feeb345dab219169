#include <random>
#include <tuple>

#include "doctest.h"

#include "capcalc/error.hpp"
#include "capcalc/externality.hpp"
#include "support/fixtures.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

using namespace capcalc;
using capcalc::testing::fixture_scenario;

namespace {

// Records regenerated straight from the definition, in report order.
std::vector<ExternalityRecord> expected_records(const ScenarioData& d) {
    std::vector<ExternalityRecord> out;
    for (const auto& c : d.capabilities)
        for (const auto& [from, to] : c.transitions)
            for (const auto& j : d.agents) {
                if (j == c.owner) continue;
                const double delta = d.values.at(j).at(to) - d.values.at(j).at(from);
                if (delta != 0)
                    out.push_back({c.owner, c.name, from, j, delta, delta > 0 ? Sign::positive : Sign::negative});
            }
    std::sort(out.begin(), out.end(), [](const auto& x, const auto& y) {
        return std::tie(x.actor, x.capability, x.state, x.affected) < std::tie(y.actor, y.capability, y.state, y.affected);
    });
    return out;
}

}  // namespace

TEST_CASE("aditi's walk worries her mother") {
    auto s = fixture_scenario("aditi");
    auto v = check_independence(s);
    CHECK_FALSE(v.holds);
    REQUIRE(v.violations.size() == 1);
    CHECK(v.violations[0] == ExternalityRecord{"aditi", "walk", "home", "mother", -2, Sign::negative});
}

TEST_CASE("the shop gains a little from a sale") {
    auto s = fixture_scenario("icecream-shop");
    auto recs = externality_report(s);
    REQUIRE(recs.size() == 1);
    CHECK(recs[0].affected == "shop");
    CHECK(recs[0].delta == doctest::Approx(0.25));
    CHECK(recs[0].sign == Sign::positive);
}

TEST_CASE("snoring breaks independence and factorization") {
    auto s = fixture_scenario("snoring");
    auto ind = check_independence(s);
    CHECK_FALSE(ind.holds);
    REQUIRE(ind.violations.size() == 2);
    CHECK(ind.violations[0].capability == "roll-to-back");
    CHECK(ind.violations[0].delta == -5);
    CHECK(ind.violations[1].capability == "roll-to-belly");
    CHECK(ind.violations[1].delta == 5);

    auto fac = check_factorization(s);
    CHECK_FALSE(fac.holds);
    REQUIRE_FALSE(fac.violations.empty());
    for (const auto& v : fac.violations) {
        CHECK(v.rule == FactorizationRule::value_depends_on_other_coordinate);
        CHECK(v.agent == "spouse");
    }
}

TEST_CASE("bathroom factorizes") {
    auto s = fixture_scenario("bathroom");
    CHECK(check_factorization(s).holds);
    CHECK(check_independence(s).holds);
    CHECK_THROWS_AS(check_factorization(fixture_scenario("aditi")), DomainError);
}

TEST_CASE("capability touching another coordinate is flagged") {
    auto d = fixture_scenario("bathroom").data();
    d.capabilities[0].transitions["white.white"] = "red.blue";
    auto fac = check_factorization(Scenario::build(d));
    CHECK_FALSE(fac.holds);
    bool found = false;
    for (const auto& v : fac.violations)
        if (v.rule == FactorizationRule::capability_changes_other_coordinate && v.capability == "paint-red" &&
            v.first == "white.white" && v.second == "red.blue" && v.coordinate == 1)
            found = true;
    CHECK(found);
}

TEST_CASE("transfers under each aggregator") {
    auto s = fixture_scenario("transfer");
    auto u = transfer_analysis(s, "transfer-100-to-poor", "status-quo", Aggregator::utilitarian_sum);
    CHECK(u.to == "rich-to-poor");
    CHECK(u.deltas == std::vector<std::pair<AgentId, double>>{{"planner", 0}, {"rich", -10}, {"poor", 60}});
    CHECK(u.aggregate_change == 50);
    CHECK(u.improving_despite_loser);

    // The planner sits at 0 throughout, so the minimum does not move.
    auto m = transfer_analysis(s, "transfer-100-to-poor", "status-quo", Aggregator::maximin);
    CHECK(m.aggregate_change == 0);
    CHECK_FALSE(m.improving_despite_loser);

    auto p = transfer_analysis(s, "transfer-100-to-poor", "status-quo", Aggregator::prioritarian);
    CHECK(p.aggregate_change == doctest::Approx(60.0 / 11 - 10.0 / 101));

    auto back = transfer_analysis(s, "transfer-100-to-rich", "status-quo", Aggregator::utilitarian_sum);
    CHECK(back.aggregate_change == -50);
    CHECK_FALSE(back.improving_despite_loser);

    CHECK_THROWS_AS(transfer_analysis(s, "tax", "status-quo", Aggregator::maximin), NameError);
}

TEST_CASE("externality records match the definition [property]") {
    std::mt19937_64 rng(31);
    for (int i = 0; i < 300; ++i) {
        auto d = testing::random_scenario(rng);
        auto s = Scenario::build(d);
        auto recs = externality_report(s);
        CHECK(recs == expected_records(d));
        for (const auto& r : recs) {
            CHECK(r.affected != r.actor);
            CHECK(r.sign == sign_of(r.delta));
        }
        auto v = check_independence(s);
        CHECK(v.holds == v.violations.empty());
        CHECK(v.violations == recs);
    }
}

TEST_CASE("factorization implies independence [property]") {
    std::mt19937_64 rng(8);
    int factorized = 0;
    for (int i = 0; i < 300; ++i) {
        auto s = Scenario::build(testing::random_product_scenario(rng, i % 2 == 1));
        if (check_factorization(s).holds) {
            ++factorized;
            CHECK(check_independence(s).holds);
        }
    }
    CHECK(factorized > 100);
}
