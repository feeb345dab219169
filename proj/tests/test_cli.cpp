#include <sstream>

#include "doctest.h"
#include "json.hpp"

#include "cli.hpp"
#include "support/fixtures.hpp"

namespace {

struct Outcome {
    int code;
    std::string out;
    std::string err;
};

Outcome run(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = capcalc::cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

std::string fx(const std::string& name) { return capcalc::testing::fixture_path(name); }

}  // namespace

TEST_CASE("value report") {
    auto r = run({"value", fx("aditi.scenario.json"), "aditi", "home"});
    CHECK(r.code == 0);
    CHECK(r.out.rfind("capcalc value\n", 0) == 0);
    CHECK(r.out.find("sha256:") != std::string::npos);
    CHECK(r.out.find("walk -> buy") != std::string::npos);

    auto j = run({"--format", "json", "value", fx("aditi.scenario.json"), "aditi", "home"});
    REQUIRE(j.code == 0);
    auto doc = nlohmann::json::parse(j.out);
    CHECK(doc["command"] == "value");
    CHECK(doc["format"] == "json");
    CHECK(doc["inputs"][0]["sha256"].get<std::string>().size() == 64);
    CHECK(doc["findings"]["capability_value"] == 5.0);
}

TEST_CASE("bare file names resolve against the fixtures directory") {
    CHECK(run({"value", "aditi.scenario.json", "aditi", "home"}).code == 0);
}

TEST_CASE("exit codes") {
    CHECK(run({}).code == capcalc::cli::kUsage);
    CHECK(run({"frobnicate"}).code == capcalc::cli::kUsage);
    CHECK(run({"value", fx("aditi.scenario.json")}).code == capcalc::cli::kUsage);
    CHECK(run({"pivot"}).code == capcalc::cli::kUsage);

    CHECK(run({"value", "no-such-file.json", "a", "b"}).code == capcalc::cli::kLoadFailure);
    CHECK(run({"equilibrium", fx("aditi.scenario.json")}).code == capcalc::cli::kLoadFailure);

    CHECK(run({"value", fx("aditi.scenario.json"), "ghost", "home"}).code == capcalc::cli::kUnknownName);
    CHECK(run({"gain", fx("aditi-far.scenario.json"), "aditi", "home", "ferry"}).code == capcalc::cli::kUnknownName);
    CHECK(run({"compare", fx("pool-bus.scenario.json"), fx("pool-bus.origins.json"), "pool", "bus", "--aggregator",
               "median"})
              .code == capcalc::cli::kUnknownName);
    CHECK(run({"paradox", fx("sen-lady-chatterley.profile.json"), "--policy", "dictator"}).code ==
          capcalc::cli::kUnknownName);

    CHECK(run({"independence", fx("aditi.scenario.json")}).code == 0);
    CHECK(run({"equilibrium", fx("threat.game.json"), "--deter", "threaten", "--target", "threaten,give"}).code ==
          capcalc::cli::kDomainError);
    CHECK(run({"pivot", "--electorate", "7"}).code == capcalc::cli::kDomainError);
}

TEST_CASE("errors go to stderr and name the culprit") {
    auto r = run({"value", fx("aditi.scenario.json"), "ghost", "home"});
    CHECK(r.out.empty());
    CHECK(r.err.find("ghost") != std::string::npos);
}

TEST_CASE("threat deterrence through the command line") {
    auto r = run({"--format", "json", "equilibrium", fx("threat.game.json"), "--deter", "threaten", "--target",
                  "buy,give"});
    REQUIRE(r.code == 0);
    auto doc = nlohmann::json::parse(r.out);
    CHECK(doc["findings"]["deterrence"]["penalty"] == 600.0);
    CHECK(doc["findings"]["deterrence"]["open"] == true);
}
