#include <limits>

#include "capcalc/error.hpp"
#include "capcalc/model.hpp"
#include "json_util.hpp"

namespace capcalc {

using nlohmann::json;
using namespace detail;

namespace {

TransitionMap read_transitions(const json& j, const std::string& where) {
    TransitionMap t;
    for (const auto& [from, to] : as_object(j, where).items()) t.emplace(from, as_string(to, where + "." + from));
    return t;
}

}  // namespace

Scenario load_scenario(std::string_view text) {
    const json root = parse_strict(text, "scenario");
    expect_keys(root, "scenario", {"agents", "states", "values", "capabilities", "procedures", "factor_spec"});

    ScenarioData d;
    for (const auto& a : as_array(require(root, "scenario", "agents"), "agents")) d.agents.push_back(as_string(a, "agents[]"));

    for (const auto& s : as_array(require(root, "scenario", "states"), "states")) {
        expect_keys(s, "states[]", {"id", "labels"});
        WorldState ws;
        ws.id = as_string(require(s, "states[]", "id"), "states[].id");
        if (auto it = s.find("labels"); it != s.end())
            for (const auto& l : as_array(*it, "states[].labels")) ws.labels.insert(as_string(l, "states[].labels[]"));
        d.states.push_back(std::move(ws));
    }

    for (const auto& [agent, row] : as_object(require(root, "scenario", "values"), "values").items()) {
        auto& out = d.values[agent];
        for (const auto& [state, v] : as_object(row, "values." + agent).items())
            out.emplace(state, as_number(v, "values." + agent + "." + state));
    }

    if (auto it = root.find("capabilities"); it != root.end()) {
        for (const auto& c : as_array(*it, "capabilities")) {
            expect_keys(c, "capabilities[]", {"name", "owner", "transitions"});
            Capability cap;
            cap.name = as_string(require(c, "capabilities[]", "name"), "capabilities[].name");
            const auto where = "capability \"" + cap.name + "\"";
            cap.owner = as_string(require(c, where, "owner"), where + ".owner");
            cap.transitions = read_transitions(require(c, where, "transitions"), where + ".transitions");
            d.capabilities.push_back(std::move(cap));
        }
    }

    if (auto it = root.find("procedures"); it != root.end()) {
        for (const auto& p : as_array(*it, "procedures")) {
            expect_keys(p, "procedures[]", {"name", "beneficiaries", "transitions"});
            SocialProcedure proc;
            proc.name = as_string(require(p, "procedures[]", "name"), "procedures[].name");
            const auto where = "procedure \"" + proc.name + "\"";
            for (const auto& b : as_array(require(p, where, "beneficiaries"), where + ".beneficiaries"))
                proc.beneficiaries.insert(as_string(b, where + ".beneficiaries[]"));
            proc.transitions = read_transitions(require(p, where, "transitions"), where + ".transitions");
            d.procedures.push_back(std::move(proc));
        }
    }

    if (auto it = root.find("factor_spec"); it != root.end()) {
        expect_keys(*it, "factor_spec", {"arity", "separator"});
        const auto& arity = require(*it, "factor_spec", "arity");
        if (!arity.is_number_integer()) throw ParseError("factor_spec.arity: expected an integer");
        const auto a = arity.get<long long>();
        if (a < std::numeric_limits<int>::min() || a > std::numeric_limits<int>::max())
            throw ParseError("factor_spec.arity: out of range");
        d.factor_spec = FactorSpec{static_cast<int>(a), as_string(require(*it, "factor_spec", "separator"), "factor_spec.separator")};
    }

    return Scenario::build(std::move(d));
}

std::string serialize(const ScenarioData& d) {
    using ojson = nlohmann::ordered_json;
    ojson root;
    root["agents"] = d.agents;
    root["states"] = ojson::array();
    for (const auto& s : d.states) root["states"].push_back({{"id", s.id}, {"labels", s.labels}});
    root["values"] = ojson::object();
    for (const auto& a : d.agents) {
        ojson row = ojson::object();
        if (auto it = d.values.find(a); it != d.values.end())
            for (const auto& s : d.states)
                if (auto v = it->second.find(s.id); v != it->second.end()) row[s.id] = v->second;
        root["values"][a] = std::move(row);
    }
    root["capabilities"] = ojson::array();
    for (const auto& c : d.capabilities)
        root["capabilities"].push_back({{"name", c.name}, {"owner", c.owner}, {"transitions", c.transitions}});
    root["procedures"] = ojson::array();
    for (const auto& p : d.procedures)
        root["procedures"].push_back(
            {{"name", p.name}, {"beneficiaries", p.beneficiaries}, {"transitions", p.transitions}});
    if (d.factor_spec) root["factor_spec"] = {{"arity", d.factor_spec->arity}, {"separator", d.factor_spec->separator}};
    return root.dump(2) + "\n";
}

}  // namespace capcalc
