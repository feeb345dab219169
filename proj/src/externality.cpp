#include "capcalc/externality.hpp"

#include <algorithm>
#include <map>
#include <tuple>

#include "capcalc/error.hpp"

namespace capcalc {

Sign sign_of(double delta) { return delta > 0 ? Sign::positive : delta < 0 ? Sign::negative : Sign::none; }

std::string to_string(Sign s) {
    switch (s) {
        case Sign::positive: return "positive";
        case Sign::negative: return "negative";
        case Sign::none: return "none";
    }
    return "?";
}

std::string to_string(FactorizationRule r) {
    switch (r) {
        case FactorizationRule::value_depends_on_other_coordinate: return "value-depends-on-other-coordinate";
        case FactorizationRule::capability_changes_other_coordinate: return "capability-changes-other-coordinate";
    }
    return "?";
}

std::vector<ExternalityRecord> externality_report(const Scenario& s) {
    std::vector<ExternalityRecord> out;
    for (const auto& m : s.moves()) {
        if (m.kind != MoveKind::capability) continue;
        for (const auto w : m.domain) {
            const auto t = m.target[w];
            for (std::size_t j = 0; j < s.agent_count(); ++j) {
                if (j == m.owner) continue;
                const double delta = s.value(j, t) - s.value(j, w);
                if (delta != 0.0) out.push_back({s.agent(m.owner), m.name, s.state(w), s.agent(j), delta, sign_of(delta)});
            }
        }
    }
    std::sort(out.begin(), out.end(), [](const ExternalityRecord& a, const ExternalityRecord& b) {
        return std::tie(a.actor, a.capability, a.state, a.affected) <
               std::tie(b.actor, b.capability, b.state, b.affected);
    });
    return out;
}

IndependenceVerdict check_independence(const Scenario& s) {
    IndependenceVerdict v;
    v.violations = externality_report(s);
    v.holds = v.violations.empty();
    return v;
}

FactorizationVerdict check_factorization(const Scenario& s) {
    if (!s.data().factor_spec) throw DomainError("scenario has no factor_spec; product structure is undeclared");

    FactorizationVerdict v;
    // (a) each agent's value is a function of its own coordinate. Within a group of states
    // sharing coordinate i, compare against the group's lexicographically least state.
    std::vector<std::size_t> by_id(s.state_count());
    for (std::size_t w = 0; w < by_id.size(); ++w) by_id[w] = w;
    std::sort(by_id.begin(), by_id.end(), [&](auto x, auto y) { return s.state(x) < s.state(y); });
    for (std::size_t i = 0; i < s.agent_count(); ++i) {
        std::map<std::string, std::size_t> representative;
        for (const auto w : by_id) {
            const auto [it, fresh] = representative.emplace(s.coordinates(w)[i], w);
            if (!fresh && s.value(i, w) != s.value(i, it->second))
                v.violations.push_back({FactorizationRule::value_depends_on_other_coordinate, s.agent(i), "",
                                        s.state(it->second), s.state(w), i});
        }
    }
    // (b) each capability changes only its owner's coordinate.
    for (const auto& m : s.moves()) {
        if (m.kind != MoveKind::capability) continue;
        for (const auto w : m.domain) {
            const auto& from = s.coordinates(w);
            const auto& to = s.coordinates(m.target[w]);
            for (std::size_t c = 0; c < from.size(); ++c) {
                if (c == m.owner || from[c] == to[c]) continue;
                v.violations.push_back({FactorizationRule::capability_changes_other_coordinate, s.agent(m.owner),
                                        m.name, s.state(w), s.state(m.target[w]), c});
            }
        }
    }
    v.holds = v.violations.empty();
    return v;
}

TransferReport transfer_analysis(const Scenario& s, std::string_view capability, std::string_view state,
                                 Aggregator aggregator) {
    const auto m = s.find_move(capability);
    if (!m || s.move(*m).kind != MoveKind::capability)
        throw NameError("unknown capability \"" + std::string(capability) + "\"");
    const auto w = s.state_index(state);
    const auto t = s.move(*m).target[w];

    TransferReport r;
    r.capability = capability;
    r.from = s.state(w);
    r.to = s.state(t);
    r.aggregator = aggregator;
    std::vector<double> before, after;
    bool loser = false;
    for (std::size_t a = 0; a < s.agent_count(); ++a) {
        before.push_back(s.value(a, w));
        after.push_back(s.value(a, t));
        const double d = after.back() - before.back();
        loser = loser || d < 0;
        r.deltas.emplace_back(s.agent(a), d);
    }
    r.aggregate_change = aggregate_change(aggregator, before, after, before);
    r.improving_despite_loser = loser && r.aggregate_change > 0;
    return r;
}

}  // namespace capcalc
