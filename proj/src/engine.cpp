#include "capcalc/engine.hpp"

#include <algorithm>
#include <limits>

#include "capcalc/error.hpp"

namespace capcalc {

namespace detail {

std::vector<std::size_t> usable_moves(const Scenario& s, std::size_t agent,
                                      std::span<const std::string> extra_procedures, bool require_beneficiary) {
    std::vector<std::size_t> out = s.owned_moves(agent);
    for (const auto& name : extra_procedures) {
        const auto m = s.move_index(name);
        const Move& mv = s.move(m);
        if (mv.kind != MoveKind::procedure) throw NameError("\"" + name + "\" is a capability, not a procedure");
        if (!mv.usable_by(agent)) {
            if (require_beneficiary)
                throw DomainError("procedure \"" + name + "\" does not list agent \"" + s.agent(agent) +
                                  "\" among its beneficiaries");
            continue;
        }
        out.push_back(m);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

double reach_max(const Scenario& s, std::size_t agent, std::size_t origin, std::span<const std::size_t> moves,
                 std::vector<char>& visited, std::vector<std::size_t>& queue) {
    visited.assign(s.state_count(), 0);
    queue.clear();
    queue.push_back(origin);
    visited[origin] = 1;
    double best = s.value(agent, origin);
    for (std::size_t head = 0; head < queue.size(); ++head) {
        const auto w = queue[head];
        for (const auto m : moves) {
            const auto t = s.move(m).target[w];
            if (visited[t]) continue;
            visited[t] = 1;
            queue.push_back(t);
            best = std::max(best, s.value(agent, t));
        }
    }
    return best;
}

}  // namespace detail

namespace {

struct Search {
    std::vector<std::size_t> order;                             // discovery order
    std::vector<std::pair<std::size_t, std::size_t>> parent;    // (previous state, move)
    std::vector<char> seen;
};

// BFS expanding moves in name order from a FIFO queue. The first discovery of a state is
// its lexicographically least shortest path.
Search search(const Scenario& s, std::size_t origin, std::span<const std::size_t> moves) {
    Search r;
    r.seen.assign(s.state_count(), 0);
    r.parent.assign(s.state_count(), {0, 0});
    r.order.push_back(origin);
    r.seen[origin] = 1;
    for (std::size_t head = 0; head < r.order.size(); ++head) {
        const auto w = r.order[head];
        for (const auto m : moves) {
            const auto t = s.move(m).target[w];
            if (r.seen[t]) continue;
            r.seen[t] = 1;
            r.parent[t] = {w, m};
            r.order.push_back(t);
        }
    }
    return r;
}

std::vector<std::string> witness_of(const Scenario& s, const Search& r, std::size_t origin, std::size_t target) {
    std::vector<std::string> path;
    for (auto w = target; w != origin; w = r.parent[w].first) path.push_back(s.move(r.parent[w].second).name);
    std::reverse(path.begin(), path.end());
    return path;
}

std::size_t procedure_index(const Scenario& s, std::string_view name) {
    const auto m = s.find_move(name);
    if (!m || s.move(*m).kind != MoveKind::procedure)
        throw NameError("unknown procedure \"" + std::string(name) + "\"");
    return *m;
}

std::vector<std::size_t> origin_indices(const Scenario& s, const OriginMap& origins) {
    for (const auto& [agent, _] : origins) s.agent_index(agent);
    std::vector<std::size_t> out;
    for (std::size_t a = 0; a < s.agent_count(); ++a) {
        auto it = origins.find(s.agent(a));
        if (it == origins.end()) throw DomainError("no origin state given for agent \"" + s.agent(a) + "\"");
        out.push_back(s.state_index(it->second));
    }
    return out;
}

}  // namespace

double local_value(const Scenario& s, std::string_view agent, std::string_view state) {
    return s.value(s.agent_index(agent), s.state_index(state));
}

ReachableSet reachable(const Scenario& s, std::string_view agent, std::string_view origin,
                       std::span<const std::string> extra_procedures) {
    const auto a = s.agent_index(agent);
    const auto o = s.state_index(origin);
    const auto moves = detail::usable_moves(s, a, extra_procedures, true);
    const auto r = search(s, o, moves);

    ReachableSet out{s.agent(a), s.state(o), {}, {}};
    for (const auto w : r.order) {
        out.states.push_back(s.state(w));
        out.witness.emplace(s.state(w), witness_of(s, r, o, w));
    }
    return out;
}

CapabilityValue capability_value(const Scenario& s, std::string_view agent, std::string_view origin,
                                 std::span<const std::string> extra_procedures) {
    const auto a = s.agent_index(agent);
    const auto o = s.state_index(origin);
    const auto moves = detail::usable_moves(s, a, extra_procedures, true);
    const auto r = search(s, o, moves);

    std::size_t best = o;
    for (const auto w : r.order) {
        const double v = s.value(a, w);
        const double b = s.value(a, best);
        if (v > b || (v == b && s.state(w) < s.state(best))) best = w;
    }
    return {s.agent(a), s.state(o), s.value(a, o), s.value(a, best), s.state(best), witness_of(s, r, o, best)};
}

GainReport gain(const Scenario& s, std::string_view agent, std::string_view origin, std::string_view procedure) {
    const auto a = s.agent_index(agent);
    const auto o = s.state_index(origin);
    const auto p = procedure_index(s, procedure);

    std::vector<char> visited;
    std::vector<std::size_t> queue;
    auto moves = s.owned_moves(a);
    const double before = detail::reach_max(s, a, o, moves, visited, queue);
    double after = before;
    if (s.move(p).usable_by(a)) {
        moves.push_back(p);
        after = detail::reach_max(s, a, o, moves, visited, queue);
    }
    return {s.agent(a), s.state(o), s.move(p).name, before, after, after - before};
}

Scenario restrict_capabilities(const Scenario& s, std::string_view agent, std::span<const std::string> banned) {
    const auto a = s.agent_index(agent);
    for (const auto& name : banned) {
        const auto m = s.find_move(name);
        if (!m || s.move(*m).kind != MoveKind::capability || s.move(*m).owner != a)
            throw NameError("\"" + name + "\" is not a capability of agent \"" + s.agent(a) + "\"");
    }
    ScenarioData d = s.data();
    std::erase_if(d.capabilities, [&](const Capability& c) {
        return std::find(banned.begin(), banned.end(), c.name) != banned.end();
    });
    return Scenario::build(std::move(d));
}

Trajectory greedy_trajectory(const Scenario& s, std::string_view agent, std::string_view origin,
                             std::size_t max_steps) {
    const auto a = s.agent_index(agent);
    auto w = s.state_index(origin);
    const auto moves = s.owned_moves(a);

    Trajectory t{s.agent(a), s.state(w), {}, Termination::fixpoint};
    auto best_move = [&]() -> std::optional<std::size_t> {
        std::optional<std::size_t> best;
        double best_inc = 0.0;
        for (const auto m : moves) {
            const double inc = s.value(a, s.move(m).target[w]) - s.value(a, w);
            if (inc > best_inc) {
                best_inc = inc;
                best = m;
            }
        }
        return best;
    };

    while (auto m = best_move()) {
        if (t.steps.size() == max_steps) {
            t.terminated = Termination::step_cap;
            break;
        }
        w = s.move(*m).target[w];
        t.steps.push_back({s.move(*m).name, s.state(w), s.value(a, w)});
    }
    return t;
}

ProcedureComparison compare_procedures(const Scenario& s, const OriginMap& origins, std::string_view first,
                                       std::string_view second, Aggregator aggregator) {
    procedure_index(s, first);
    procedure_index(s, second);
    const auto origin_ix = origin_indices(s, origins);

    ProcedureComparison c;
    c.aggregator = aggregator;
    c.first = first;
    c.second = second;

    std::vector<double> base, locals, after_first, after_second;
    for (std::size_t a = 0; a < s.agent_count(); ++a) {
        const auto o = origin_ix[a];
        auto g1 = gain(s, s.agent(a), s.state(o), first);
        auto g2 = gain(s, s.agent(a), s.state(o), second);
        base.push_back(g1.value_before);
        locals.push_back(s.value(a, o));
        after_first.push_back(g1.value_after);
        after_second.push_back(g2.value_after);
        if (g1.gain > 0) c.beneficiaries_first.push_back(s.agent(a));
        if (g2.gain > 0) c.beneficiaries_second.push_back(s.agent(a));
        c.gains_first.push_back(std::move(g1));
        c.gains_second.push_back(std::move(g2));
    }
    c.score_first = aggregate_change(aggregator, base, after_first, locals);
    c.score_second = aggregate_change(aggregator, base, after_second, locals);
    c.winner = c.score_first > c.score_second ? Winner::first
             : c.score_second > c.score_first ? Winner::second
                                              : Winner::tie;
    return c;
}

double per_capita_gain(const Scenario& s, const OriginMap& origins, std::string_view procedure) {
    procedure_index(s, procedure);
    const auto origin_ix = origin_indices(s, origins);
    if (origin_ix.empty()) return 0.0;
    double sum = 0.0;
    for (std::size_t a = 0; a < s.agent_count(); ++a) sum += gain(s, s.agent(a), s.state(origin_ix[a]), procedure).gain;
    return sum / static_cast<double>(origin_ix.size());
}

}  // namespace capcalc
