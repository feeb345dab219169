#include "capcalc/paradox.hpp"

#include <algorithm>
#include <deque>

#include "capcalc/error.hpp"
#include "json_util.hpp"

namespace capcalc {

using nlohmann::json;

bool PreferenceProfile::prefers(const AgentId& agent, std::string_view x, std::string_view y) const {
    const auto& r = rankings.at(agent);
    const auto px = std::find(r.begin(), r.end(), x);
    const auto py = std::find(r.begin(), r.end(), y);
    return px < py && py != r.end();
}

void validate_profile(const PreferenceProfile& profile, const RightsAssignment& rights) {
    std::vector<std::string> v;
    std::set<std::string> outcomes;
    for (const auto& o : profile.outcomes) {
        if (!is_token(o)) v.push_back("outcome \"" + o + "\": id must be a non-empty token over [A-Za-z0-9_-]");
        if (!outcomes.insert(o).second) v.push_back("outcome \"" + o + "\": duplicate outcome id");
    }
    for (const auto& [agent, ranking] : profile.rankings) {
        std::set<std::string> seen(ranking.begin(), ranking.end());
        if (ranking.size() != profile.outcomes.size() || seen != outcomes)
            v.push_back("ranking of \"" + agent + "\": must list every outcome exactly once");
    }
    std::map<std::pair<std::string, std::string>, std::string> holder;
    for (const auto& [agent, pairs] : rights) {
        if (!profile.rankings.contains(agent)) v.push_back("rights of \"" + agent + "\": agent has no ranking");
        for (const auto& [x, y] : pairs) {
            for (const auto* o : {&x, &y})
                if (!outcomes.contains(*o))
                    v.push_back("rights of \"" + agent + "\": unknown outcome \"" + *o + "\"");
            if (x == y) v.push_back("rights of \"" + agent + "\": pair {" + x + ", " + y + "} repeats an outcome");
            const auto key = std::minmax(x, y);
            const auto [it, fresh] = holder.emplace(std::pair{key.first, key.second}, agent);
            if (!fresh && it->second != agent)
                v.push_back("rights of \"" + agent + "\": pair {" + x + ", " + y + "} already assigned to \"" +
                            it->second + "\"");
        }
    }
    if (!v.empty()) throw ValidationError(std::move(v));
}

ProfileDocument load_profile(std::string_view text) {
    using namespace detail;
    const json root = parse_strict(text, "profile");
    expect_keys(root, "profile", {"outcomes", "rankings", "rights"});

    ProfileDocument doc;
    for (const auto& o : as_array(require(root, "profile", "outcomes"), "outcomes"))
        doc.profile.outcomes.push_back(as_string(o, "outcomes[]"));
    for (const auto& [agent, ranking] : as_object(require(root, "profile", "rankings"), "rankings").items()) {
        auto& out = doc.profile.rankings[agent];
        for (const auto& o : as_array(ranking, "rankings." + agent)) out.push_back(as_string(o, "rankings." + agent + "[]"));
    }
    if (auto it = root.find("rights"); it != root.end()) {
        for (const auto& [agent, pairs] : as_object(*it, "rights").items()) {
            auto& out = doc.rights[agent];
            for (const auto& p : as_array(pairs, "rights." + agent)) {
                if (!p.is_array() || p.size() != 2)
                    throw ParseError("rights." + agent + ": each right must be a 2-element outcome array");
                out.emplace_back(as_string(p[0], "rights." + agent + "[][0]"), as_string(p[1], "rights." + agent + "[][1]"));
            }
        }
    }
    validate_profile(doc.profile, doc.rights);
    return doc;
}

void SocialRelation::add(const std::string& better, const std::string& worse, Provenance why) {
    edges_[{better, worse}].insert(std::move(why));
}

void SocialRelation::merge(const SocialRelation& other) {
    for (const auto& [k, tags] : other.edges_) edges_[k].insert(tags.begin(), tags.end());
}

bool SocialRelation::contains(std::string_view better, std::string_view worse) const {
    return edges_.contains(std::pair{std::string(better), std::string(worse)});
}

std::vector<Edge> SocialRelation::edges() const {
    std::vector<Edge> out;
    for (const auto& [k, tags] : edges_) out.push_back({k.first, k.second, {tags.begin(), tags.end()}});
    return out;
}

std::optional<Edge> SocialRelation::edge(std::string_view better, std::string_view worse) const {
    auto it = edges_.find(std::pair{std::string(better), std::string(worse)});
    if (it == edges_.end()) return std::nullopt;
    return Edge{it->first.first, it->first.second, {it->second.begin(), it->second.end()}};
}

std::string to_string(EdgeSource s) {
    switch (s) {
        case EdgeSource::right: return "right";
        case EdgeSource::pareto: return "pareto";
        case EdgeSource::transitivity: return "transitivity";
    }
    return "?";
}

SocialRelation rights_edges(const PreferenceProfile& profile, const RightsAssignment& rights) {
    SocialRelation r;
    for (const auto& [agent, pairs] : rights) {
        for (const auto& [x, y] : pairs) {
            if (profile.prefers(agent, x, y)) r.add(x, y, {EdgeSource::right, agent});
            else r.add(y, x, {EdgeSource::right, agent});
        }
    }
    return r;
}

SocialRelation pareto_edges(const PreferenceProfile& profile) {
    SocialRelation r;
    if (profile.rankings.empty()) return r;
    for (const auto& x : profile.outcomes)
        for (const auto& y : profile.outcomes) {
            if (x == y) continue;
            const bool unanimous = std::all_of(profile.rankings.begin(), profile.rankings.end(),
                                               [&](const auto& kv) { return profile.prefers(kv.first, x, y); });
            if (unanimous) r.add(x, y, {EdgeSource::pareto, {}});
        }
    return r;
}

namespace {

// Successors of each outcome under `r`, in id order.
std::map<std::string, std::vector<std::string>> successors(const SocialRelation& r,
                                                           const std::vector<std::string>& outcomes) {
    std::map<std::string, std::vector<std::string>> next;
    for (const auto& o : outcomes) next[o];
    for (const auto& e : r.edges()) next[e.better].push_back(e.worse);
    return next;
}

std::vector<std::string> sorted(std::vector<std::string> v) {
    std::sort(v.begin(), v.end());
    return v;
}

// Shortest cycle through the least outcome that lies on one; empty if acyclic.
std::vector<std::string> find_cycle(const SocialRelation& r, const std::vector<std::string>& outcomes) {
    const auto next = successors(r, outcomes);
    for (const auto& start : sorted(outcomes)) {
        std::map<std::string, std::string> parent;
        std::deque<std::string> queue{start};
        std::set<std::string> seen{start};
        while (!queue.empty()) {
            const auto x = queue.front();
            queue.pop_front();
            for (const auto& y : next.at(x)) {
                if (y == start) {
                    std::vector<std::string> cycle{x};
                    while (cycle.back() != start) cycle.push_back(parent.at(cycle.back()));
                    std::reverse(cycle.begin(), cycle.end());
                    return cycle;
                }
                if (seen.insert(y).second) {
                    parent[y] = x;
                    queue.push_back(y);
                }
            }
        }
    }
    return {};
}

std::vector<std::string> maximal_under(const SocialRelation& r, const std::vector<std::string>& candidates) {
    std::vector<std::string> out;
    for (const auto& x : candidates) {
        const bool beaten = std::any_of(candidates.begin(), candidates.end(),
                                        [&](const std::string& y) { return y != x && r.contains(y, x); });
        if (!beaten) out.push_back(x);
    }
    return sorted(std::move(out));
}

std::vector<std::string> dominators(const SocialRelation& pareto, const std::vector<std::string>& outcomes,
                                    const std::string& x) {
    std::vector<std::string> out;
    for (const auto& y : outcomes)
        if (pareto.contains(y, x)) out.push_back(y);
    return sorted(std::move(out));
}

}  // namespace

SocialRelation transitive_closure(const SocialRelation& r, const std::vector<std::string>& outcomes) {
    SocialRelation out = r;
    const auto next = successors(r, outcomes);
    for (const auto& start : outcomes) {
        std::set<std::string> seen;
        std::vector<std::string> stack(next.at(start).begin(), next.at(start).end());
        while (!stack.empty()) {
            const auto x = stack.back();
            stack.pop_back();
            if (!seen.insert(x).second) continue;
            if (!r.contains(start, x)) out.add(start, x, {EdgeSource::transitivity, {}});
            for (const auto& y : next.at(x)) stack.push_back(y);
        }
    }
    return out;
}

ParadoxVerdict detect_paradox(const PreferenceProfile& profile, const RightsAssignment& rights) {
    validate_profile(profile, rights);
    const auto rights_rel = rights_edges(profile, rights);
    const auto pareto_rel = pareto_edges(profile);
    SocialRelation base = rights_rel;
    base.merge(pareto_rel);

    ParadoxVerdict v;
    v.closure = transitive_closure(base, profile.outcomes);
    v.cycle = find_cycle(base, profile.outcomes);
    for (std::size_t i = 0; i < v.cycle.size(); ++i)
        v.cycle_edges.push_back(*base.edge(v.cycle[i], v.cycle[(i + 1) % v.cycle.size()]));

    const auto rights_closure = transitive_closure(rights_rel, profile.outcomes);
    for (const auto& x : maximal_under(rights_closure, profile.outcomes)) {
        auto doms = dominators(pareto_rel, profile.outcomes, x);
        if (!doms.empty()) v.pareto_inferior.push_back({x, std::move(doms)});
    }
    return v;
}

ChoicePolicy parse_policy(std::string_view name) {
    if (name == "rights-first") return ChoicePolicy::rights_first;
    if (name == "pareto-first") return ChoicePolicy::pareto_first;
    throw NameError("unknown policy \"" + std::string(name) + "\" (expected rights-first or pareto-first)");
}

std::string to_string(ChoicePolicy p) { return p == ChoicePolicy::rights_first ? "rights-first" : "pareto-first"; }

ChoiceResult choose(const PreferenceProfile& profile, const RightsAssignment& rights, ChoicePolicy policy) {
    validate_profile(profile, rights);
    const auto rights_rel = rights_edges(profile, rights);
    const auto pareto_rel = pareto_edges(profile);

    ChoiceResult c;
    c.policy = policy;
    std::vector<std::string> pool;
    if (policy == ChoicePolicy::rights_first) {
        const auto closure = transitive_closure(rights_rel, profile.outcomes);
        c.maximal = maximal_under(closure, profile.outcomes);
        if (c.maximal.empty()) {
            c.failure_cycle = find_cycle(rights_rel, profile.outcomes);
            return c;
        }
        pool = maximal_under(pareto_rel, c.maximal);
    } else {
        c.maximal = maximal_under(pareto_rel, profile.outcomes);
        pool = c.maximal;
    }
    if (pool.empty()) return c;  // unreachable: Pareto is acyclic over strict rankings
    c.chosen = pool.front();
    c.pareto_superior = dominators(pareto_rel, profile.outcomes, *c.chosen);
    for (const auto& e : rights_rel.edges())
        if (e.worse == *c.chosen) c.overridden_rights.push_back(e);
    return c;
}

}  // namespace capcalc
