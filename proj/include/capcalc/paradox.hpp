#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "capcalc/model.hpp"

namespace capcalc {

/// Strict rankings, best first, one per agent over a shared outcome set.
struct PreferenceProfile {
    std::vector<std::string> outcomes;
    std::map<AgentId, std::vector<std::string>> rankings;

    /// True when `agent` ranks x above y.
    bool prefers(const AgentId& agent, std::string_view x, std::string_view y) const;
};

using OutcomePair = std::pair<std::string, std::string>;

/// Per agent, the unordered outcome pairs over which that agent is decisive.
using RightsAssignment = std::map<AgentId, std::vector<OutcomePair>>;

struct ProfileDocument {
    PreferenceProfile profile;
    RightsAssignment rights;
};

/// Throws ValidationError: rankings must be permutations of the outcomes, rights must name
/// ranked agents and pairs of distinct known outcomes, and no pair may go to two agents.
void validate_profile(const PreferenceProfile& profile, const RightsAssignment& rights);

/// Reads {"outcomes", "rankings", "rights"}; "rights" may be omitted.
ProfileDocument load_profile(std::string_view text);

enum class EdgeSource { right, pareto, transitivity };

struct Provenance {
    EdgeSource source = EdgeSource::right;
    AgentId agent;  ///< set for rights only

    auto operator<=>(const Provenance&) const = default;
};

struct Edge {
    std::string better;
    std::string worse;
    std::vector<Provenance> provenance;

    bool operator==(const Edge&) const = default;
};

/// Set of strict social preferences x > y, each tagged with where it came from.
class SocialRelation {
public:
    void add(const std::string& better, const std::string& worse, Provenance why);
    void merge(const SocialRelation& other);

    bool contains(std::string_view better, std::string_view worse) const;
    std::size_t size() const { return edges_.size(); }
    bool empty() const { return edges_.empty(); }

    /// Sorted by (better, worse).
    std::vector<Edge> edges() const;
    std::optional<Edge> edge(std::string_view better, std::string_view worse) const;

private:
    std::map<std::pair<std::string, std::string>, std::set<Provenance>, std::less<>> edges_;
};

std::string to_string(EdgeSource s);

/// Each decisive pair ordered by its holder's ranking.
SocialRelation rights_edges(const PreferenceProfile& profile, const RightsAssignment& rights);

/// x > y whenever every agent ranks x above y.
SocialRelation pareto_edges(const PreferenceProfile& profile);

/// Adds every pair implied by chaining; new pairs are tagged transitivity.
SocialRelation transitive_closure(const SocialRelation& r, const std::vector<std::string>& outcomes);

struct ParetoInferiority {
    std::string outcome;
    std::vector<std::string> dominated_by;
};

struct ParadoxVerdict {
    /// Shortest cycle through the lexicographically least outcome on any cycle, starting
    /// there. Empty when the union relation is acyclic.
    std::vector<std::string> cycle;
    std::vector<Edge> cycle_edges;
    /// Outcomes maximal under the rights closure yet Pareto-dominated.
    std::vector<ParetoInferiority> pareto_inferior;
    SocialRelation closure;  ///< rights + Pareto + transitivity

    bool clean() const { return cycle.empty() && pareto_inferior.empty(); }
};

ParadoxVerdict detect_paradox(const PreferenceProfile& profile, const RightsAssignment& rights);

enum class ChoicePolicy { rights_first, pareto_first };

ChoicePolicy parse_policy(std::string_view name);  // throws NameError
std::string to_string(ChoicePolicy p);

struct ChoiceResult {
    ChoicePolicy policy = ChoicePolicy::rights_first;
    std::optional<std::string> chosen;      ///< empty on failure
    std::vector<std::string> maximal;       ///< maximal set under the primary relation
    std::vector<std::string> pareto_superior;  ///< outcomes every agent prefers to the choice
    std::vector<Edge> overridden_rights;    ///< rights edges y > chosen
    std::vector<std::string> failure_cycle; ///< set when nothing is maximal
};

/// rights-first: maximal under the transitive closure of the rights edges, refined by
/// Pareto among those, ties by id. pareto-first: maximal under the Pareto edges, ties by id.
ChoiceResult choose(const PreferenceProfile& profile, const RightsAssignment& rights, ChoicePolicy policy);

}  // namespace capcalc
