#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "capcalc/model.hpp"
#include "capcalc/welfare.hpp"

namespace capcalc {

/// States an agent can reach from `origin` by composing usable moves, with one witness
/// path per state. The witness is the shortest path, lexicographically least by move
/// name among shortest paths. The origin's witness is the empty composition.
struct ReachableSet {
    AgentId agent;
    StateId origin;
    std::vector<StateId> states;  ///< in discovery order (distance, then witness order)
    std::map<StateId, std::vector<std::string>> witness;
};

struct CapabilityValue {
    AgentId agent;
    StateId origin;
    double local_value = 0.0;  ///< v(agent, origin)
    double value = 0.0;        ///< V(agent, origin, C)
    StateId best_state;        ///< lexicographically least maximizer
    std::vector<std::string> witness;
};

struct GainReport {
    AgentId agent;
    StateId origin;
    std::string procedure;
    double value_before = 0.0;  ///< V(i, w, C_i)
    double value_after = 0.0;   ///< V(i, w, C_i + b)
    double gain = 0.0;          ///< value_after - value_before, never negative
};

struct TrajectoryStep {
    std::string capability;
    StateId state;
    double value = 0.0;  ///< acting agent's local value after the step
};

enum class Termination { fixpoint, step_cap };

struct Trajectory {
    AgentId agent;
    StateId origin;
    std::vector<TrajectoryStep> steps;
    Termination terminated = Termination::fixpoint;
};

using OriginMap = std::map<AgentId, StateId>;

enum class Winner { first, second, tie };

struct ProcedureComparison {
    Aggregator aggregator = Aggregator::utilitarian_sum;
    std::string first;
    std::string second;
    std::vector<GainReport> gains_first;  ///< one per agent, declared agent order
    std::vector<GainReport> gains_second;
    double score_first = 0.0;
    double score_second = 0.0;
    Winner winner = Winner::tie;
    std::vector<AgentId> beneficiaries_first;  ///< agents with strictly positive gain
    std::vector<AgentId> beneficiaries_second;
};

/// v(agent, state). Throws NameError for unknown names.
double local_value(const Scenario& s, std::string_view agent, std::string_view state);

/// Closure of {origin} under the agent's own capabilities plus `extra_procedures`.
/// Throws NameError for unknown names and DomainError when a procedure does not list
/// the agent as a beneficiary.
ReachableSet reachable(const Scenario& s, std::string_view agent, std::string_view origin,
                       std::span<const std::string> extra_procedures = {});

/// V(agent, origin, C) = max of v over the reachable set.
CapabilityValue capability_value(const Scenario& s, std::string_view agent, std::string_view origin,
                                 std::span<const std::string> extra_procedures = {});

/// G(i, w, b). When the agent is not a beneficiary of `procedure` the set is unchanged
/// and the gain is 0.
GainReport gain(const Scenario& s, std::string_view agent, std::string_view origin, std::string_view procedure);

/// Copy of `s` without the named capabilities of `agent`.
/// Throws NameError if a name is unknown or not one of the agent's capabilities.
Scenario restrict_capabilities(const Scenario& s, std::string_view agent, std::span<const std::string> banned);

/// Repeatedly applies the own capability with the largest strict increase in local value
/// (ties by name) until none improves or `max_steps` steps were taken.
Trajectory greedy_trajectory(const Scenario& s, std::string_view agent, std::string_view origin,
                             std::size_t max_steps);

/// Compares two procedures over a population. `origins` must name an origin for every
/// agent (DomainError otherwise). Scores use aggregate_change over capability values,
/// with prioritarian weights taken from local values at the origins.
ProcedureComparison compare_procedures(const Scenario& s, const OriginMap& origins, std::string_view first,
                                       std::string_view second, Aggregator aggregator);

/// Mean gain over all agents.
double per_capita_gain(const Scenario& s, const OriginMap& origins, std::string_view procedure);

namespace detail {

/// Move indices usable by `agent`: own capabilities plus the listed procedures, ascending
/// (which is name order).
std::vector<std::size_t> usable_moves(const Scenario& s, std::size_t agent,
                                      std::span<const std::string> extra_procedures, bool require_beneficiary);

/// Max of v(agent, .) over states reachable from `origin` through `moves`.
/// `visited` and `queue` are scratch buffers sized by the callee.
double reach_max(const Scenario& s, std::size_t agent, std::size_t origin, std::span<const std::size_t> moves,
                 std::vector<char>& visited, std::vector<std::size_t>& queue);

}  // namespace detail

}  // namespace capcalc
