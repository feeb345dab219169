#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "capcalc/model.hpp"
#include "capcalc/welfare.hpp"

namespace capcalc {

enum class Sign { positive, negative, none };

/// Change in another agent's local value caused by one capability application.
struct ExternalityRecord {
    AgentId actor;
    std::string capability;
    StateId state;
    AgentId affected;
    double delta = 0.0;  ///< v(affected, f(state)) - v(affected, state)
    Sign sign = Sign::none;

    bool operator==(const ExternalityRecord&) const = default;
};

struct IndependenceVerdict {
    bool holds = true;
    std::vector<ExternalityRecord> violations;
};

enum class FactorizationRule {
    value_depends_on_other_coordinate,  ///< v(i, .) differs on two states agreeing on coordinate i
    capability_changes_other_coordinate,
};

struct FactorizationViolation {
    FactorizationRule rule;
    AgentId agent;
    std::string capability;  ///< empty for value rules
    StateId first;           ///< for capability rules: source state
    StateId second;          ///< for capability rules: target state
    std::size_t coordinate = 0;  ///< the coordinate that varied (capability rule) or the agent's own (value rule)
};

struct FactorizationVerdict {
    bool holds = true;
    std::vector<FactorizationViolation> violations;
};

struct TransferReport {
    std::string capability;
    StateId from;
    StateId to;
    std::vector<std::pair<AgentId, double>> deltas;  ///< declared agent order
    Aggregator aggregator = Aggregator::utilitarian_sum;
    double aggregate_change = 0.0;
    /// Some agent loses yet the aggregate rises.
    bool improving_despite_loser = false;
};

Sign sign_of(double delta);
std::string to_string(Sign s);
std::string to_string(FactorizationRule r);

/// Every nonzero cross-agent delta over the capabilities' explicit transition domains,
/// sorted by (actor, capability, state, affected).
std::vector<ExternalityRecord> externality_report(const Scenario& s);

/// Holds iff no capability application changes another agent's local value.
IndependenceVerdict check_independence(const Scenario& s);

/// Checks product-world structure: every agent's value depends on their own coordinate
/// only, and every capability changes only its owner's coordinate.
/// Throws DomainError when the scenario has no factor spec.
FactorizationVerdict check_factorization(const Scenario& s);

/// Effect of one application of `capability` at `state` on every agent.
TransferReport transfer_analysis(const Scenario& s, std::string_view capability, std::string_view state,
                                 Aggregator aggregator);

}  // namespace capcalc
