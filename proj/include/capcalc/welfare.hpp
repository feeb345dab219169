#pragma once

#include <span>
#include <string>
#include <string_view>

namespace capcalc {

/// Rule for collapsing a vector of per-agent changes into one social score.
enum class Aggregator {
    utilitarian_sum,  ///< plain sum of changes
    maximin,          ///< change in the worst-off agent's level
    prioritarian,     ///< sum of changes weighted by 1 / (1 + v_i - min_j v_j)
};

Aggregator parse_aggregator(std::string_view name);  // throws NameError
std::string to_string(Aggregator a);

/// Weight given to an agent whose current level is `level` when the lowest level in the
/// population is `lowest`. Equals 1 for the worst-off agent and decreases with `level`.
double prioritarian_weight(double level, double lowest);

/// Aggregate score of moving every agent from `before[i]` to `after[i]`.
///
/// utilitarian_sum: sum(after - before). maximin: min(after) - min(before).
/// prioritarian: sum of w_i * (after_i - before_i) with weights computed from `weight_basis`
/// (the agents' local values at their origins).
double aggregate_change(Aggregator a, std::span<const double> before, std::span<const double> after,
                        std::span<const double> weight_basis);

}  // namespace capcalc
