#pragma once

#include <cstdint>
#include <optional>

#include <boost/multiprecision/cpp_int.hpp>

namespace capcalc {

using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

/// Largest k accepted by tie_probability_exact.
inline constexpr std::uint64_t kMaxExactK = 5000;

/// A marginal voter facing n = 2k other voters. Odd electorates are rejected.
class TieQuery {
public:
    static TieQuery from_electorate(std::uint64_t n);  // throws DomainError unless n even and >= 2
    static TieQuery from_half(std::uint64_t k);        // throws DomainError unless k >= 1

    std::uint64_t electorate() const { return 2 * k_; }
    std::uint64_t half() const { return k_; }

private:
    explicit TieQuery(std::uint64_t k) : k_(k) {}
    std::uint64_t k_;
};

/// (k! * k!) / (2k)! as an exact rational. Throws DomainError for k = 0 or k > kMaxExactK;
/// use tie_probability_log beyond that.
Rational tie_probability_exact(std::uint64_t k);

/// ln((k! * k!) / (2k)!) through log-gamma. Throws DomainError for k = 0.
double tie_probability_log(std::uint64_t k);

/// The same logarithm as an explicit sum over the factor decomposition
/// (k!)^2 / (2k)! = prod_{j=1..k} j / (k + j).
double tie_probability_log_by_factors(std::uint64_t k);

/// Check of P(k) < 0.75^(k/2), done by log-gamma and by the factor decomposition.
struct BoundReport {
    std::uint64_t k = 0;
    double exponent = 0.0;       ///< k / 2
    double log_probability = 0.0;  ///< via log-gamma
    double log_bound = 0.0;      ///< exponent * ln 0.75
    double margin_ln = 0.0;      ///< log_bound - log_probability; positive iff the bound holds
    double margin_log10 = 0.0;
    bool holds = false;

    // Factor route.
    double log_probability_by_factors = 0.0;
    double factor_margin_ln = 0.0;
    bool factor_route_holds = false;
    std::uint64_t factors_total = 0;
    std::uint64_t factors_in_half_to_three_quarters = 0;  ///< factors in [0.50, 0.75]
    std::uint64_t factors_at_most_three_quarters = 0;
    double smallest_factor = 0.0;
    double largest_factor = 0.0;
    /// At least `exponent` factors are <= 0.75 and none exceeds 1, which alone implies
    /// the bound.
    bool factor_count_implies_bound = false;
};

BoundReport verify_bound(std::uint64_t k);
inline BoundReport verify_reference_bound() { return verify_bound(22000); }

struct HarmReport {
    std::uint64_t k = 0;
    double h = 0.0;
    double log_probability = 0.0;
    std::optional<double> log_expected_harm;  ///< empty when h == 0
    double expected_harm = 0.0;               ///< 0 when h * P underflows
    bool underflow = false;
};

/// h * P(tie), evaluated in log space. Throws DomainError for negative or non-finite h.
HarmReport expected_harm(const TieQuery& query, double h);

struct HarmModel {
    double epsilon = 0.0;        ///< private gain per act, > 0
    double h = 0.0;              ///< harm if the bad outcome wins, >= 0
    std::uint64_t population = 0;  ///< N, > 0
    double unit_cost = 0.0;      ///< >= 0
};

struct ThresholdReport {
    double total_effect = 0.0;  ///< epsilon * N
    double unit_cost = 0.0;
    bool act = false;           ///< total_effect > unit_cost

    /// Voting variant, present when a tie query was supplied.
    std::optional<HarmReport> harm;
    std::optional<bool> private_gain_exceeds_expected_harm;
};

/// Throws DomainError when the model breaks its invariants.
ThresholdReport epsilon_threshold(const HarmModel& model, std::optional<TieQuery> vote = std::nullopt);

}  // namespace capcalc
