#include "capcalc/pivot.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "capcalc/error.hpp"

namespace capcalc {

TieQuery TieQuery::from_electorate(std::uint64_t n) {
    if (n < 2 || n % 2 != 0)
        throw DomainError("electorate must be an even count of at least 2 other voters, got " + std::to_string(n));
    return TieQuery(n / 2);
}

TieQuery TieQuery::from_half(std::uint64_t k) {
    if (k < 1) throw DomainError("k must be at least 1");
    return TieQuery(k);
}

namespace {

BigInt factorial(std::uint64_t n) {
    BigInt f = 1;
    for (std::uint64_t i = 2; i <= n; ++i) f *= i;
    return f;
}

void require_positive(std::uint64_t k) {
    if (k < 1) throw DomainError("k must be at least 1");
}

}  // namespace

Rational tie_probability_exact(std::uint64_t k) {
    require_positive(k);
    if (k > kMaxExactK)
        throw DomainError("k = " + std::to_string(k) + " exceeds the exact range (" + std::to_string(kMaxExactK) +
                          "); use the log-space probability instead");
    const BigInt kf = factorial(k);
    return Rational(kf * kf, factorial(2 * k));
}

double tie_probability_log(std::uint64_t k) {
    require_positive(k);
    const double kd = static_cast<double>(k);
    return 2.0 * std::lgamma(kd + 1.0) - std::lgamma(2.0 * kd + 1.0);
}

double tie_probability_log_by_factors(std::uint64_t k) {
    require_positive(k);
    const double kd = static_cast<double>(k);
    double sum = 0.0;
    for (std::uint64_t j = 1; j <= k; ++j) sum += std::log(static_cast<double>(j) / (kd + static_cast<double>(j)));
    return sum;
}

BoundReport verify_bound(std::uint64_t k) {
    require_positive(k);
    BoundReport r;
    r.k = k;
    r.exponent = static_cast<double>(k) / 2.0;
    r.log_probability = tie_probability_log(k);
    r.log_bound = r.exponent * std::log(0.75);
    r.margin_ln = r.log_bound - r.log_probability;
    r.margin_log10 = r.margin_ln / std::log(10.0);
    r.holds = r.log_probability < r.log_bound;

    const double kd = static_cast<double>(k);
    r.factors_total = k;
    r.smallest_factor = std::numeric_limits<double>::infinity();
    r.largest_factor = 0.0;
    for (std::uint64_t j = 1; j <= k; ++j) {
        const double f = static_cast<double>(j) / (kd + static_cast<double>(j));
        r.smallest_factor = std::min(r.smallest_factor, f);
        r.largest_factor = std::max(r.largest_factor, f);
        if (f >= 0.5 && f <= 0.75) ++r.factors_in_half_to_three_quarters;
        if (f <= 0.75) ++r.factors_at_most_three_quarters;
    }
    r.log_probability_by_factors = tie_probability_log_by_factors(k);
    r.factor_margin_ln = r.log_bound - r.log_probability_by_factors;
    r.factor_route_holds = r.log_probability_by_factors < r.log_bound;
    r.factor_count_implies_bound =
        static_cast<double>(r.factors_at_most_three_quarters) >= r.exponent && r.largest_factor < 1.0;
    return r;
}

HarmReport expected_harm(const TieQuery& query, double h) {
    if (!(h >= 0.0) || !std::isfinite(h)) throw DomainError("harm h must be finite and non-negative");
    HarmReport r;
    r.k = query.half();
    r.h = h;
    r.log_probability = tie_probability_log(query.half());
    if (h == 0.0) return r;
    r.log_expected_harm = std::log(h) + r.log_probability;
    r.expected_harm = std::exp(*r.log_expected_harm);
    r.underflow = r.expected_harm == 0.0 || !std::isnormal(r.expected_harm);
    if (r.underflow) r.expected_harm = 0.0;
    return r;
}

ThresholdReport epsilon_threshold(const HarmModel& model, std::optional<TieQuery> vote) {
    if (!(model.epsilon > 0.0) || !std::isfinite(model.epsilon)) throw DomainError("epsilon must be finite and positive");
    if (!(model.h >= 0.0) || !std::isfinite(model.h)) throw DomainError("h must be finite and non-negative");
    if (model.population == 0) throw DomainError("population must be positive");
    if (!(model.unit_cost >= 0.0) || !std::isfinite(model.unit_cost))
        throw DomainError("unit cost must be finite and non-negative");

    ThresholdReport r;
    r.total_effect = model.epsilon * static_cast<double>(model.population);
    r.unit_cost = model.unit_cost;
    r.act = r.total_effect > model.unit_cost;
    if (vote) {
        r.harm = expected_harm(*vote, model.h);
        r.private_gain_exceeds_expected_harm =
            !r.harm->log_expected_harm || std::log(model.epsilon) > *r.harm->log_expected_harm;
    }
    return r;
}

}  // namespace capcalc
