#include "capcalc/welfare.hpp"

#include <algorithm>
#include <cassert>
#include <limits>

#include "capcalc/error.hpp"

namespace capcalc {

Aggregator parse_aggregator(std::string_view name) {
    if (name == "utilitarian-sum") return Aggregator::utilitarian_sum;
    if (name == "maximin") return Aggregator::maximin;
    if (name == "prioritarian") return Aggregator::prioritarian;
    throw NameError("unknown aggregator \"" + std::string(name) +
                    "\" (expected utilitarian-sum, maximin or prioritarian)");
}

std::string to_string(Aggregator a) {
    switch (a) {
        case Aggregator::utilitarian_sum: return "utilitarian-sum";
        case Aggregator::maximin: return "maximin";
        case Aggregator::prioritarian: return "prioritarian";
    }
    return "?";
}

double prioritarian_weight(double level, double lowest) { return 1.0 / (1.0 + level - lowest); }

double aggregate_change(Aggregator a, std::span<const double> before, std::span<const double> after,
                        std::span<const double> weight_basis) {
    assert(before.size() == after.size());
    if (before.empty()) return 0.0;
    switch (a) {
        case Aggregator::utilitarian_sum: {
            double sum = 0.0;
            for (std::size_t i = 0; i < before.size(); ++i) sum += after[i] - before[i];
            return sum;
        }
        case Aggregator::maximin:
            return *std::min_element(after.begin(), after.end()) - *std::min_element(before.begin(), before.end());
        case Aggregator::prioritarian: {
            assert(weight_basis.size() == before.size());
            const double lowest = *std::min_element(weight_basis.begin(), weight_basis.end());
            double sum = 0.0;
            for (std::size_t i = 0; i < before.size(); ++i)
                sum += prioritarian_weight(weight_basis[i], lowest) * (after[i] - before[i]);
            return sum;
        }
    }
    return std::numeric_limits<double>::quiet_NaN();
}

}  // namespace capcalc
