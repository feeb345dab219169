#pragma once

// Whole-table capability-value kernels. Every (agent, origin) query is independent, so the
// default versions split them across OpenMP threads; the *_serial versions are the plain
// loop used as the reference in tests and benchmarks.

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "capcalc/model.hpp"

namespace capcalc {

/// Dense agents x states table, row-major by agent.
struct ValueMatrix {
    std::size_t agents = 0;
    std::size_t states = 0;
    std::vector<double> cells;

    double at(std::size_t agent, std::size_t state) const { return cells[agent * states + state]; }
    bool operator==(const ValueMatrix&) const = default;
};

/// V(i, w) for every agent and origin. Each procedure in `procedures` is added only for
/// the agents it lists as beneficiaries.
ValueMatrix capability_values(const Scenario& s, std::span<const std::string> procedures = {});
ValueMatrix capability_values_serial(const Scenario& s, std::span<const std::string> procedures = {});

/// G(i, w, procedure) for every agent and origin.
ValueMatrix gain_matrix(const Scenario& s, std::string_view procedure);
ValueMatrix gain_matrix_serial(const Scenario& s, std::string_view procedure);

/// Number of threads the parallel kernels would use.
int kernel_threads();

}  // namespace capcalc
