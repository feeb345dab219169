#include "capcalc/kernels.hpp"

#include <omp.h>

#include "capcalc/engine.hpp"
#include "capcalc/error.hpp"

namespace capcalc {

namespace {

std::vector<std::vector<std::size_t>> moves_per_agent(const Scenario& s, std::span<const std::string> procedures) {
    std::vector<std::vector<std::size_t>> out;
    out.reserve(s.agent_count());
    for (std::size_t a = 0; a < s.agent_count(); ++a) out.push_back(detail::usable_moves(s, a, procedures, false));
    return out;
}

ValueMatrix fill_serial(const Scenario& s, const std::vector<std::vector<std::size_t>>& moves) {
    ValueMatrix m{s.agent_count(), s.state_count(), std::vector<double>(s.agent_count() * s.state_count())};
    std::vector<char> visited;
    std::vector<std::size_t> queue;
    for (std::size_t a = 0; a < m.agents; ++a)
        for (std::size_t w = 0; w < m.states; ++w)
            m.cells[a * m.states + w] = detail::reach_max(s, a, w, moves[a], visited, queue);
    return m;
}

ValueMatrix fill_parallel(const Scenario& s, const std::vector<std::vector<std::size_t>>& moves) {
    ValueMatrix m{s.agent_count(), s.state_count(), std::vector<double>(s.agent_count() * s.state_count())};
    const auto n_states = static_cast<long long>(m.states);
    const auto total = static_cast<long long>(m.agents) * n_states;
#pragma omp parallel
    {
        std::vector<char> visited;
        std::vector<std::size_t> queue;
#pragma omp for schedule(dynamic, 16)
        for (long long cell = 0; cell < total; ++cell) {
            const auto a = static_cast<std::size_t>(cell / n_states);
            const auto w = static_cast<std::size_t>(cell % n_states);
            m.cells[static_cast<std::size_t>(cell)] = detail::reach_max(s, a, w, moves[a], visited, queue);
        }
    }
    return m;
}

std::string checked_procedure(const Scenario& s, std::string_view name) {
    const auto m = s.find_move(name);
    if (!m || s.move(*m).kind != MoveKind::procedure)
        throw NameError("unknown procedure \"" + std::string(name) + "\"");
    return std::string(name);
}

ValueMatrix difference(ValueMatrix after, const ValueMatrix& before) {
    for (std::size_t i = 0; i < after.cells.size(); ++i) after.cells[i] -= before.cells[i];
    return after;
}

}  // namespace

ValueMatrix capability_values(const Scenario& s, std::span<const std::string> procedures) {
    return fill_parallel(s, moves_per_agent(s, procedures));
}

ValueMatrix capability_values_serial(const Scenario& s, std::span<const std::string> procedures) {
    return fill_serial(s, moves_per_agent(s, procedures));
}

ValueMatrix gain_matrix(const Scenario& s, std::string_view procedure) {
    const std::vector<std::string> p{checked_procedure(s, procedure)};
    return difference(capability_values(s, p), capability_values(s));
}

ValueMatrix gain_matrix_serial(const Scenario& s, std::string_view procedure) {
    const std::vector<std::string> p{checked_procedure(s, procedure)};
    return difference(capability_values_serial(s, p), capability_values_serial(s));
}

int kernel_threads() { return omp_get_max_threads(); }

}  // namespace capcalc
