#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "spinent/states.hpp"

namespace spinent {

struct OptimizerConfig {
    int restarts = 0;  // 0 picks max(50, 10 * twice_spin)
    int max_iterations = 2000;
    double gradient_tolerance = 1e-10;
    double initial_step = 0.1;
    double backtrack_factor = 0.5;
    double sufficient_decrease = 1e-4;
    std::uint64_t seed = 0;
    int threads = 0;  // 0 defers to SPINENT_THREADS, then hardware
};

struct OptimizationReport {
    SpinState best_state;
    double best_value = 0.0;
    int best_restart = 0;
    std::vector<double> restart_values;
    std::vector<int> restart_iterations;
    std::vector<bool> restart_converged;
    bool locally_optimal = false;  // polishing pass found no improving perturbation
    std::uint64_t seed = 0;
    double wall_time_seconds = 0.0;
};

/// Average entanglement of the state embedded from the real vector
/// (a_0..a_d-1, b_0..b_d-1), amplitudes a + ib, normalized internally,
/// together with the exact gradient of that normalized objective.  The
/// objective is scale invariant, so the gradient is tangent to the sphere
/// through the point.  Throws on a zero or odd-length vector.
std::pair<double, std::vector<double>> objective_and_gradient(const std::vector<double>& point);

/// Multistart projected gradient ascent with Armijo backtracking on the
/// unit sphere; restart r draws its start from derived_rng(seed, r), so
/// reports are reproducible for a fixed config at any thread count.
OptimizationReport maximize_average_entanglement(int twice_spin, const OptimizerConfig& config);

/// Same machinery on the negated objective.
OptimizationReport minimize_average_entanglement(int twice_spin, const OptimizerConfig& config);

}  // namespace spinent
