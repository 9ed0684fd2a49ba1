#pragma once

#include <string>

#include "spinent/majorana.hpp"
#include "spinent/optimize.hpp"
#include "spinent/states.hpp"
#include "spinent/symmetry.hpp"

namespace spinent {

/// State files: { "twice_spin": int, "amplitudes": [[re, im], ...] },
/// amplitudes ascending in m.  The reader normalizes, warning on stderr
/// when the stored norm deviates from 1 by more than 1e-6.
SpinState load_state(const std::string& path);
void save_state(const SpinState& s, const std::string& path);

std::string state_to_json(const SpinState& s);
SpinState state_from_json(const std::string& text);

void save_optimization_report(const OptimizationReport& rep, const OptimizerConfig& cfg,
                              int twice_spin, const std::string& path);

std::string point_group_to_json(const PointGroupReport& rep);

void save_constellation_csv(const Constellation& c, const std::string& path);

void save_qgrid_csv(const QGrid& g, const std::string& path);

/// Binary P6 image; values are scaled by the grid maximum and mapped
/// through a monotone blue -> cyan -> yellow -> red ramp.
void save_qgrid_ppm(const QGrid& g, const std::string& path);

}  // namespace spinent
