#pragma once

#include <complex>
#include <cstdint>
#include <random>
#include <vector>

#include "spinent/angular.hpp"
#include "spinent/geometry.hpp"

namespace spinent {

/// Pure spin-S state.  amplitudes[n] is the coefficient of |S, m> with
/// m = n - S, i.e. projections run ascending from -S to S.
struct SpinState {
    int twice_spin = 0;
    std::vector<std::complex<double>> amplitudes;

    int dim() const { return twice_spin + 1; }
    HalfInt spin() const { return HalfInt{twice_spin}; }
    double norm() const;
};

/// Validates dimensions and normalizes; throws std::invalid_argument on a
/// size mismatch or a zero vector.
SpinState make_state(int twice_spin, std::vector<std::complex<double>> amplitudes);

/// Spin coherent state pointing along (theta, phi); theta in [0, pi].
SpinState make_coherent(int twice_spin, double theta, double phi);

/// Basis state |S, m>.
SpinState make_basis_state(int twice_spin, HalfInt m);

/// <a|b>; throws on dimension mismatch.
std::complex<double> state_overlap(const SpinState& a, const SpinState& b);

/// Applies the SU(2) element of r through the Wigner D matrix.
SpinState rotate(const SpinState& s, const Rotation& r);

/// Multiplies by a global phase making the first amplitude of magnitude
/// above 1e-12 real and positive.
SpinState canonical_phase(const SpinState& s);

/// Haar-distributed SU(2) element: four standard normals, normalized.
Rotation random_haar_rotation(std::mt19937_64& rng);

/// Haar-random pure state: complex normal amplitudes, normalized.
SpinState random_state(int twice_spin, std::mt19937_64& rng);

/// Deterministic stream splitting: feeds splitmix64(seed + golden * (k+1))
/// into the generator, so distinct stream ids give decorrelated engines
/// and results are reproducible across runs and thread counts.
std::mt19937_64 derived_rng(std::uint64_t seed, std::uint64_t stream);

}  // namespace spinent
