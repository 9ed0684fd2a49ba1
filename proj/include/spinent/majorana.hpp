#pragma once

#include <complex>
#include <vector>

#include "spinent/geometry.hpp"
#include "spinent/states.hpp"

namespace spinent {

/// Zeros of the Majorana polynomial; degree deficits show up as roots at
/// infinity so that finite.size() + at_infinity == 2S always holds.
struct MajoranaRoots {
    std::vector<std::complex<double>> finite;
    int at_infinity = 0;
};

/// The 2S star directions on the unit sphere.
struct Constellation {
    int twice_spin = 0;
    std::vector<Vec3> stars;
};

/// Coefficients c_n = sqrt(binom(2S, n)) * amplitude_n of the Majorana
/// polynomial p(z) = sum_n c_n z^n.
std::vector<std::complex<double>> majorana_coefficients(const SpinState& s);

MajoranaRoots majorana_roots(const SpinState& s);

/// Stars are antipodes of the overlap-zero directions: a root z maps to
/// -(2 Re z, 2 Im z, 1 - |z|^2)/(1 + |z|^2), a root at infinity to (0,0,1).
/// Coherent states then have all stars at their own (theta, phi).
/// Output is sorted (descending z, then azimuth) for deterministic order.
Constellation constellation(const SpinState& s);

Constellation constellation(const MajoranaRoots& roots, int twice_spin);

/// Inverse of the star map: rebuilds the state (up to global phase) whose
/// constellation is the given multiset of directions.
SpinState state_from_constellation(int twice_spin, const std::vector<Vec3>& stars);

/// Husimi values Q(theta, phi) = |<theta,phi|psi>|^2 on an inclusive grid,
/// theta_i = i*pi/(n_theta-1), phi_j = j*2pi/(n_phi-1).
struct QGrid {
    int n_theta = 0;
    int n_phi = 0;
    std::vector<double> values;

    double at(int i, int j) const { return values[static_cast<size_t>(i) * n_phi + j]; }
    double theta(int i) const;
    double phi(int j) const;
};

QGrid q_function(const SpinState& s, int n_theta, int n_phi);

namespace detail {

/// Aberth-Ehrlich simultaneous root refinement for a full-degree polynomial
/// (nonzero leading and trailing coefficients); exposed for tests.
std::vector<std::complex<double>> polynomial_roots(const std::vector<std::complex<double>>& coeffs);

std::vector<std::complex<double>> polynomial_from_roots(const std::vector<std::complex<double>>& roots);

}  // namespace detail

}  // namespace spinent
