#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "spinent/multipole.hpp"
#include "spinent/states.hpp"

namespace spinent {

struct McEstimate {
    double mean = 0.0;
    double std_error = 0.0;
    std::size_t n_samples = 0;
};

/// Monte Carlo estimate of the rotation-averaged linear entropy: draws Haar
/// rotations, rotates the state through the D matrix, and accumulates the
/// plain Schmidt-coefficient entropy.  No multipole machinery is involved,
/// so this independently checks the rank-resolved formula.  Samples are
/// split into fixed batches of 4096 with one derived stream per batch and
/// in-order aggregation, keeping the estimate reproducible regardless of
/// any concurrent batch evaluation.
McEstimate mc_average_entanglement(const SpinState& s, std::size_t n_samples, std::uint64_t seed);

struct HaarMomentEstimate {
    std::complex<double> mean;
    double std_error = 0.0;
    std::size_t n_samples = 0;
};

/// Monte Carlo estimate of int dR conj(D^K_{q0}) D^Kp_{qp0}, which the
/// D-matrix orthogonality relations pin to delta_{K,Kp} delta_{q,qp}/(2K+1).
HaarMomentEstimate haar_moment_check(int K, int q, int Kp, int qp, std::size_t n_samples,
                                     std::uint64_t seed);

/// Multipoles recomputed the slow way: materializes rho = |psi><psi| and
/// every tensor operator as dense matrices and traces.  Capped at
/// twice_spin <= 20.
MultipoleTable dense_multipoles(const SpinState& s);

/// Dense (2S+1)^2 matrix of T_Kq, row-major, ascending projections.
std::vector<std::complex<double>> dense_tensor_operator(int twice_spin, int K, int q);

/// max |Tr(T_Kq T^dag_{Kp qp}) - delta delta| over all index pairs.
double tensor_orthonormality_error(int twice_spin);

}  // namespace spinent
