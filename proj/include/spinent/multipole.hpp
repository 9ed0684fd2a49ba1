#pragma once

#include <complex>
#include <vector>

#include "spinent/states.hpp"

namespace spinent {

/// State multipoles rho_{Kq} = <T_{Kq}^dagger> of a pure spin-S state,
/// K = 0..2S, q = -K..K, packed so that (K, q) lives at K*K + (q + K).
struct MultipoleTable {
    int twice_spin = 0;
    std::vector<std::complex<double>> values;

    int max_rank() const { return twice_spin; }
    std::complex<double> rho(int K, int q) const;
    std::complex<double>& rho(int K, int q);
};

MultipoleTable multipoles(const SpinState& s);

/// Sum over ranks of |rho_{Kq}|^2; equals 1 for any pure state.
double multipole_purity(const MultipoleTable& t);

/// Linear entropy 1 - tr(rho_A^2) of either spin-1/2 constituent in the
/// symmetric two-part split, from the amplitudes directly.
double linear_entropy(const SpinState& s);

/// Same quantity assembled from the q = 0 multipoles alone.
double linear_entropy_multipole(const MultipoleTable& t);

/// Eigenvalues of the one-mode reduced state, ascending projection.
std::vector<double> reduced_density(const SpinState& s);

/// Linear entropy averaged uniformly over all rotated splittings:
/// 1 - sum_K (1/(2K+1)) sum_q |rho_{Kq}|^2.  Rotation invariant.
double averaged_entanglement(const SpinState& s);

/// Same average evaluated without forming the multipole table, summing
/// Clebsch-Gordan bilinears directly; agrees with averaged_entanglement
/// to near machine precision and serves as a cross-check.
double averaged_entanglement_direct(const SpinState& s);

/// Closed form of the average for spin coherent states:
/// 1 - sqrt(pi) Gamma(2S+1) / (2 Gamma(2S+3/2)), evaluated through lgamma.
double coherent_average_value(int twice_spin);

}  // namespace spinent
