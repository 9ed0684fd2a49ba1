#pragma once

#include <complex>
#include <vector>

#include "spinent/geometry.hpp"

namespace spinent {

/// Angular momentum stored as twice its value, so half-integers stay exact.
struct HalfInt {
    int twice = 0;

    constexpr HalfInt() = default;
    constexpr explicit HalfInt(int t) : twice(t) {}

    double value() const { return 0.5 * twice; }
    bool is_integer() const { return (twice & 1) == 0; }

    friend constexpr bool operator==(HalfInt a, HalfInt b) { return a.twice == b.twice; }
    friend constexpr bool operator!=(HalfInt a, HalfInt b) { return a.twice != b.twice; }
    friend constexpr bool operator<(HalfInt a, HalfInt b) { return a.twice < b.twice; }
    friend constexpr bool operator<=(HalfInt a, HalfInt b) { return a.twice <= b.twice; }
    friend constexpr HalfInt operator+(HalfInt a, HalfInt b) { return HalfInt{a.twice + b.twice}; }
    friend constexpr HalfInt operator-(HalfInt a, HalfInt b) { return HalfInt{a.twice - b.twice}; }
    friend constexpr HalfInt operator-(HalfInt a) { return HalfInt{-a.twice}; }
};

struct CGKey {
    HalfInt j1, m1, j2, m2, J, M;
};

/// log(n!) from a lazily grown table, long double for headroom in the
/// alternating Racah sums.
long double log_factorial(int n);

/// Clebsch-Gordan coefficient <j1 m1, j2 m2 | J M> in the Condon-Shortley
/// convention.  Combinations violating the selection rules return 0.
double clebsch_gordan(const CGKey& key);
double clebsch_gordan(HalfInt j1, HalfInt m1, HalfInt j2, HalfInt m2, HalfInt J, HalfInt M);

/// Memoized block of coefficients <j1 m1, j2 m2 | J, m1+m2> for fixed
/// (j1, j2, J).  Blocks are filled once and read-only afterwards, so
/// references handed out by cg_block stay valid and are safe to share
/// across threads.
class CgBlock {
public:
    CgBlock(HalfInt j1, HalfInt j2, HalfInt J);

    /// <j1 m1, j2 m2 | J, m1+m2>, or 0 when out of range.
    double coeff(HalfInt m1, HalfInt m2) const;

private:
    int twice_j1_;
    int twice_j2_;
    std::vector<double> values_;
};

const CgBlock& cg_block(HalfInt j1, HalfInt j2, HalfInt J);

/// Wigner small-d matrix element d^j_{mp,m}(beta).
double wigner_small_d(HalfInt j, HalfInt mp, HalfInt m, double beta);

/// Full (2j+1)x(2j+1) small-d matrix, row-major with both indices running
/// over ascending projection (index i corresponds to m = -j + i).
std::vector<double> wigner_small_d_matrix(HalfInt j, double beta);

/// zyz Euler angles of an SU(2) element: U = e^{-i a Jz} e^{-i b Jy} e^{-i c Jz}.
/// The decomposition reproduces the specific SU(2) element (not just its
/// SO(3) image), so D matrices built from it compose exactly.
struct ZyzAngles {
    double alpha, beta, gamma;
};
ZyzAngles euler_zyz(const Rotation& r);

/// Wigner D^j_{mp,m}(r) = e^{-i mp alpha} d^j_{mp,m}(beta) e^{-i m gamma}.
std::complex<double> wigner_D(HalfInt j, HalfInt mp, HalfInt m, const Rotation& r);

/// Full D^j matrix, row-major, ascending projection on both indices.
std::vector<std::complex<double>> wigner_D_matrix(HalfInt j, const Rotation& r);

}  // namespace spinent
