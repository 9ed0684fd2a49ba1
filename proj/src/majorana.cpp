#include "spinent/majorana.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace spinent {

namespace {

using cplx = std::complex<double>;
using lcplx = std::complex<long double>;

constexpr double kDeflationCut = 1e-13;

double sqrt_binomial(int n, int k) {
    return std::exp(0.5 * static_cast<double>(log_factorial(n) - log_factorial(k) -
                                              log_factorial(n - k)));
}

double max_abs(const std::vector<cplx>& c) {
    double m = 0.0;
    for (const auto& v : c) m = std::max(m, std::abs(v));
    return m;
}

// Ascending coefficients of the monic prod (z - r_i), long double accumulation.
std::vector<lcplx> monic_from_roots(const std::vector<lcplx>& roots) {
    std::vector<lcplx> c(roots.size() + 1, 0.0L);
    c[0] = 1.0L;
    size_t deg = 0;
    for (const auto& r : roots) {
        ++deg;
        c[deg] = c[deg - 1];
        for (size_t k = deg - 1; k >= 1; --k) c[k] = c[k - 1] - r * c[k];
        c[0] = -r * c[0];
    }
    return c;
}

// Worst absolute coefficient mismatch between c_lead * prod(z - r_i) and the
// target ascending coefficients.
long double expansion_error(const std::vector<lcplx>& roots, lcplx c_lead,
                            const std::vector<cplx>& target) {
    std::vector<lcplx> p = monic_from_roots(roots);
    long double err = 0.0L;
    for (size_t k = 0; k < target.size(); ++k) {
        lcplx v = (k < p.size() ? p[k] * c_lead : lcplx(0.0L));
        err = std::max(err, std::abs(v - lcplx(target[k])));
    }
    return err;
}

void derivative_inplace(std::vector<lcplx>& c) {
    for (size_t k = 1; k < c.size(); ++k) c[k - 1] = static_cast<long double>(k) * c[k];
    c.pop_back();
}

lcplx horner(const std::vector<lcplx>& c, lcplx z) {
    lcplx acc = 0.0L;
    for (size_t k = c.size(); k-- > 0;) acc = acc * z + c[k];
    return acc;
}

// Aberth-Ehrlich sweeps with immediate updates, then per-cluster refinement.
std::vector<cplx> aberth(const std::vector<cplx>& coeffs) {
    const int deg = static_cast<int>(coeffs.size()) - 1;
    std::vector<lcplx> c(coeffs.begin(), coeffs.end());
    std::vector<lcplx> dc(c);
    derivative_inplace(dc);

    double rho = std::pow(std::abs(coeffs.front() / coeffs.back()), 1.0 / deg);
    if (!(rho > 0.0) || !std::isfinite(rho)) rho = 1.0;
    std::vector<lcplx> z(deg);
    for (int i = 0; i < deg; ++i) {
        double ang = 2.0 * M_PI * i / deg + 0.3765;
        double r = rho * (1.0 + 0.08 * std::cos(3.1 * i));
        z[i] = std::polar(static_cast<long double>(r), static_cast<long double>(ang));
    }

    for (int sweep = 0; sweep < 400; ++sweep) {
        long double worst = 0.0L;
        for (int i = 0; i < deg; ++i) {
            lcplx p = horner(c, z[i]);
            if (std::abs(p) == 0.0L) continue;
            lcplx dp = horner(dc, z[i]);
            if (std::abs(dp) == 0.0L) {
                z[i] += lcplx(1e-8L * (1.0L + std::abs(z[i])), 1e-8L);
                worst = 1.0L;
                continue;
            }
            lcplx newton = p / dp;
            lcplx sum = 0.0L;
            for (int j = 0; j < deg; ++j) {
                if (j == i) continue;
                lcplx diff = z[i] - z[j];
                if (std::abs(diff) == 0.0L) diff = lcplx(1e-20L, 0.0L);
                sum += 1.0L / diff;
            }
            lcplx denom = 1.0L - newton * sum;
            lcplx step = (std::abs(denom) == 0.0L) ? newton : newton / denom;
            z[i] -= step;
            worst = std::max(worst, std::abs(step) / (1.0L + std::abs(z[i])));
        }
        if (worst < 1e-16L) break;
    }

    std::vector<cplx> out(deg);
    for (int i = 0; i < deg; ++i) out[i] = cplx(static_cast<double>(z[i].real()), static_cast<double>(z[i].imag()));
    return out;
}

// Groups nearby approximations and snaps each group to a single center when
// doing so reproduces the coefficients at least as well.  Simple Aberth
// splits an m-fold root into an eps^(1/m)-sized ring, so the grouping radius
// is swept from tight to loose (an 8-fold cluster is ~1e-2 wide); the group
// mean and a Newton pass on the (m-1)-th derivative recover the center, and
// the re-expansion test rejects accidental merges of genuinely distinct
// roots at any radius.
std::vector<cplx> refine_clusters(std::vector<cplx> roots, const std::vector<cplx>& coeffs) {
    const int n = static_cast<int>(roots.size());
    if (n <= 1) return roots;

    std::vector<lcplx> base(roots.begin(), roots.end());
    lcplx lead = coeffs.back();
    long double best_err = expansion_error(base, lead, coeffs);

    for (double radius : {1e-6, 3e-4, 3e-3, 2e-2}) {
        std::vector<int> parent(n);
        std::iota(parent.begin(), parent.end(), 0);
        auto find = [&](int a) {
            while (parent[a] != a) a = parent[a] = parent[parent[a]];
            return a;
        };
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) {
                long double scale = 1.0L + 0.5L * (std::abs(base[i]) + std::abs(base[j]));
                if (std::abs(base[i] - base[j]) < radius * scale) parent[find(i)] = find(j);
            }

        std::vector<std::vector<int>> groups(n);
        for (int i = 0; i < n; ++i) groups[find(i)].push_back(i);

        for (const auto& g : groups) {
            int m = static_cast<int>(g.size());
            if (m < 2) continue;
            lcplx mean = 0.0L;
            for (int idx : g) mean += base[idx];
            mean /= static_cast<long double>(m);

            // Newton for the simple root of the (m-1)-th derivative near the mean.
            std::vector<lcplx> dkc(coeffs.begin(), coeffs.end());
            for (int k = 0; k < m - 1; ++k) derivative_inplace(dkc);
            std::vector<lcplx> dkc1(dkc);
            derivative_inplace(dkc1);
            lcplx center = mean;
            for (int it = 0; it < 60; ++it) {
                lcplx f = horner(dkc, center);
                lcplx df = horner(dkc1, center);
                if (std::abs(df) == 0.0L) break;
                lcplx step = f / df;
                center -= step;
                if (std::abs(step) < 1e-18L * (1.0L + std::abs(center))) break;
            }
            if (!std::isfinite(static_cast<double>(center.real())) ||
                std::abs(center - mean) > 1.0L + std::abs(mean))
                center = mean;

            for (lcplx candidate : {center, mean}) {
                std::vector<lcplx> trial = base;
                for (int idx : g) trial[idx] = candidate;
                long double err = expansion_error(trial, lead, coeffs);
                if (err <= best_err) {
                    base = trial;
                    best_err = err;
                    break;
                }
            }
        }
    }

    for (int i = 0; i < n; ++i)
        roots[i] = cplx(static_cast<double>(base[i].real()), static_cast<double>(base[i].imag()));
    return roots;
}

Vec3 star_from_root(const cplx& z) {
    double n2 = std::norm(z);
    double denom = 1.0 + n2;
    return Vec3{-2.0 * z.real() / denom, -2.0 * z.imag() / denom, (n2 - 1.0) / denom};
}

}  // namespace

std::vector<cplx> majorana_coefficients(const SpinState& s) {
    const int d = s.dim();
    std::vector<cplx> c(d);
    for (int n = 0; n < d; ++n) c[n] = sqrt_binomial(s.twice_spin, n) * s.amplitudes[n];
    return c;
}

MajoranaRoots majorana_roots(const SpinState& s) {
    const int ts = s.twice_spin;
    std::vector<cplx> c = majorana_coefficients(s);
    const double cut = kDeflationCut * max_abs(c);
    MajoranaRoots out;

    // A single root of full multiplicity makes the coefficients a perfect
    // binomial progression; detect that exactly before any truncation, since
    // e.g. near-polar coherent states have leading coefficients far below
    // the deflation cut that still carry the root location.
    if (ts >= 1 && std::abs(c[ts]) > 0.0) {
        cplx z0 = -c[ts - 1] / (static_cast<double>(ts) * c[ts]);
        long double err = 0.0L;
        lcplx pw = 1.0L;
        for (int k = ts; k >= 0; --k) {
            double b = std::exp(static_cast<double>(log_factorial(ts) - log_factorial(k) -
                                                    log_factorial(ts - k)));
            lcplx expect = lcplx(c[ts]) * static_cast<long double>(b) * pw;
            err = std::max(err, std::abs(expect - lcplx(c[k])));
            pw *= lcplx(-z0);
        }
        if (static_cast<double>(err) <= 1e-10 * max_abs(c)) {
            out.finite.assign(ts, z0);
            return out;
        }
    }

    int hi = ts;
    while (hi > 0 && std::abs(c[hi]) <= cut) --hi;
    int lo = 0;
    while (lo < hi && std::abs(c[lo]) <= cut) ++lo;
    out.at_infinity = ts - hi;
    out.finite.assign(lo, cplx(0.0, 0.0));

    if (hi == lo) return out;
    std::vector<cplx> core(c.begin() + lo, c.begin() + hi + 1);
    std::vector<cplx> roots = aberth(core);
    roots = refine_clusters(std::move(roots), core);
    out.finite.insert(out.finite.end(), roots.begin(), roots.end());
    return out;
}

Constellation constellation(const MajoranaRoots& roots, int twice_spin) {
    Constellation c;
    c.twice_spin = twice_spin;
    c.stars.reserve(roots.finite.size() + roots.at_infinity);
    for (const auto& z : roots.finite) c.stars.push_back(star_from_root(z));
    for (int k = 0; k < roots.at_infinity; ++k) c.stars.push_back(Vec3{0.0, 0.0, 1.0});
    std::sort(c.stars.begin(), c.stars.end(), [](const Vec3& a, const Vec3& b) {
        if (a.z != b.z) return a.z > b.z;
        double pa = std::atan2(a.y, a.x), pb = std::atan2(b.y, b.x);
        if (pa != pb) return pa < pb;
        return a.x < b.x;
    });
    return c;
}

Constellation constellation(const SpinState& s) {
    return constellation(majorana_roots(s), s.twice_spin);
}

SpinState state_from_constellation(int twice_spin, const std::vector<Vec3>& stars) {
    if (static_cast<int>(stars.size()) != twice_spin)
        throw std::invalid_argument("need exactly 2S stars");
    std::vector<lcplx> roots;
    for (const auto& raw : stars) {
        Vec3 u = -raw.normalized();
        if (u.z < -1.0 + 1e-14) continue;  // star at the north pole: root at infinity
        roots.emplace_back(u.x / (1.0 + u.z), u.y / (1.0 + u.z));
    }
    std::vector<lcplx> mon = monic_from_roots(roots);
    const int d = twice_spin + 1;
    std::vector<cplx> amps(d, 0.0);
    for (size_t k = 0; k < mon.size(); ++k) {
        int n = static_cast<int>(k);
        amps[n] = cplx(static_cast<double>(mon[k].real()), static_cast<double>(mon[k].imag())) /
                  sqrt_binomial(twice_spin, n);
    }
    return make_state(twice_spin, std::move(amps));
}

double QGrid::theta(int i) const { return M_PI * i / (n_theta - 1); }

double QGrid::phi(int j) const { return 2.0 * M_PI * j / (n_phi - 1); }

QGrid q_function(const SpinState& s, int n_theta, int n_phi) {
    if (n_theta < 2 || n_phi < 2) throw std::invalid_argument("q_function grid needs at least 2x2 points");
    QGrid g;
    g.n_theta = n_theta;
    g.n_phi = n_phi;
    g.values.resize(static_cast<size_t>(n_theta) * n_phi);
    for (int i = 0; i < n_theta; ++i) {
        double th = g.theta(i);
        for (int j = 0; j < n_phi; ++j) {
            SpinState coh = make_coherent(s.twice_spin, th, g.phi(j));
            g.values[static_cast<size_t>(i) * n_phi + j] = std::norm(state_overlap(coh, s));
        }
    }
    return g;
}

namespace detail {

std::vector<cplx> polynomial_roots(const std::vector<cplx>& coeffs) {
    if (coeffs.size() < 2) return {};
    if (std::abs(coeffs.back()) == 0.0 || std::abs(coeffs.front()) == 0.0)
        throw std::invalid_argument("polynomial_roots wants nonzero end coefficients");
    std::vector<cplx> r = aberth(coeffs);
    return refine_clusters(std::move(r), coeffs);
}

std::vector<cplx> polynomial_from_roots(const std::vector<cplx>& roots) {
    std::vector<lcplx> lr(roots.begin(), roots.end());
    std::vector<lcplx> mon = monic_from_roots(lr);
    std::vector<cplx> out(mon.size());
    for (size_t k = 0; k < mon.size(); ++k)
        out[k] = cplx(static_cast<double>(mon[k].real()), static_cast<double>(mon[k].imag()));
    return out;
}

}  // namespace detail

}  // namespace spinent
