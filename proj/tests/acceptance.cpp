// End-to-end acceptance gate.  Each numbered check prints one [PASS]/[FAIL]
// line with a short detail; the process exits nonzero if any check fails.
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "spinent/majorana.hpp"
#include "spinent/multipole.hpp"
#include "spinent/optimize.hpp"
#include "spinent/oracle.hpp"
#include "spinent/states.hpp"
#include "spinent/symmetry.hpp"

using namespace spinent;
using std::complex;

namespace {
constexpr double kPi = 3.14159265358979323846;

double logbinom(int n, int k) {
    return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

Vec3 direction(double theta, double phi) {
    return {std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi), std::cos(theta)};
}

double max_match_dist(std::vector<Vec3> a, std::vector<Vec3> b) {
    double worst = 0.0;
    for (const Vec3& p : a) {
        size_t best = 0;
        double bd = 1e300;
        for (size_t k = 0; k < b.size(); ++k) {
            double d = (p - b[k]).norm();
            if (d < bd) {
                bd = d;
                best = k;
            }
        }
        worst = std::max(worst, bd);
        b.erase(b.begin() + best);
    }
    return worst;
}

// Optimizer runs shared between the symmetry and bounds checks.
std::map<int, OptimizationReport>& max_runs() {
    static std::map<int, OptimizationReport> cache;
    return cache;
}

const OptimizationReport& maximize_cached(int ts) {
    auto it = max_runs().find(ts);
    if (it != max_runs().end()) return it->second;
    OptimizerConfig cfg;
    cfg.seed = 2025 + ts;
    if (ts == 12) cfg.restarts = 200;
    auto rep = maximize_average_entanglement(ts, cfg);
    return max_runs().emplace(ts, std::move(rep)).first->second;
}

struct Check {
    std::string label;
    std::function<bool(std::string&)> body;
    double max_seconds = 0.0;  // 0 means no budget
};

bool check_coherent_closed_form(std::string& detail) {
    double worst_cross = 0.0, worst_state = 0.0;
    auto rng = derived_rng(101, 0);
    std::uniform_real_distribution<double> uth(0.0, kPi), uph(0.0, 2 * kPi);
    for (int ts = 1; ts <= 40; ++ts) {
        double by_sum = 0.0;
        for (int m = 0; m <= ts; ++m)
            by_sum += std::exp(2.0 * logbinom(ts, m) - logbinom(2 * ts, 2 * m));
        by_sum /= (2.0 * ts + 1.0);
        double by_gamma = 1.0 - coherent_average_value(ts);
        worst_cross = std::max(worst_cross, std::abs(by_sum - by_gamma));
        for (int k = 0; k < 10; ++k) {
            auto s = make_coherent(ts, uth(rng), uph(rng));
            worst_state =
                std::max(worst_state, std::abs(averaged_entanglement(s) - (1.0 - by_gamma)));
        }
    }
    char buf[128];
    std::snprintf(buf, sizeof buf, "route gap %.2e, state gap %.2e", worst_cross, worst_state);
    detail = buf;
    return worst_cross < 1e-12 && worst_state < 1e-10;
}

bool check_spin_half_plateau(std::string& detail) {
    double worst = 0.0;
    auto rng = derived_rng(102, 0);
    for (int k = 0; k < 100; ++k)
        worst = std::max(worst, std::abs(averaged_entanglement(random_state(1, rng)) - 1.0 / 3.0));
    char buf[64];
    std::snprintf(buf, sizeof buf, "max |E - 1/3| = %.2e", worst);
    detail = buf;
    return worst < 1e-12;
}

bool check_spin_one_optimum(std::string& detail) {
    OptimizerConfig cfg;
    cfg.restarts = 50;
    cfg.seed = 31;
    auto rep = maximize_average_entanglement(2, cfg);
    auto stars = constellation(rep.best_state).stars;
    double anti = (stars.size() == 2) ? (stars[0] + stars[1]).norm() : 1e9;
    char buf[96];
    std::snprintf(buf, sizeof buf, "best %.12f, antipodal defect %.2e", rep.best_value, anti);
    detail = buf;
    return std::abs(rep.best_value - 8.0 / 15.0) < 1e-9 && anti < 1e-5;
}

bool check_monte_carlo_agreement(std::string& detail) {
    auto rng = derived_rng(103, 0);
    std::uniform_int_distribution<int> spin(1, 6);
    double worst_sigma = 0.0;
    int failures = 0;
    for (int k = 0; k < 20; ++k) {
        auto s = random_state(spin(rng), rng);
        auto est = mc_average_entanglement(s, 200000, 500 + k);
        double sigmas = std::abs(est.mean - averaged_entanglement(s)) / est.std_error;
        worst_sigma = std::max(worst_sigma, sigmas);
        if (sigmas >= 4.0) ++failures;
    }
    char buf[64];
    std::snprintf(buf, sizeof buf, "worst deviation %.2f sigma", worst_sigma);
    detail = buf;
    return failures == 0;
}

bool check_haar_moments(std::string& detail) {
    double worst_sigma = 0.0;
    std::uint64_t seed = 900;
    for (int K = 0; K <= 4; ++K)
        for (int Kp = 0; Kp <= 4; ++Kp) {
            int q = std::min(1, K), qp = std::min(1, Kp) * (Kp == K ? 1 : -1);
            for (auto [a, b] : {std::pair<int, int>{0, 0}, std::pair<int, int>{q, qp}}) {
                if (std::abs(a) > K || std::abs(b) > Kp) continue;
                auto est = haar_moment_check(K, a, Kp, b, 20000, seed++);
                complex<double> want =
                    (K == Kp && a == b) ? complex<double>(1.0 / (2 * K + 1), 0.0) : 0.0;
                double sigmas = std::abs(est.mean - want) / est.std_error;
                worst_sigma = std::max(worst_sigma, sigmas);
            }
        }
    char buf[64];
    std::snprintf(buf, sizeof buf, "worst deviation %.2f sigma", worst_sigma);
    detail = buf;
    return worst_sigma < 4.0;
}

bool check_rotation_invariance(std::string& detail) {
    auto rng = derived_rng(104, 0);
    std::uniform_int_distribution<int> spin(1, 20);
    double worst = 0.0;
    for (int k = 0; k < 50; ++k) {
        auto s = random_state(spin(rng), rng);
        auto r = random_haar_rotation(rng);
        worst = std::max(worst,
                         std::abs(averaged_entanglement(rotate(s, r)) - averaged_entanglement(s)));
    }
    char buf[48];
    std::snprintf(buf, sizeof buf, "max drift %.2e", worst);
    detail = buf;
    return worst < 1e-10;
}

bool check_route_equivalence(std::string& detail) {
    auto rng = derived_rng(105, 0);
    double worst_avg = 0.0, worst_table = 0.0;
    for (int ts = 1; ts <= 12; ++ts) {
        auto s = random_state(ts, rng);
        worst_avg = std::max(worst_avg, std::abs(averaged_entanglement(s) -
                                                 averaged_entanglement_direct(s)));
        auto fast = multipoles(s);
        auto slow = dense_multipoles(s);
        for (int K = 0; K <= ts; ++K)
            for (int q = -K; q <= K; ++q)
                worst_table = std::max(worst_table, std::abs(fast.rho(K, q) - slow.rho(K, q)));
    }
    char buf[64];
    std::snprintf(buf, sizeof buf, "avg gap %.2e, table gap %.2e", worst_avg, worst_table);
    detail = buf;
    return worst_avg < 1e-10 && worst_table < 1e-10;
}

bool check_extremal_symmetries(std::string& detail) {
    const std::map<int, int> expected = {{4, 24}, {6, 48}, {12, 120}};
    std::string parts;
    bool ok = true;
    for (auto [ts, want] : expected) {
        auto rep = detect_point_group(constellation(maximize_cached(ts).best_state), 1e-3);
        parts += "2S=" + std::to_string(ts) + " order " + std::to_string(rep.order) + " ";
        ok = ok && (rep.order == want);
    }

    // The twisted-cube optimum at 2S = 8 beats the perfect cube.
    std::vector<Vec3> cube;
    for (int sx : {-1, 1})
        for (int sy : {-1, 1})
            for (int sz : {-1, 1})
                cube.push_back(Vec3{double(sx), double(sy), double(sz)}.normalized());
    double cube_value = averaged_entanglement_direct(state_from_constellation(8, cube));
    double best8 = maximize_cached(8).best_value;
    char buf[96];
    std::snprintf(buf, sizeof buf, "%s; 2S=8 best %.9f vs cube %.9f", parts.c_str(), best8,
                  cube_value);
    detail = buf;
    return ok && best8 > cube_value + 1e-6;
}

bool check_bounds_and_asymptote(std::string& detail) {
    bool bounds_ok = true, asym_ok = true;
    double worst_margin = 1e9;
    int worst_ts = 0;
    for (int ts = 1; ts <= 12; ++ts) {
        const auto& rep = maximize_cached(ts);
        double lo = coherent_average_value(ts);
        double hi = ts / (ts + 1.0);
        bounds_ok = bounds_ok && rep.best_value >= lo - 1e-12 && rep.best_value < hi;
        double margin = rep.best_value - (1.0 - 1.0 / ts - 0.05);
        if (margin < worst_margin) {
            worst_margin = margin;
            worst_ts = ts;
        }
        asym_ok = asym_ok && margin >= 0.0;
    }
    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "coherent/upper bounds %s; asymptote floor 1-1/2S-0.05 %s, worst margin %.4f at 2S=%d",
                  bounds_ok ? "hold" : "VIOLATED", asym_ok ? "holds" : "violated", worst_margin,
                  worst_ts);
    detail = buf;
    return bounds_ok && asym_ok;
}

bool check_gradient(std::string& detail) {
    auto rng = derived_rng(106, 0);
    std::normal_distribution<double> gauss;
    const double h = 1e-5;
    double worst = 0.0;
    for (int ts : {2, 5, 9}) {
        for (int trial = 0; trial < 20; ++trial) {
            std::vector<double> p(2 * (ts + 1));
            for (auto& v : p) v = gauss(rng);
            auto [value, grad] = objective_and_gradient(p);
            double num = 0.0, den = 0.0;
            for (size_t k = 0; k < p.size(); ++k) {
                auto pp = p, pm = p;
                pp[k] += h;
                pm[k] -= h;
                double fd =
                    (objective_and_gradient(pp).first - objective_and_gradient(pm).first) / (2 * h);
                num += (fd - grad[k]) * (fd - grad[k]);
                den += grad[k] * grad[k];
            }
            worst = std::max(worst, std::sqrt(num / std::max(den, 1e-24)));
        }
    }
    char buf[48];
    std::snprintf(buf, sizeof buf, "worst relative error %.2e", worst);
    detail = buf;
    return worst < 1e-6;
}

bool check_constellation_fidelity(std::string& detail) {
    // Coherent stars co-located at the labeled direction.
    double worst_coh = 0.0;
    auto rng = derived_rng(107, 0);
    std::uniform_real_distribution<double> uth(0.05, kPi - 0.05), uph(0.0, 2 * kPi);
    for (int ts : {1, 2, 5, 9, 14}) {
        double th = uth(rng), ph = uph(rng);
        auto c = constellation(make_coherent(ts, th, ph));
        for (const Vec3& star : c.stars)
            worst_coh = std::max(worst_coh, (star - direction(th, ph)).norm());
    }

    // Equivariance under rotations.
    double worst_rot = 0.0;
    auto s = random_state(7, rng);
    auto base = constellation(s).stars;
    for (int k = 0; k < 20; ++k) {
        auto r = random_haar_rotation(rng);
        Mat3 R = r.to_matrix();
        std::vector<Vec3> expected;
        for (const Vec3& star : base) expected.push_back(R.apply(star));
        worst_rot = std::max(worst_rot, max_match_dist(constellation(rotate(s, r)).stars, expected));
    }

    // Q zeros sit at star antipodes: exact overlap vanishes there, and the
    // grid is small in the cell containing each antipode.
    auto probe = random_state(6, rng);
    auto grid = q_function(probe, 181, 361);
    double maxq = 0.0;
    for (double v : grid.values) maxq = std::max(maxq, v);
    double worst_exact = 0.0, worst_grid = 0.0;
    for (const Vec3& star : constellation(probe).stars) {
        Vec3 anti = -star;
        double th = std::acos(std::min(1.0, std::max(-1.0, anti.z)));
        double ph = std::atan2(anti.y, anti.x);
        if (ph < 0) ph += 2 * kPi;
        worst_exact = std::max(
            worst_exact, std::norm(state_overlap(make_coherent(6, th, ph), probe)));
        int i = static_cast<int>(std::lround(th / kPi * (grid.n_theta - 1)));
        int j = static_cast<int>(std::lround(ph / (2 * kPi) * (grid.n_phi - 1)));
        worst_grid = std::max(worst_grid, grid.at(i, j) / maxq);
    }
    char buf[128];
    std::snprintf(buf, sizeof buf, "coherent %.2e, equivariance %.2e, Q(antipode) %.2e/%.2e",
                  worst_coh, worst_rot, worst_exact, worst_grid);
    detail = buf;
    return worst_coh < 1e-9 && worst_rot < 1e-8 && worst_exact < 1e-12 && worst_grid < 0.05;
}
}  // namespace

int main() {
    std::vector<Check> checks = {
        {"coherent closed form, both routes and live states", check_coherent_closed_form, 10},
        {"spin-1/2 average pinned at 1/3", check_spin_half_plateau},
        {"spin-1 maximum 8/15 with antipodal stars", check_spin_one_optimum, 30},
        {"Monte Carlo estimator agrees with the rank formula", check_monte_carlo_agreement, 120},
        {"Haar moments reproduce the orthogonality relations", check_haar_moments},
        {"average invariant under rotations", check_rotation_invariance},
        {"independent evaluation routes coincide", check_route_equivalence},
        {"extremal constellations carry the expected symmetries", check_extremal_symmetries, 600},
        {"bounds and large-spin behaviour of the maxima", check_bounds_and_asymptote},
        {"analytic gradient against finite differences", check_gradient},
        {"constellation fidelity and Q-function zeros", check_constellation_fidelity},
    };

    int failed = 0;
    for (size_t k = 0; k < checks.size(); ++k) {
        auto start = std::chrono::steady_clock::now();
        std::string detail;
        bool ok = false;
        try {
            ok = checks[k].body(detail);
        } catch (const std::exception& e) {
            detail = std::string("exception: ") + e.what();
        }
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (ok && checks[k].max_seconds > 0.0 && secs > checks[k].max_seconds) {
            ok = false;
            detail += "; over time budget";
        }
        std::printf("[%s] %2zu. %s (%s; %.1f s)\n", ok ? "PASS" : "FAIL", k + 1,
                    checks[k].label.c_str(), detail.c_str(), secs);
        std::fflush(stdout);
        if (!ok) ++failed;
    }
    if (failed) std::printf("%d of %zu checks failed\n", failed, checks.size());
    else std::printf("all %zu checks passed\n", checks.size());
    return failed ? 1 : 0;
}
