#include "spinent/optimize.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdlib>
#include <stdexcept>
#include <thread>

#include "spinent/multipole.hpp"

namespace spinent {

namespace {

using cplx = std::complex<double>;

/// Flattened C_{S n, K q}^{S, n+q} table for one spin, indexed by packed
/// (K, q) times amplitude index n.  Shared by the value and gradient loops.
struct CgFlat {
    int twice_spin;
    int dim;
    std::vector<double> c;  // [(K*K + q + K) * dim + n]

    explicit CgFlat(int ts) : twice_spin(ts), dim(ts + 1) {
        c.assign(static_cast<size_t>(dim) * dim * dim, 0.0);
        const HalfInt S{ts};
        for (int K = 0; K <= ts; ++K) {
            const CgBlock& blk = cg_block(S, HalfInt{2 * K}, S);
            for (int q = -K; q <= K; ++q) {
                size_t base = (static_cast<size_t>(K) * K + q + K) * dim;
                for (int n = 0; n < dim; ++n) {
                    if (n + q < 0 || n + q >= dim) continue;
                    c[base + n] = blk.coeff(HalfInt{2 * n - ts}, HalfInt{2 * q});
                }
            }
        }
    }

    const double* row(int K, int q) const {
        return c.data() + (static_cast<size_t>(K) * K + q + K) * dim;
    }
};

/// G(chi) = (1/(2S+1)) sum_{Kq} |B_Kq|^2 for unit chi; average
/// entanglement is 1 - G.
double value_g(const CgFlat& t, const std::vector<cplx>& chi) {
    const int d = t.dim;
    long double acc = 0.0L;
    for (int K = t.twice_spin; K >= 0; --K)
        for (int q = -K; q <= K; ++q) {
            const double* row = t.row(K, q);
            cplx b = 0.0;
            int n0 = std::max(0, -q), n1 = std::min(d, d - q);
            for (int n = n0; n < n1; ++n) b += row[n] * chi[n + q] * std::conj(chi[n]);
            acc += static_cast<long double>(std::norm(b));
        }
    return static_cast<double>(acc / d);
}

/// dG/d(conj chi_n) at unit norm.
void gradient_g(const CgFlat& t, const std::vector<cplx>& chi, std::vector<cplx>& w) {
    const int d = t.dim;
    w.assign(d, cplx(0.0, 0.0));
    for (int K = t.twice_spin; K >= 0; --K)
        for (int q = -K; q <= K; ++q) {
            const double* row = t.row(K, q);
            cplx b = 0.0;
            int n0 = std::max(0, -q), n1 = std::min(d, d - q);
            for (int n = n0; n < n1; ++n) b += row[n] * chi[n + q] * std::conj(chi[n]);
            cplx bc = std::conj(b);
            for (int n = n0; n < n1; ++n) {
                w[n] += bc * row[n] * chi[n + q];
                w[n + q] += b * row[n] * chi[n];
            }
        }
    double inv = 1.0 / d;
    for (auto& x : w) x *= inv;
}

struct Objective {
    CgFlat table;
    double sign;  // +1 maximizes E, -1 minimizes

    Objective(int ts, bool maximize) : table(ts), sign(maximize ? 1.0 : -1.0) {}

    int dim() const { return table.dim; }

    // f = sign * E(chi) on the unit sphere
    double value(const std::vector<cplx>& chi) const { return sign * (1.0 - value_g(table, chi)); }

    // Euclidean gradient of f at unit chi, already tangent by scale
    // invariance; projected once more to scrub roundoff.
    void gradient(const std::vector<cplx>& chi, std::vector<cplx>& grad) const {
        gradient_g(table, chi, grad);
        double g = value_g(table, chi);
        for (int n = 0; n < dim(); ++n) {
            cplx w = grad[n] - 2.0 * g * chi[n];  // d(G/norm^4)/d(conj chi_n)
            grad[n] = -2.0 * sign * w;            // real-pair gradient of sign*(1-...)
        }
        double dot = 0.0;
        for (int n = 0; n < dim(); ++n)
            dot += grad[n].real() * chi[n].real() + grad[n].imag() * chi[n].imag();
        for (int n = 0; n < dim(); ++n) grad[n] -= dot * chi[n];
    }
};

void normalize(std::vector<cplx>& chi) {
    double n2 = 0.0;
    for (const auto& a : chi) n2 += std::norm(a);
    double inv = 1.0 / std::sqrt(n2);
    for (auto& a : chi) a *= inv;
}

double grad_norm(const std::vector<cplx>& g) {
    double n2 = 0.0;
    for (const auto& a : g) n2 += std::norm(a);
    return std::sqrt(n2);
}

struct LocalResult {
    std::vector<cplx> chi;
    double f = 0.0;
    int iterations = 0;
    bool converged = false;
};

LocalResult ascend(const Objective& obj, std::vector<cplx> chi, const OptimizerConfig& cfg) {
    LocalResult res;
    normalize(chi);
    double f = obj.value(chi);
    std::vector<cplx> grad, trial(chi.size());
    double step = cfg.initial_step;
    int it = 0;
    for (; it < cfg.max_iterations; ++it) {
        obj.gradient(chi, grad);
        double gn = grad_norm(grad);
        if (gn < cfg.gradient_tolerance) {
            res.converged = true;
            break;
        }
        double eta = std::min(step * 4.0, 1.0);
        bool accepted = false;
        while (eta > 1e-16) {
            for (size_t n = 0; n < chi.size(); ++n) trial[n] = chi[n] + eta * grad[n];
            normalize(trial);
            double ft = obj.value(trial);
            if (ft >= f + cfg.sufficient_decrease * eta * gn * gn) {
                chi.swap(trial);
                f = ft;
                step = eta;
                accepted = true;
                break;
            }
            eta *= cfg.backtrack_factor;
        }
        if (!accepted) break;
    }
    res.chi = std::move(chi);
    res.f = f;
    res.iterations = it;
    return res;
}

/// Coordinate perturbations with shrinking radius; returns true when no
/// perturbation at the smallest radius improves the value.
bool polish(const Objective& obj, std::vector<cplx>& chi, double& f, const OptimizerConfig& cfg) {
    const int d = obj.dim();
    bool clean = false;
    for (double delta : {1e-3, 1e-4, 1e-5, 1e-6}) {
        clean = true;
        for (int n = 0; n < 2 * d; ++n) {
            for (double s : {1.0, -1.0}) {
                std::vector<cplx> trial = chi;
                if (n < d)
                    trial[n] += s * delta;
                else
                    trial[n - d] += cplx(0.0, s * delta);
                normalize(trial);
                double ft = obj.value(trial);
                if (ft > f + 1e-14) {
                    LocalResult r = ascend(obj, trial, cfg);
                    if (r.f > f) {
                        chi = std::move(r.chi);
                        f = r.f;
                        clean = false;
                    }
                }
            }
        }
    }
    return clean;
}

int resolve_threads(int requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("SPINENT_THREADS")) {
        int v = std::atoi(env);
        if (v > 0) return v;
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw ? static_cast<int>(hw) : 1;
}

OptimizationReport run(int twice_spin, const OptimizerConfig& cfg, bool maximize) {
    if (twice_spin < 1) throw std::invalid_argument("optimizer needs twice_spin >= 1");
    if (cfg.restarts < 0 || cfg.max_iterations < 1) throw std::invalid_argument("bad optimizer config");
    if (!(cfg.gradient_tolerance > 0.0) || !(cfg.initial_step > 0.0) ||
        !(cfg.backtrack_factor > 0.0) || cfg.backtrack_factor >= 1.0 ||
        !(cfg.sufficient_decrease > 0.0))
        throw std::invalid_argument("bad optimizer config");

    auto t0 = std::chrono::steady_clock::now();
    const int restarts = cfg.restarts > 0 ? cfg.restarts : std::max(50, 10 * twice_spin);
    const Objective obj(twice_spin, maximize);

    std::vector<LocalResult> results(restarts);
    std::atomic<int> next{0};
    auto worker = [&]() {
        for (;;) {
            int r = next.fetch_add(1);
            if (r >= restarts) return;
            auto rng = derived_rng(cfg.seed, static_cast<std::uint64_t>(r));
            SpinState start = random_state(twice_spin, rng);
            results[r] = ascend(obj, start.amplitudes, cfg);
        }
    };
    int nthreads = std::min(resolve_threads(cfg.threads), restarts);
    if (nthreads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < nthreads; ++t) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }

    int best = 0;
    for (int r = 1; r < restarts; ++r)
        if (results[r].f > results[best].f) best = r;

    std::vector<cplx> chi = results[best].chi;
    double f = results[best].f;
    OptimizationReport rep;
    rep.locally_optimal = polish(obj, chi, f, cfg);

    rep.best_state = make_state(twice_spin, chi);
    rep.best_value = maximize ? f : -f;
    rep.best_restart = best;
    rep.restart_values.reserve(restarts);
    rep.restart_iterations.reserve(restarts);
    rep.restart_converged.reserve(restarts);
    for (const auto& r : results) {
        rep.restart_values.push_back(maximize ? r.f : -r.f);
        rep.restart_iterations.push_back(r.iterations);
        rep.restart_converged.push_back(r.converged);
    }
    rep.seed = cfg.seed;
    rep.wall_time_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return rep;
}

}  // namespace

std::pair<double, std::vector<double>> objective_and_gradient(const std::vector<double>& point) {
    if (point.empty() || point.size() % 2 != 0)
        throw std::invalid_argument("objective_and_gradient: need an even-length real vector");
    const int d = static_cast<int>(point.size()) / 2;
    std::vector<cplx> chi(d);
    double n2 = 0.0;
    for (int n = 0; n < d; ++n) {
        chi[n] = cplx(point[n], point[n + d]);
        n2 += std::norm(chi[n]);
    }
    if (!(n2 > 0.0)) throw std::invalid_argument("objective_and_gradient: zero vector");
    double scale = 1.0 / std::sqrt(n2);
    for (auto& a : chi) a *= scale;

    Objective obj(d - 1, true);
    double e = obj.value(chi);
    std::vector<cplx> grad;
    obj.gradient(chi, grad);
    std::vector<double> out(2 * d);
    for (int n = 0; n < d; ++n) {
        out[n] = grad[n].real() * scale;
        out[n + d] = grad[n].imag() * scale;
    }
    return {e, std::move(out)};
}

OptimizationReport maximize_average_entanglement(int twice_spin, const OptimizerConfig& config) {
    return run(twice_spin, config, true);
}

OptimizationReport minimize_average_entanglement(int twice_spin, const OptimizerConfig& config) {
    return run(twice_spin, config, false);
}

}  // namespace spinent
