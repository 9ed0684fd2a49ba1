#include "spinent/oracle.hpp"

#include <cmath>
#include <stdexcept>

namespace spinent {

namespace {

constexpr std::size_t kBatch = 4096;

using cplx = std::complex<double>;

}  // namespace

McEstimate mc_average_entanglement(const SpinState& s, std::size_t n_samples, std::uint64_t seed) {
    if (n_samples < 100) throw std::invalid_argument("mc_average_entanglement: need at least 100 samples");
    long double sum = 0.0L, sumsq = 0.0L;
    std::size_t done = 0;
    for (std::size_t batch = 0; done < n_samples; ++batch) {
        std::size_t count = std::min(kBatch, n_samples - done);
        auto rng = derived_rng(seed, batch);
        long double bsum = 0.0L, bsq = 0.0L;
        for (std::size_t i = 0; i < count; ++i) {
            Rotation r = random_haar_rotation(rng);
            double e = linear_entropy(rotate(s, r));
            bsum += e;
            bsq += static_cast<long double>(e) * e;
        }
        sum += bsum;
        sumsq += bsq;
        done += count;
    }
    McEstimate est;
    est.n_samples = n_samples;
    long double n = static_cast<long double>(n_samples);
    long double mean = sum / n;
    long double var = (sumsq / n - mean * mean) * n / (n - 1.0L);
    est.mean = static_cast<double>(mean);
    est.std_error = static_cast<double>(std::sqrt(std::max(var, 0.0L) / n));
    return est;
}

HaarMomentEstimate haar_moment_check(int K, int q, int Kp, int qp, std::size_t n_samples,
                                     std::uint64_t seed) {
    if (K < 0 || Kp < 0 || std::abs(q) > K || std::abs(qp) > Kp)
        throw std::invalid_argument("haar_moment_check: invalid indices");
    if (n_samples < 1000) throw std::invalid_argument("haar_moment_check: need at least 1000 samples");
    const HalfInt jK{2 * K}, jKp{2 * Kp};
    const HalfInt mq{2 * q}, mqp{2 * qp}, zero{0};
    long double sre = 0.0L, sim = 0.0L, sre2 = 0.0L, sim2 = 0.0L;
    std::size_t done = 0;
    for (std::size_t batch = 0; done < n_samples; ++batch) {
        std::size_t count = std::min(kBatch, n_samples - done);
        auto rng = derived_rng(seed, batch);
        for (std::size_t i = 0; i < count; ++i) {
            Rotation r = random_haar_rotation(rng);
            cplx x = std::conj(wigner_D(jK, mq, zero, r)) * wigner_D(jKp, mqp, zero, r);
            sre += x.real();
            sim += x.imag();
            sre2 += static_cast<long double>(x.real()) * x.real();
            sim2 += static_cast<long double>(x.imag()) * x.imag();
        }
        done += count;
    }
    HaarMomentEstimate est;
    est.n_samples = n_samples;
    long double n = static_cast<long double>(n_samples);
    long double mre = sre / n, mim = sim / n;
    long double vre = (sre2 / n - mre * mre) * n / (n - 1.0L);
    long double vim = (sim2 / n - mim * mim) * n / (n - 1.0L);
    est.mean = cplx(static_cast<double>(mre), static_cast<double>(mim));
    est.std_error = static_cast<double>(std::sqrt(std::max(vre + vim, 0.0L) / n));
    return est;
}

std::vector<cplx> dense_tensor_operator(int twice_spin, int K, int q) {
    if (twice_spin < 0 || twice_spin > 20)
        throw std::invalid_argument("dense tensor operators capped at twice_spin <= 20");
    if (K < 0 || K > twice_spin || std::abs(q) > K)
        throw std::invalid_argument("dense_tensor_operator: invalid (K, q)");
    const int d = twice_spin + 1;
    std::vector<cplx> t(static_cast<size_t>(d) * d, 0.0);
    double scale = std::sqrt(static_cast<double>(2 * K + 1) / d);
    const HalfInt S{twice_spin}, rank{2 * K}, proj{2 * q};
    for (int n = 0; n < d; ++n) {
        int np = n + q;
        if (np < 0 || np >= d) continue;
        HalfInt m{2 * n - twice_spin};
        HalfInt mp{2 * np - twice_spin};
        t[static_cast<size_t>(np) * d + n] = scale * clebsch_gordan(S, m, rank, proj, S, mp);
    }
    return t;
}

MultipoleTable dense_multipoles(const SpinState& s) {
    const int ts = s.twice_spin;
    if (ts > 20) throw std::invalid_argument("dense_multipoles capped at twice_spin <= 20");
    const int d = ts + 1;
    std::vector<cplx> rho(static_cast<size_t>(d) * d);
    for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b)
            rho[static_cast<size_t>(a) * d + b] = s.amplitudes[a] * std::conj(s.amplitudes[b]);

    MultipoleTable table;
    table.twice_spin = ts;
    table.values.assign(static_cast<size_t>(d) * d, 0.0);
    for (int K = 0; K <= ts; ++K)
        for (int q = -K; q <= K; ++q) {
            std::vector<cplx> t = dense_tensor_operator(ts, K, q);
            cplx acc = 0.0;
            for (size_t i = 0; i < t.size(); ++i) acc += rho[i] * std::conj(t[i]);
            table.rho(K, q) = acc;
        }
    return table;
}

double tensor_orthonormality_error(int twice_spin) {
    if (twice_spin < 0 || twice_spin > 20)
        throw std::invalid_argument("tensor_orthonormality_error capped at twice_spin <= 20");
    const int d = twice_spin + 1;
    std::vector<std::vector<cplx>> ops;
    for (int K = 0; K <= twice_spin; ++K)
        for (int q = -K; q <= K; ++q) ops.push_back(dense_tensor_operator(twice_spin, K, q));
    double worst = 0.0;
    for (size_t a = 0; a < ops.size(); ++a)
        for (size_t b = 0; b < ops.size(); ++b) {
            cplx tr = 0.0;
            for (int i = 0; i < d * d; ++i) tr += ops[a][i] * std::conj(ops[b][i]);
            cplx expect = (a == b) ? 1.0 : 0.0;
            worst = std::max(worst, std::abs(tr - expect));
        }
    return worst;
}

}  // namespace spinent
