#include "spinent/multipole.hpp"

#include <cmath>
#include <stdexcept>

namespace spinent {

namespace {

size_t pack_index(int K, int q) { return static_cast<size_t>(K) * K + (q + K); }

}  // namespace

std::complex<double> MultipoleTable::rho(int K, int q) const {
    if (K < 0 || K > twice_spin || std::abs(q) > K) return 0.0;
    return values[pack_index(K, q)];
}

std::complex<double>& MultipoleTable::rho(int K, int q) {
    if (K < 0 || K > twice_spin || std::abs(q) > K) throw std::out_of_range("multipole index");
    return values[pack_index(K, q)];
}

MultipoleTable multipoles(const SpinState& s) {
    const int ts = s.twice_spin;
    const int d = ts + 1;
    MultipoleTable t;
    t.twice_spin = ts;
    t.values.assign(static_cast<size_t>(d) * d, 0.0);
    const HalfInt S{ts};
    for (int K = 0; K <= ts; ++K) {
        const CgBlock& blk = cg_block(S, HalfInt{2 * K}, S);
        double scale = std::sqrt(static_cast<double>(2 * K + 1) / d);
        for (int q = -K; q <= K; ++q) {
            std::complex<double> acc = 0.0;
            for (int n = 0; n < d; ++n) {
                int np = n + q;
                if (np < 0 || np >= d) continue;
                int tm = 2 * n - ts;
                acc += blk.coeff(HalfInt{tm}, HalfInt{2 * q}) * s.amplitudes[np] *
                       std::conj(s.amplitudes[n]);
            }
            t.values[pack_index(K, q)] = scale * acc;
        }
    }
    return t;
}

double multipole_purity(const MultipoleTable& t) {
    long double acc = 0.0L;
    for (const auto& v : t.values) acc += std::norm(v);
    return static_cast<double>(acc);
}

double linear_entropy(const SpinState& s) {
    long double acc = 0.0L;
    for (const auto& a : s.amplitudes) {
        long double p = std::norm(a);
        acc += p * p;
    }
    return static_cast<double>(1.0L - acc);
}

double linear_entropy_multipole(const MultipoleTable& t) {
    long double acc = 0.0L;
    for (int K = t.twice_spin; K >= 0; --K) acc += std::norm(t.rho(K, 0));
    return static_cast<double>(1.0L - acc);
}

std::vector<double> reduced_density(const SpinState& s) {
    std::vector<double> p(s.amplitudes.size());
    for (size_t i = 0; i < p.size(); ++i) p[i] = std::norm(s.amplitudes[i]);
    return p;
}

double averaged_entanglement(const SpinState& s) {
    MultipoleTable t = multipoles(s);
    // High ranks carry the small weights; summing them first keeps the
    // final subtraction from 1 well conditioned.
    long double acc = 0.0L;
    for (int K = t.twice_spin; K >= 0; --K) {
        long double rank = 0.0L;
        for (int q = -K; q <= K; ++q) rank += std::norm(t.rho(K, q));
        acc += rank / (2 * K + 1);
    }
    return static_cast<double>(1.0L - acc);
}

double averaged_entanglement_direct(const SpinState& s) {
    const int ts = s.twice_spin;
    const int d = ts + 1;
    const HalfInt S{ts};
    long double acc = 0.0L;
    for (int K = ts; K >= 0; --K) {
        const CgBlock& blk = cg_block(S, HalfInt{2 * K}, S);
        for (int q = -K; q <= K; ++q) {
            std::complex<long double> b = 0.0L;
            for (int n = 0; n < d; ++n) {
                int np = n + q;
                if (np < 0 || np >= d) continue;
                int tm = 2 * n - ts;
                std::complex<double> term = s.amplitudes[np] * std::conj(s.amplitudes[n]);
                long double c = blk.coeff(HalfInt{tm}, HalfInt{2 * q});
                b += std::complex<long double>(c * term.real(), c * term.imag());
            }
            acc += std::norm(b);
        }
    }
    return static_cast<double>(1.0L - acc / d);
}

double coherent_average_value(int twice_spin) {
    if (twice_spin < 0) throw std::invalid_argument("twice_spin must be nonnegative");
    long double n = twice_spin;
    long double lg = 0.5L * std::log(static_cast<long double>(M_PI)) + std::lgamma(n + 1.0L) -
                     std::log(2.0L) - std::lgamma(n + 1.5L);
    return static_cast<double>(1.0L - std::exp(lg));
}

}  // namespace spinent
