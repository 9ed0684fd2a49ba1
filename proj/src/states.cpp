#include "spinent/states.hpp"

#include <cmath>
#include <stdexcept>

namespace spinent {

namespace {

void check_twice_spin(int twice_spin) {
    if (twice_spin < 0) throw std::invalid_argument("twice_spin must be nonnegative");
}

double log_binomial(int n, int k) {
    return static_cast<double>(log_factorial(n) - log_factorial(k) - log_factorial(n - k));
}

}  // namespace

double SpinState::norm() const {
    double s = 0.0;
    for (const auto& a : amplitudes) s += std::norm(a);
    return std::sqrt(s);
}

SpinState make_state(int twice_spin, std::vector<std::complex<double>> amplitudes) {
    check_twice_spin(twice_spin);
    if (static_cast<int>(amplitudes.size()) != twice_spin + 1)
        throw std::invalid_argument("amplitude vector has wrong dimension");
    double n = 0.0;
    for (const auto& a : amplitudes) n += std::norm(a);
    if (!(n > 0.0) || !std::isfinite(n)) throw std::invalid_argument("state vector must be nonzero and finite");
    n = std::sqrt(n);
    for (auto& a : amplitudes) a /= n;
    return SpinState{twice_spin, std::move(amplitudes)};
}

SpinState make_coherent(int twice_spin, double theta, double phi) {
    check_twice_spin(twice_spin);
    const int d = twice_spin + 1;
    std::vector<std::complex<double>> amps(d, 0.0);
    double t = std::tan(0.5 * theta);
    if (!std::isfinite(t) || theta >= M_PI) {
        amps[d - 1] = 1.0;  // stereographic pole: the |S, S> state
        return SpinState{twice_spin, std::move(amps)};
    }
    if (t == 0.0) {
        amps[0] = 1.0;
        return SpinState{twice_spin, std::move(amps)};
    }
    // amplitude_n ~ sqrt(binom(2S, n)) * tan(theta/2)^n * e^{-i n phi};
    // built in log space so large tan powers cannot overflow.
    double logt = std::log(t);
    std::vector<double> lm(d);
    double lmax = -1e300;
    for (int n = 0; n < d; ++n) {
        lm[n] = 0.5 * log_binomial(twice_spin, n) + n * logt;
        lmax = std::max(lmax, lm[n]);
    }
    double norm2 = 0.0;
    for (int n = 0; n < d; ++n) {
        double mag = std::exp(lm[n] - lmax);
        amps[n] = std::polar(mag, -n * phi);
        norm2 += mag * mag;
    }
    double inv = 1.0 / std::sqrt(norm2);
    for (auto& a : amps) a *= inv;
    return SpinState{twice_spin, std::move(amps)};
}

SpinState make_basis_state(int twice_spin, HalfInt m) {
    check_twice_spin(twice_spin);
    if (std::abs(m.twice) > twice_spin || ((m.twice + twice_spin) & 1) != 0)
        throw std::invalid_argument("invalid projection for basis state");
    std::vector<std::complex<double>> amps(twice_spin + 1, 0.0);
    amps[(m.twice + twice_spin) / 2] = 1.0;
    return SpinState{twice_spin, std::move(amps)};
}

std::complex<double> state_overlap(const SpinState& a, const SpinState& b) {
    if (a.twice_spin != b.twice_spin) throw std::invalid_argument("state_overlap: dimension mismatch");
    std::complex<double> s = 0.0;
    for (int n = 0; n < a.dim(); ++n) s += std::conj(a.amplitudes[n]) * b.amplitudes[n];
    return s;
}

SpinState rotate(const SpinState& s, const Rotation& r) {
    auto D = wigner_D_matrix(s.spin(), r);
    const int d = s.dim();
    std::vector<std::complex<double>> out(d, 0.0);
    for (int ip = 0; ip < d; ++ip) {
        std::complex<double> acc = 0.0;
        for (int im = 0; im < d; ++im) acc += D[static_cast<size_t>(ip) * d + im] * s.amplitudes[im];
        out[ip] = acc;
    }
    return SpinState{s.twice_spin, std::move(out)};
}

SpinState canonical_phase(const SpinState& s) {
    SpinState out = s;
    for (const auto& a : s.amplitudes) {
        if (std::abs(a) > 1e-12) {
            std::complex<double> ph = std::conj(a) / std::abs(a);
            for (auto& b : out.amplitudes) b *= ph;
            break;
        }
    }
    return out;
}

Rotation random_haar_rotation(std::mt19937_64& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    Rotation q;
    do {
        q = Rotation{gauss(rng), gauss(rng), gauss(rng), gauss(rng)};
    } while (q.norm() < 1e-8);
    return q.normalized();
}

SpinState random_state(int twice_spin, std::mt19937_64& rng) {
    check_twice_spin(twice_spin);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::vector<std::complex<double>> amps(twice_spin + 1);
    double n2 = 0.0;
    do {
        n2 = 0.0;
        for (auto& a : amps) {
            a = {gauss(rng), gauss(rng)};
            n2 += std::norm(a);
        }
    } while (n2 < 1e-12);
    double inv = 1.0 / std::sqrt(n2);
    for (auto& a : amps) a *= inv;
    return SpinState{twice_spin, std::move(amps)};
}

std::mt19937_64 derived_rng(std::uint64_t seed, std::uint64_t stream) {
    // splitmix64 scrambling of seed + golden-ratio stride
    std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    z = z ^ (z >> 31);
    return std::mt19937_64(z);
}

}  // namespace spinent
