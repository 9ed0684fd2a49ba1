#include "spinent/angular.hpp"

#include <array>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>

namespace spinent {

namespace {

constexpr int kMaxFactorial = 2048;

const std::vector<long double>& log_factorial_table() {
    static const std::vector<long double> table = [] {
        std::vector<long double> t(kMaxFactorial + 1);
        t[0] = 0.0L;
        for (int n = 1; n <= kMaxFactorial; ++n) t[n] = t[n - 1] + std::log(static_cast<long double>(n));
        return t;
    }();
    return table;
}

// Plain factorials stay finite in long double up to 1754!, far beyond the
// angular momenta handled here.
const std::vector<long double>& factorial_table() {
    static const std::vector<long double> table = [] {
        std::vector<long double> t(301);
        t[0] = 1.0L;
        for (int n = 1; n <= 300; ++n) t[n] = t[n - 1] * static_cast<long double>(n);
        return t;
    }();
    return table;
}

inline long double fact(int n) { return factorial_table()[n]; }

bool projection_valid(HalfInt j, HalfInt m) {
    return std::abs(m.twice) <= j.twice && ((j.twice + m.twice) & 1) == 0;
}

}  // namespace

long double log_factorial(int n) {
    if (n < 0) throw std::invalid_argument("log_factorial: negative argument");
    if (n > kMaxFactorial) throw std::invalid_argument("log_factorial: argument too large");
    return log_factorial_table()[n];
}

double clebsch_gordan(const CGKey& k) {
    const int tj1 = k.j1.twice, tm1 = k.m1.twice;
    const int tj2 = k.j2.twice, tm2 = k.m2.twice;
    const int tJ = k.J.twice, tM = k.M.twice;

    if (tj1 < 0 || tj2 < 0 || tJ < 0) return 0.0;
    if (tM != tm1 + tm2) return 0.0;
    if (!projection_valid(k.j1, k.m1) || !projection_valid(k.j2, k.m2) ||
        !projection_valid(k.J, k.M))
        return 0.0;
    if (tJ < std::abs(tj1 - tj2) || tJ > tj1 + tj2) return 0.0;
    if (((tj1 + tj2 + tJ) & 1) != 0) return 0.0;

    // Racah's single-sum expression, evaluated in log space.
    const int a1 = (tj1 + tj2 - tJ) / 2;   // j1 + j2 - J
    const int a2 = (tj1 - tj2 + tJ) / 2;   // j1 - j2 + J
    const int a3 = (-tj1 + tj2 + tJ) / 2;  // -j1 + j2 + J
    const int a4 = (tj1 + tj2 + tJ) / 2 + 1;

    const auto& lf = log_factorial_table();
    long double pref = std::log(static_cast<long double>(tJ + 1));  // log(2J+1)
    pref += lf[a1] + lf[a2] + lf[a3] - lf[a4];
    pref += lf[(tJ + tM) / 2] + lf[(tJ - tM) / 2];
    pref += lf[(tj1 - tm1) / 2] + lf[(tj1 + tm1) / 2];
    pref += lf[(tj2 - tm2) / 2] + lf[(tj2 + tm2) / 2];
    pref *= 0.5L;

    const int b1 = (tj1 - tm1) / 2;        // j1 - m1
    const int b2 = (tj2 + tm2) / 2;        // j2 + m2
    const int c1 = (tJ - tj2 + tm1) / 2;   // J - j2 + m1
    const int c2 = (tJ - tj1 - tm2) / 2;   // J - j1 - m2

    int kmin = std::max({0, -c1, -c2});
    int kmax = std::min({a1, b1, b2});
    if (kmin > kmax) return 0.0;

    long double sum = 0.0L;
    for (int kk = kmin; kk <= kmax; ++kk) {
        long double lg = lf[kk] + lf[a1 - kk] + lf[b1 - kk] + lf[b2 - kk] + lf[c1 + kk] + lf[c2 + kk];
        long double term = std::exp(pref - lg);
        sum += (kk & 1) ? -term : term;
    }
    return static_cast<double>(sum);
}

double clebsch_gordan(HalfInt j1, HalfInt m1, HalfInt j2, HalfInt m2, HalfInt J, HalfInt M) {
    return clebsch_gordan(CGKey{j1, m1, j2, m2, J, M});
}

CgBlock::CgBlock(HalfInt j1, HalfInt j2, HalfInt J) : twice_j1_(j1.twice), twice_j2_(j2.twice) {
    if (j1.twice < 0 || j2.twice < 0) throw std::invalid_argument("CgBlock: negative j");
    const int n1 = twice_j1_ + 1;
    const int n2 = twice_j2_ + 1;
    values_.assign(static_cast<size_t>(n1) * n2, 0.0);
    for (int i1 = 0; i1 < n1; ++i1) {
        int tm1 = 2 * i1 - twice_j1_;
        for (int i2 = 0; i2 < n2; ++i2) {
            int tm2 = 2 * i2 - twice_j2_;
            values_[static_cast<size_t>(i1) * n2 + i2] = clebsch_gordan(
                CGKey{j1, HalfInt{tm1}, j2, HalfInt{tm2}, J, HalfInt{tm1 + tm2}});
        }
    }
}

double CgBlock::coeff(HalfInt m1, HalfInt m2) const {
    if (std::abs(m1.twice) > twice_j1_ || std::abs(m2.twice) > twice_j2_) return 0.0;
    if (((m1.twice + twice_j1_) & 1) != 0 || ((m2.twice + twice_j2_) & 1) != 0) return 0.0;
    int i1 = (m1.twice + twice_j1_) / 2;
    int i2 = (m2.twice + twice_j2_) / 2;
    return values_[static_cast<size_t>(i1) * (twice_j2_ + 1) + i2];
}

const CgBlock& cg_block(HalfInt j1, HalfInt j2, HalfInt J) {
    static std::map<std::array<int, 3>, std::unique_ptr<const CgBlock>> cache;
    static std::mutex mtx;
    std::lock_guard<std::mutex> lock(mtx);
    auto key = std::array<int, 3>{j1.twice, j2.twice, J.twice};
    auto it = cache.find(key);
    if (it == cache.end())
        it = cache.emplace(key, std::make_unique<const CgBlock>(j1, j2, J)).first;
    return *it->second;
}

namespace {

// d^j_{mp,m}(beta) with caller-provided power tables of cos(beta/2), sin(beta/2).
long double small_d_core(int tj, int tmp, int tm, const std::vector<long double>& powc,
                         const std::vector<long double>& pows) {
    const int jpm = (tj + tm) / 2, jmm = (tj - tm) / 2;
    const int jpp = (tj + tmp) / 2, jmp = (tj - tmp) / 2;
    const int mu = (tmp - tm) / 2;  // mp - m

    long double pref = std::sqrt(fact(jpp) * fact(jmp) * fact(jpm) * fact(jmm));
    int smin = std::max(0, -mu);
    int smax = std::min(jpm, jmp);
    long double sum = 0.0L;
    for (int s = smin; s <= smax; ++s) {
        long double denom = fact(jpm - s) * fact(s) * fact(mu + s) * fact(jmp - s);
        long double term = (pref / denom) * powc[tj - mu - 2 * s] * pows[mu + 2 * s];
        sum += ((mu + s) & 1) ? -term : term;
    }
    return sum;
}

void check_projection(HalfInt j, HalfInt m, const char* what) {
    if (!projection_valid(j, m)) throw std::invalid_argument(std::string("invalid projection for ") + what);
}

}  // namespace

double wigner_small_d(HalfInt j, HalfInt mp, HalfInt m, double beta) {
    if (j.twice < 0) throw std::invalid_argument("wigner_small_d: negative j");
    check_projection(j, mp, "wigner_small_d");
    check_projection(j, m, "wigner_small_d");
    const int tj = j.twice;
    long double c = std::cos(0.5L * static_cast<long double>(beta));
    long double s = std::sin(0.5L * static_cast<long double>(beta));
    std::vector<long double> powc(tj + 1), pows(tj + 1);
    powc[0] = pows[0] = 1.0L;
    for (int i = 1; i <= tj; ++i) {
        powc[i] = powc[i - 1] * c;
        pows[i] = pows[i - 1] * s;
    }
    return static_cast<double>(small_d_core(tj, mp.twice, m.twice, powc, pows));
}

std::vector<double> wigner_small_d_matrix(HalfInt j, double beta) {
    if (j.twice < 0) throw std::invalid_argument("wigner_small_d_matrix: negative j");
    const int tj = j.twice;
    const int n = tj + 1;
    long double c = std::cos(0.5L * static_cast<long double>(beta));
    long double s = std::sin(0.5L * static_cast<long double>(beta));
    std::vector<long double> powc(tj + 1), pows(tj + 1);
    powc[0] = pows[0] = 1.0L;
    for (int i = 1; i <= tj; ++i) {
        powc[i] = powc[i - 1] * c;
        pows[i] = pows[i - 1] * s;
    }
    std::vector<double> out(static_cast<size_t>(n) * n);
    for (int ip = 0; ip < n; ++ip) {
        int tmp = 2 * ip - tj;
        for (int im = 0; im < n; ++im) {
            int tm = 2 * im - tj;
            out[static_cast<size_t>(ip) * n + im] =
                static_cast<double>(small_d_core(tj, tmp, tm, powc, pows));
        }
    }
    return out;
}

ZyzAngles euler_zyz(const Rotation& r) {
    Rotation q = r.normalized();
    // U = [[a, b], [-conj(b), conj(a)]] with a = w - iz, b = -y - ix.
    // Matching against e^{-i a Jz} e^{-i b Jy} e^{-i c Jz} gives
    //   a = cos(beta/2) e^{-i(alpha+gamma)/2},  b = -sin(beta/2) e^{-i(alpha-gamma)/2}
    // with beta/2 in [0, pi/2].  When |a| or |b| vanishes only one angle
    // combination is determined and atan2(0,0) = 0 picks a valid gauge.
    double absa = std::hypot(q.w, q.z);
    double absb = std::hypot(q.y, q.x);
    double arga = std::atan2(-q.z, q.w);
    double argb = std::atan2(-q.x, -q.y);
    ZyzAngles e;
    e.beta = 2.0 * std::atan2(absb, absa);
    e.alpha = M_PI - arga - argb;
    e.gamma = -M_PI - arga + argb;
    return e;
}

std::complex<double> wigner_D(HalfInt j, HalfInt mp, HalfInt m, const Rotation& r) {
    ZyzAngles e = euler_zyz(r);
    double d = wigner_small_d(j, mp, m, e.beta);
    return std::polar(d, -0.5 * mp.twice * e.alpha - 0.5 * m.twice * e.gamma);
}

std::vector<std::complex<double>> wigner_D_matrix(HalfInt j, const Rotation& r) {
    ZyzAngles e = euler_zyz(r);
    std::vector<double> d = wigner_small_d_matrix(j, e.beta);
    const int n = j.twice + 1;
    std::vector<std::complex<double>> phase_a(n), phase_g(n);
    for (int i = 0; i < n; ++i) {
        double mval = 0.5 * (2 * i - j.twice);
        phase_a[i] = std::polar(1.0, -mval * e.alpha);
        phase_g[i] = std::polar(1.0, -mval * e.gamma);
    }
    std::vector<std::complex<double>> out(static_cast<size_t>(n) * n);
    for (int ip = 0; ip < n; ++ip)
        for (int im = 0; im < n; ++im)
            out[static_cast<size_t>(ip) * n + im] = phase_a[ip] * d[static_cast<size_t>(ip) * n + im] * phase_g[im];
    return out;
}

}  // namespace spinent
