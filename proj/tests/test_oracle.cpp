#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>
#include <stdexcept>

#include "spinent/multipole.hpp"
#include "spinent/oracle.hpp"
#include "spinent/states.hpp"

using namespace spinent;
using std::complex;

TEST_CASE("input validation") {
    auto s = make_basis_state(2, HalfInt{0});
    CHECK_THROWS_AS(mc_average_entanglement(s, 10, 1), std::invalid_argument);
    CHECK_THROWS_AS(haar_moment_check(1, 0, 1, 0, 10, 1), std::invalid_argument);
    CHECK_THROWS_AS(haar_moment_check(1, 2, 1, 0, 5000, 1), std::invalid_argument);
    std::mt19937_64 rng(1);
    CHECK_THROWS_AS(dense_multipoles(random_state(22, rng)), std::invalid_argument);
}

TEST_CASE("monte carlo estimates are reproducible and stderr-consistent") {
    auto s = make_basis_state(2, HalfInt{0});
    auto a = mc_average_entanglement(s, 5000, 42);
    auto b = mc_average_entanglement(s, 5000, 42);
    CHECK(a.mean == b.mean);
    CHECK(a.std_error == b.std_error);
    CHECK(a.n_samples == 5000);

    // Quadrupling the sample count roughly halves the error bar.
    auto c = mc_average_entanglement(s, 20000, 42);
    CHECK(c.std_error < a.std_error);
    CHECK(c.std_error > 0.25 * a.std_error);
}

TEST_CASE("monte carlo reproduces closed-form averages") {
    // Spin-1/2: every state averages to 1/3.
    std::mt19937_64 rng(81);
    auto h = mc_average_entanglement(random_state(1, rng), 4000, 7);
    CHECK(std::abs(h.mean - 1.0 / 3.0) < 4 * h.std_error + 1e-12);

    // |1,0>: 8/15.
    auto mid = mc_average_entanglement(make_basis_state(2, HalfInt{0}), 20000, 11);
    CHECK(std::abs(mid.mean - 8.0 / 15.0) < 4 * mid.std_error);

    // Coherent spin-1: 7/15 from the closed form.
    auto coh = mc_average_entanglement(make_coherent(2, 0.9, 2.2), 20000, 13);
    CHECK(std::abs(coh.mean - coherent_average_value(2)) < 4 * coh.std_error);

    // A random spin-5/2 state against the multipole formula.
    auto s = random_state(5, rng);
    auto est = mc_average_entanglement(s, 40000, 17);
    CHECK(std::abs(est.mean - averaged_entanglement(s)) < 4 * est.std_error);
    CHECK(est.std_error < 2e-3);
}

TEST_CASE("haar moments match the orthogonality relations") {
    // Diagonal: 1/(2K+1).
    auto diag = haar_moment_check(1, 0, 1, 0, 40000, 23);
    CHECK(std::abs(diag.mean.real() - 1.0 / 3.0) < 4 * diag.std_error);
    CHECK(std::abs(diag.mean.imag()) < 4 * diag.std_error);

    auto diag2 = haar_moment_check(2, 1, 2, 1, 40000, 29);
    CHECK(std::abs(diag2.mean.real() - 1.0 / 5.0) < 4 * diag2.std_error);

    // Off-diagonal combinations vanish.
    auto offk = haar_moment_check(1, 0, 2, 0, 40000, 31);
    CHECK(std::abs(offk.mean) < 4 * offk.std_error);
    auto offq = haar_moment_check(2, 1, 2, -1, 40000, 37);
    CHECK(std::abs(offq.mean) < 4 * offq.std_error);
}

TEST_CASE("dense tensor operators are orthonormal") {
    for (int ts : {1, 2, 5, 10}) CHECK(tensor_orthonormality_error(ts) < 1e-10);
}

TEST_CASE("dense and recurrence multipoles agree") {
    std::mt19937_64 rng(82);
    for (int ts = 1; ts <= 12; ++ts) {
        auto s = random_state(ts, rng);
        auto fast = multipoles(s);
        auto slow = dense_multipoles(s);
        for (int K = 0; K <= ts; ++K)
            for (int q = -K; q <= K; ++q)
                CHECK(std::abs(fast.rho(K, q) - slow.rho(K, q)) < 1e-10);
    }
}

TEST_CASE("dense monopole is the normalization constant") {
    std::mt19937_64 rng(83);
    auto s = random_state(6, rng);
    CHECK(std::abs(dense_multipoles(s).rho(0, 0) - 1.0 / std::sqrt(7.0)) < 1e-12);
}
