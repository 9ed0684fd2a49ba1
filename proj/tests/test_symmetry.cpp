#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "spinent/majorana.hpp"
#include "spinent/states.hpp"
#include "spinent/symmetry.hpp"

using namespace spinent;

namespace {
constexpr double kPi = 3.14159265358979323846;

Vec3 direction(double theta, double phi) {
    return {std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi), std::cos(theta)};
}

Constellation from_points(std::vector<Vec3> pts) {
    Constellation c;
    c.twice_spin = static_cast<int>(pts.size());
    for (auto& p : pts) c.stars.push_back(p.normalized());
    return c;
}

Constellation tetrahedron() {
    return from_points({{1, 1, 1}, {1, -1, -1}, {-1, 1, -1}, {-1, -1, 1}});
}

Constellation octahedron() {
    return from_points({{1, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {0, -1, 0}, {0, 0, 1}, {0, 0, -1}});
}

Constellation cube() {
    std::vector<Vec3> pts;
    for (int sx : {-1, 1})
        for (int sy : {-1, 1})
            for (int sz : {-1, 1}) pts.push_back({double(sx), double(sy), double(sz)});
    return from_points(pts);
}

Constellation icosahedron() {
    const double g = (1.0 + std::sqrt(5.0)) / 2.0;
    std::vector<Vec3> pts;
    for (double s1 : {-1.0, 1.0})
        for (double s2 : {-1.0, 1.0}) {
            pts.push_back({0.0, s1, s2 * g});
            pts.push_back({s1, s2 * g, 0.0});
            pts.push_back({s2 * g, 0.0, s1});
        }
    return from_points(pts);
}

Constellation ring(int n, double theta, double offset = 0.0) {
    std::vector<Vec3> pts;
    for (int k = 0; k < n; ++k) pts.push_back(direction(theta, offset + 2 * kPi * k / n));
    return from_points(pts);
}

Constellation antiprism(double theta) {
    auto top = ring(4, theta);
    auto bottom = ring(4, kPi - theta, kPi / 4);
    top.stars.insert(top.stars.end(), bottom.stars.begin(), bottom.stars.end());
    top.twice_spin = 8;
    return top;
}

double max_match_dist(std::vector<Vec3> a, std::vector<Vec3> b) {
    REQUIRE(a.size() == b.size());
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

std::vector<Vec3> apply_all(const Mat3& m, const std::vector<Vec3>& pts) {
    std::vector<Vec3> out;
    for (const Vec3& p : pts) out.push_back(m.apply(p));
    return out;
}
}  // namespace

TEST_CASE("platonic point groups come back with full orders") {
    auto tet = detect_point_group(tetrahedron());
    CHECK_FALSE(tet.continuous);
    CHECK(tet.order == 24);
    CHECK(tet.proper_order == 12);

    auto oct = detect_point_group(octahedron());
    CHECK(oct.order == 48);
    CHECK(oct.proper_order == 24);

    auto cub = detect_point_group(cube());
    CHECK(cub.order == 48);
    CHECK(cub.proper_order == 24);

    auto ico = detect_point_group(icosahedron());
    CHECK(ico.order == 120);
    CHECK(ico.proper_order == 60);
}

TEST_CASE("rings, prisms, and antiprisms") {
    // Equatorial triangle: full dihedral symmetry with the horizontal mirror.
    auto tri = detect_point_group(ring(3, kPi / 2));
    CHECK(tri.order == 12);
    CHECK(tri.proper_order == 6);

    // Non-equatorial square ring: pyramid symmetry, no horizontal mirror.
    auto pyr = detect_point_group(ring(4, 1.0));
    CHECK(pyr.order == 8);
    CHECK(pyr.proper_order == 4);

    // Square antiprism.
    auto anti = detect_point_group(antiprism(1.0));
    CHECK(anti.order == 16);
    CHECK(anti.proper_order == 8);

    // Non-equatorial triangle ring: the 3-fold axis must still be found.
    auto cone3 = detect_point_group(ring(3, 0.8));
    CHECK(cone3.order == 6);
    CHECK(cone3.proper_order == 3);
}

TEST_CASE("two non-antipodal stars have C2v symmetry") {
    auto rep = detect_point_group(from_points({{0, 0, 1}, {1, 0, 0}}));
    CHECK_FALSE(rep.continuous);
    CHECK(rep.order == 4);
    CHECK(rep.proper_order == 2);
}

TEST_CASE("collinear configurations report the continuous axis") {
    // All stars on one point: only the identity and the axial mirror remain
    // besides the axial continuum.
    auto single = detect_point_group(constellation(make_coherent(5, 0.7, 1.3)));
    CHECK(single.continuous);
    CHECK(single.proper_order == 1);
    CHECK(single.order == 2);

    // Antipodal pair with equal weights: the perpendicular flip joins in.
    auto pair = detect_point_group(constellation(make_basis_state(2, HalfInt{0})));
    CHECK(pair.continuous);
    CHECK(pair.proper_order == 2);
    CHECK(pair.order == 4);

    // Unequal pole multiplicities forbid the flip.
    auto lopsided = detect_point_group(constellation(make_basis_state(3, HalfInt{1})));
    CHECK(lopsided.continuous);
    CHECK(lopsided.proper_order == 1);
    CHECK(lopsided.order == 2);
}

TEST_CASE("reported elements form a closed group of isometries") {
    auto c = octahedron();
    auto rep = detect_point_group(c);
    REQUIRE(static_cast<int>(rep.elements.size()) == rep.order);

    int proper = 0;
    for (const Mat3& m : rep.elements) {
        // Orthogonality and multiset invariance.
        Mat3 mtm = m.transposed() * m;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                CHECK(std::abs(mtm(i, j) - (i == j ? 1.0 : 0.0)) < 1e-9);
        CHECK(max_match_dist(apply_all(m, c.stars), c.stars) < 1e-5);
        if (m.det() > 0) ++proper;
    }
    CHECK(proper == rep.proper_order);
    CHECK(rep.order % rep.proper_order == 0);

    // Identity is present and products stay inside the set.
    auto dist = [](const Mat3& a, const Mat3& b) {
        double d = 0.0;
        for (int k = 0; k < 9; ++k) d = std::max(d, std::abs(a.a[k] - b.a[k]));
        return d;
    };
    auto contains = [&](const Mat3& m) {
        for (const Mat3& e : rep.elements)
            if (dist(e, m) < 1e-6) return true;
        return false;
    };
    CHECK(contains(Mat3::identity()));
    std::mt19937_64 rng(61);
    std::uniform_int_distribution<size_t> pick(0, rep.elements.size() - 1);
    for (int k = 0; k < 60; ++k)
        CHECK(contains(rep.elements[pick(rng)] * rep.elements[pick(rng)]));

    // Generators are a subset that maps the multiset to itself too.
    CHECK_FALSE(rep.generators.empty());
    for (const Mat3& g : rep.generators)
        CHECK(max_match_dist(apply_all(g, c.stars), c.stars) < 1e-5);
}

TEST_CASE("detection survives coordinate noise at matching tolerance") {
    std::mt19937_64 rng(62);
    std::normal_distribution<double> gauss(0.0, 1e-7);
    auto c = tetrahedron();
    for (auto& star : c.stars) {
        star = (star + Vec3{gauss(rng), gauss(rng), gauss(rng)}).normalized();
    }
    auto rep = detect_point_group(c, 1e-5);
    CHECK(rep.order == 24);
}

TEST_CASE("tolerance argument is validated") {
    CHECK_THROWS(detect_point_group(tetrahedron(), 0.0));
    CHECK_THROWS(detect_point_group(tetrahedron(), 0.5));
}

TEST_CASE("match_constellations recovers a hidden rotation") {
    std::mt19937_64 rng(63);
    auto a = tetrahedron();
    for (int trial = 0; trial < 5; ++trial) {
        auto r = random_haar_rotation(rng);
        Constellation b = a;
        b.stars = apply_all(r.to_matrix(), a.stars);
        auto found = match_constellations(a, b);
        REQUIRE(found.has_value());
        CHECK(max_match_dist(apply_all(found->to_matrix(), a.stars), b.stars) < 1e-6);
    }
}

TEST_CASE("match_constellations distinguishes genuinely different shapes") {
    CHECK_FALSE(match_constellations(octahedron(), ring(6, 1.1)).has_value());
    auto skew = from_points({{0, 0, 1}, {1, 0, 0}, {0.3, 0.8, 0.52}, {-0.7, 0.1, 0.7}});
    auto squished = from_points({{0, 0, 1}, {1, 0, 0}, {0.3, 0.8, 0.52}, {-0.7, 0.1, 0.69}});
    CHECK_FALSE(match_constellations(skew, squished, 1e-4).has_value());
}

TEST_CASE("match_constellations handles collinear clusters") {
    auto a = constellation(make_coherent(4, 0.9, 0.4));
    std::mt19937_64 rng(64);
    auto r = random_haar_rotation(rng);
    Constellation b = a;
    b.stars = apply_all(r.to_matrix(), a.stars);
    auto found = match_constellations(a, b);
    REQUIRE(found.has_value());
    CHECK(max_match_dist(apply_all(found->to_matrix(), a.stars), b.stars) < 1e-6);
}

TEST_CASE("a state and its rotation share one constellation shape") {
    std::mt19937_64 rng(65);
    auto s = random_state(7, rng);
    auto r = random_haar_rotation(rng);
    auto a = constellation(s);
    auto b = constellation(rotate(s, r));
    auto found = match_constellations(a, b, 1e-5);
    REQUIRE(found.has_value());
    CHECK(max_match_dist(apply_all(found->to_matrix(), a.stars), b.stars) < 1e-5);
}
