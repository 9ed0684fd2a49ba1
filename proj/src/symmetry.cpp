#include "spinent/symmetry.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>

namespace spinent {

namespace {

double frobenius_distance(const Mat3& a, const Mat3& b) {
    double s = 0.0;
    for (int i = 0; i < 9; ++i) {
        double d = a.a[i] - b.a[i];
        s += d * d;
    }
    return std::sqrt(s);
}

Mat3 invert(const Mat3& m) {
    double det = m.det();
    if (std::abs(det) < 1e-300) throw std::runtime_error("singular matrix");
    Mat3 r;
    r(0, 0) = (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1)) / det;
    r(0, 1) = (m(0, 2) * m(2, 1) - m(0, 1) * m(2, 2)) / det;
    r(0, 2) = (m(0, 1) * m(1, 2) - m(0, 2) * m(1, 1)) / det;
    r(1, 0) = (m(1, 2) * m(2, 0) - m(1, 0) * m(2, 2)) / det;
    r(1, 1) = (m(0, 0) * m(2, 2) - m(0, 2) * m(2, 0)) / det;
    r(1, 2) = (m(0, 2) * m(1, 0) - m(0, 0) * m(1, 2)) / det;
    r(2, 0) = (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0)) / det;
    r(2, 1) = (m(0, 1) * m(2, 0) - m(0, 0) * m(2, 1)) / det;
    r(2, 2) = (m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0)) / det;
    return r;
}

/// Orthogonal polar factor by Higham's inverse-transpose averaging.
Mat3 polar_factor(Mat3 x) {
    for (int it = 0; it < 60; ++it) {
        Mat3 inv_t = invert(x).transposed();
        Mat3 next;
        for (int i = 0; i < 9; ++i) next.a[i] = 0.5 * (x.a[i] + inv_t.a[i]);
        double delta = frobenius_distance(next, x);
        x = next;
        if (delta < 1e-15) break;
    }
    return x;
}

/// Eigen-decomposition of a symmetric 3x3 by cyclic Jacobi sweeps.
/// Returns eigenvalues ascending with matching columns in vecs.
void symmetric_eigen(Mat3 m, std::array<double, 3>& vals, Mat3& vecs) {
    Mat3 v = Mat3::identity();
    for (int sweep = 0; sweep < 50; ++sweep) {
        double off = std::abs(m(0, 1)) + std::abs(m(0, 2)) + std::abs(m(1, 2));
        if (off < 1e-15) break;
        for (int p = 0; p < 2; ++p)
            for (int q = p + 1; q < 3; ++q) {
                if (std::abs(m(p, q)) < 1e-300) continue;
                double theta = (m(q, q) - m(p, p)) / (2.0 * m(p, q));
                double t = (theta >= 0 ? 1.0 : -1.0) /
                           (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                double c = 1.0 / std::sqrt(t * t + 1.0);
                double s = t * c;
                Mat3 g = Mat3::identity();
                g(p, p) = c;
                g(q, q) = c;
                g(p, q) = s;
                g(q, p) = -s;
                m = g.transposed() * m * g;
                v = v * g;
            }
    }
    std::array<int, 3> idx{0, 1, 2};
    std::sort(idx.begin(), idx.end(), [&](int a, int b) { return m(a, a) < m(b, b); });
    Mat3 sorted;
    for (int k = 0; k < 3; ++k) {
        vals[k] = m(idx[k], idx[k]);
        for (int r = 0; r < 3; ++r) sorted(r, k) = v(r, idx[k]);
    }
    vecs = sorted;
}

/// Perfect matching in the bipartite graph of (image star, target star)
/// pairs closer than tol; fills perm with the assignment when successful.
bool multiset_assignment(const std::vector<Vec3>& image, const std::vector<Vec3>& target,
                         double tol, std::vector<int>* perm) {
    const int n = static_cast<int>(image.size());
    std::vector<std::vector<int>> adj(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if ((image[i] - target[j]).norm() <= tol) adj[i].push_back(j);
    std::vector<int> match_img(n, -1), match_tgt(n, -1);
    std::vector<char> used;
    std::function<bool(int)> augment = [&](int i) -> bool {
        for (int j : adj[i]) {
            if (used[j]) continue;
            used[j] = 1;
            if (match_tgt[j] == -1 || augment(match_tgt[j])) {
                match_img[i] = j;
                match_tgt[j] = i;
                return true;
            }
        }
        return false;
    };
    for (int i = 0; i < n; ++i) {
        used.assign(n, 0);
        if (!augment(i)) return false;
    }
    if (perm) *perm = match_img;
    return true;
}

struct StarSet {
    std::vector<Vec3> stars;
    bool planar = false;
    Vec3 plane_normal;
};

bool op_matches(const Mat3& op, const StarSet& ss, double tol, std::vector<int>* perm) {
    const int n = static_cast<int>(ss.stars.size());
    // Cheap probe: every image must have some neighbor before running the
    // full assignment.
    int probes = std::min(n, 3);
    for (int i = 0; i < probes; ++i) {
        Vec3 im = op.apply(ss.stars[i]);
        double best = 1e9;
        for (const auto& t : ss.stars) best = std::min(best, (im - t).norm());
        if (best > tol) return false;
    }
    std::vector<Vec3> image(n);
    for (int i = 0; i < n; ++i) image[i] = op.apply(ss.stars[i]);
    return multiset_assignment(image, ss.stars, tol, perm);
}

/// Least-squares orthogonal fit to the permutation action, keeping the
/// original determinant sign.  Regularizes with the plane normal for
/// planar constellations, where the star correlation matrix is singular.
Mat3 procrustes_fit(const Mat3& op, const StarSet& ss, const std::vector<int>& perm) {
    Mat3 h;
    h.a.fill(0.0);
    const int n = static_cast<int>(ss.stars.size());
    for (int i = 0; i < n; ++i) {
        const Vec3& src = ss.stars[i];
        const Vec3& dst = ss.stars[perm[i]];
        h(0, 0) += dst.x * src.x;
        h(0, 1) += dst.x * src.y;
        h(0, 2) += dst.x * src.z;
        h(1, 0) += dst.y * src.x;
        h(1, 1) += dst.y * src.y;
        h(1, 2) += dst.y * src.z;
        h(2, 0) += dst.z * src.x;
        h(2, 1) += dst.z * src.y;
        h(2, 2) += dst.z * src.z;
    }
    if (ss.planar) {
        const Vec3& nrm = ss.plane_normal;
        Vec3 mapped = op.apply(nrm);
        double sign = mapped.dot(nrm) >= 0.0 ? 1.0 : -1.0;
        double w = static_cast<double>(n);
        h(0, 0) += sign * w * nrm.x * nrm.x;
        h(0, 1) += sign * w * nrm.x * nrm.y;
        h(0, 2) += sign * w * nrm.x * nrm.z;
        h(1, 0) += sign * w * nrm.y * nrm.x;
        h(1, 1) += sign * w * nrm.y * nrm.y;
        h(1, 2) += sign * w * nrm.y * nrm.z;
        h(2, 0) += sign * w * nrm.z * nrm.x;
        h(2, 1) += sign * w * nrm.z * nrm.y;
        h(2, 2) += sign * w * nrm.z * nrm.z;
    }
    if (std::abs(h.det()) < 1e-10) return op;
    return polar_factor(h);
}

Vec3 canonical_axis(Vec3 u) {
    double ax = std::abs(u.x), ay = std::abs(u.y), az = std::abs(u.z);
    double lead = (az >= ax && az >= ay) ? u.z : (ay >= ax ? u.y : u.x);
    return lead < 0.0 ? -u : u;
}

Mat3 reflection_through_plane(const Vec3& normal) {
    Mat3 m = Mat3::identity();
    Vec3 u = normal.normalized();
    m(0, 0) -= 2.0 * u.x * u.x;
    m(0, 1) -= 2.0 * u.x * u.y;
    m(0, 2) -= 2.0 * u.x * u.z;
    m(1, 0) -= 2.0 * u.y * u.x;
    m(1, 1) -= 2.0 * u.y * u.y;
    m(1, 2) -= 2.0 * u.y * u.z;
    m(2, 0) -= 2.0 * u.z * u.x;
    m(2, 1) -= 2.0 * u.z * u.y;
    m(2, 2) -= 2.0 * u.z * u.z;
    return m;
}

Vec3 any_perpendicular(const Vec3& u) {
    Vec3 trial = std::abs(u.z) < 0.9 ? Vec3{0, 0, 1} : Vec3{1, 0, 0};
    return u.cross(trial).normalized();
}

constexpr int kMaxElements = 720;

}  // namespace

PointGroupReport detect_point_group(const Constellation& c, double tol) {
    if (!(tol > 0.0) || tol >= 0.1) throw std::invalid_argument("detect_point_group: tol outside (0, 0.1)");
    if (c.stars.empty()) throw std::invalid_argument("detect_point_group: empty constellation");

    PointGroupReport rep;
    std::vector<Vec3> stars;
    stars.reserve(c.stars.size());
    for (const auto& s : c.stars) stars.push_back(s.normalized());

    // Collinear configurations have a continuous axial group; report the
    // finite part only.
    Vec3 axis = stars.front();
    bool collinear = true;
    int along = 0;
    for (const auto& s : stars) {
        double dplus = (s - axis).norm(), dminus = (s + axis).norm();
        if (std::min(dplus, dminus) > tol) {
            collinear = false;
            break;
        }
        if (dplus <= dminus) ++along;
    }
    if (collinear) {
        rep.continuous = true;
        int opposite = static_cast<int>(stars.size()) - along;
        bool exchangeable = (along == opposite);
        Mat3 sigma_v = reflection_through_plane(any_perpendicular(axis));
        rep.generators.push_back(sigma_v);
        rep.elements = {Mat3::identity(), sigma_v};
        rep.proper_order = 1;
        if (exchangeable) {
            Mat3 flip = Rotation::from_axis_angle(any_perpendicular(axis), M_PI).to_matrix();
            rep.generators.push_back(flip);
            rep.elements.push_back(flip);
            rep.elements.push_back(flip * sigma_v);
            rep.proper_order = 2;
        }
        rep.order = 2 * rep.proper_order;
        return rep;
    }

    StarSet ss;
    ss.stars = stars;
    {
        Mat3 cov;
        cov.a.fill(0.0);
        for (const auto& s : stars) {
            cov(0, 0) += s.x * s.x;
            cov(0, 1) += s.x * s.y;
            cov(0, 2) += s.x * s.z;
            cov(1, 1) += s.y * s.y;
            cov(1, 2) += s.y * s.z;
            cov(2, 2) += s.z * s.z;
        }
        cov(1, 0) = cov(0, 1);
        cov(2, 0) = cov(0, 2);
        cov(2, 1) = cov(1, 2);
        std::array<double, 3> vals;
        Mat3 vecs;
        symmetric_eigen(cov, vals, vecs);
        if (vals[0] < 1e-6 * static_cast<double>(stars.size())) {
            ss.planar = true;
            ss.plane_normal = Vec3{vecs(0, 0), vecs(1, 0), vecs(2, 0)}.normalized();
        }
    }

    const int n = static_cast<int>(stars.size());
    std::vector<Vec3> axes;
    for (const auto& s : stars) axes.push_back(canonical_axis(s));
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            Vec3 sum = stars[i] + stars[j];
            if (sum.norm() > 1e-8) axes.push_back(canonical_axis(sum.normalized()));
            // Difference directions are the normals of planes swapping a pair,
            // reached below as -C2; without them groups like C3v lose their
            // vertical mirrors.
            Vec3 dif = stars[i] - stars[j];
            if (dif.norm() > 1e-8) axes.push_back(canonical_axis(dif.normalized()));
            Vec3 crs = stars[i].cross(stars[j]);
            if (crs.norm() > 1e-8) axes.push_back(canonical_axis(crs.normalized()));
        }
    if (n <= 24)
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j)
                for (int k = j + 1; k < n; ++k) {
                    Vec3 sum = stars[i] + stars[j] + stars[k];
                    if (sum.norm() > 1e-8) axes.push_back(canonical_axis(sum.normalized()));
                }
    std::vector<Vec3> unique_axes;
    for (const auto& u : axes) {
        bool dup = false;
        for (const auto& v : unique_axes)
            if ((u - v).norm() < 1e-7) {
                dup = true;
                break;
            }
        if (!dup) unique_axes.push_back(u);
    }

    std::vector<Mat3> accepted;
    std::vector<std::vector<int>> perms;
    auto try_op = [&](const Mat3& op) {
        std::vector<int> perm;
        if (!op_matches(op, ss, tol, &perm)) return;
        Mat3 fitted = procrustes_fit(op, ss, perm);
        for (const auto& e : accepted)
            if (frobenius_distance(e, fitted) < 1e-5) return;
        accepted.push_back(fitted);
        perms.push_back(std::move(perm));
    };

    Mat3 inversion = -Mat3::identity();
    try_op(inversion);
    const int max_fold = c.twice_spin + 2;
    for (const auto& u : unique_axes)
        for (int fold = 2; fold <= std::max(2, max_fold); ++fold) {
            Mat3 r = Rotation::from_axis_angle(u, 2.0 * M_PI / fold).to_matrix();
            try_op(r);
            try_op(-r);
        }

    // Close under composition; products of accepted operations are fitted
    // against their own star permutation before deduplication.
    std::vector<Mat3> elements{Mat3::identity()};
    for (const auto& g : accepted) elements.push_back(g);
    double dedup = std::max(1e-6, 5.0 * tol);
    bool grew = true;
    while (grew && static_cast<int>(elements.size()) <= kMaxElements) {
        grew = false;
        const size_t sz = elements.size();
        for (size_t i = 1; i < sz; ++i) {
            for (size_t j = 1; j < sz; ++j) {
                if (static_cast<int>(elements.size()) > kMaxElements) break;
                Mat3 prod = elements[i] * elements[j];
                bool known = false;
                for (const auto& e : elements)
                    if (frobenius_distance(e, prod) < dedup) {
                        known = true;
                        break;
                    }
                if (known) continue;
                std::vector<int> perm;
                if (!op_matches(prod, ss, std::min(0.099, 4.0 * tol), &perm)) continue;
                elements.push_back(procrustes_fit(prod, ss, perm));
                grew = true;
            }
        }
    }

    rep.elements = elements;
    rep.order = static_cast<int>(elements.size());
    rep.proper_order = 0;
    for (const auto& e : elements)
        if (e.det() > 0.0) ++rep.proper_order;

    // Greedy generating set: add elements that enlarge the generated subgroup.
    std::vector<Mat3> gens;
    std::vector<Mat3> span{Mat3::identity()};
    auto contains = [&](const std::vector<Mat3>& set, const Mat3& m) {
        for (const auto& e : set)
            if (frobenius_distance(e, m) < dedup) return true;
        return false;
    };
    for (const auto& e : elements) {
        if (contains(span, e)) continue;
        gens.push_back(e);
        bool expanded = true;
        span.push_back(e);
        while (expanded) {
            expanded = false;
            size_t sz = span.size();
            for (size_t i = 0; i < sz; ++i)
                for (size_t j = 0; j < sz; ++j) {
                    Mat3 prod = span[i] * span[j];
                    if (!contains(span, prod)) {
                        span.push_back(prod);
                        expanded = true;
                    }
                }
        }
        if (span.size() >= elements.size()) break;
    }
    rep.generators = gens;
    return rep;
}

std::optional<Rotation> match_constellations(const Constellation& a, const Constellation& b,
                                             double tol) {
    if (a.twice_spin != b.twice_spin) throw std::invalid_argument("match_constellations: spin mismatch");
    if (a.stars.size() != b.stars.size()) return std::nullopt;
    if (a.stars.empty()) return Rotation::identity();

    std::vector<Vec3> as, bs;
    for (const auto& s : a.stars) as.push_back(s.normalized());
    for (const auto& s : b.stars) bs.push_back(s.normalized());
    const int n = static_cast<int>(as.size());

    auto test = [&](const Rotation& r) -> bool {
        Mat3 m = r.to_matrix();
        std::vector<Vec3> image(n);
        for (int i = 0; i < n; ++i) image[i] = m.apply(as[i]);
        return multiset_assignment(image, bs, tol, nullptr);
    };

    // Reference frame in a: most separated pair of directions.
    int ref2 = -1;
    double best_sep = 0.0;
    for (int i = 1; i < n; ++i) {
        double sep = as[0].cross(as[i]).norm();
        if (sep > best_sep) {
            best_sep = sep;
            ref2 = i;
        }
    }

    if (ref2 < 0 || best_sep < 1e-8) {
        // Collinear source: align the axis both ways.
        for (const Vec3& target : {bs[0], -bs[0]}) {
            Vec3 u = as[0], v = target;
            Vec3 ax = u.cross(v);
            Rotation r;
            if (ax.norm() < 1e-12)
                r = u.dot(v) > 0 ? Rotation::identity()
                                 : Rotation::from_axis_angle(any_perpendicular(u), M_PI);
            else
                r = Rotation::from_axis_angle(ax, std::atan2(ax.norm(), u.dot(v)));
            if (test(r)) return r;
        }
        return std::nullopt;
    }

    auto frame = [](const Vec3& e1raw, const Vec3& e2raw) {
        Vec3 e1 = e1raw.normalized();
        Vec3 e2 = (e2raw - e1 * e2raw.dot(e1)).normalized();
        Vec3 e3 = e1.cross(e2);
        Mat3 f;
        f(0, 0) = e1.x;
        f(1, 0) = e1.y;
        f(2, 0) = e1.z;
        f(0, 1) = e2.x;
        f(1, 1) = e2.y;
        f(2, 1) = e2.z;
        f(0, 2) = e3.x;
        f(1, 2) = e3.y;
        f(2, 2) = e3.z;
        return f;
    };

    double target_dot = as[0].dot(as[ref2]);
    Mat3 fa = frame(as[0], as[ref2]);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            if (i == j) continue;
            if (std::abs(bs[i].dot(bs[j]) - target_dot) > 2.0 * tol + 1e-9) continue;
            if (bs[i].cross(bs[j]).norm() < 1e-8) continue;
            Mat3 rb = frame(bs[i], bs[j]) * fa.transposed();
            Rotation r = rotation_from_matrix(rb);
            if (test(r)) return r;
        }
    return std::nullopt;
}

}  // namespace spinent
