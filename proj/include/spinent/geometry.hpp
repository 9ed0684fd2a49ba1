#pragma once

#include <array>
#include <cmath>

namespace spinent {

struct Vec3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
    Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
    Vec3 operator-() const { return {-x, -y, -z}; }
    Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
    double dot(const Vec3& o) const { return x * o.x + y * o.y + z * o.z; }
    Vec3 cross(const Vec3& o) const {
        return {y * o.z - z * o.y, z * o.x - x * o.z, x * o.y - y * o.x};
    }
    double norm() const { return std::sqrt(dot(*this)); }
    Vec3 normalized() const {
        double n = norm();
        return n > 0.0 ? Vec3{x / n, y / n, z / n} : Vec3{0.0, 0.0, 0.0};
    }
};

/// Row-major 3x3 matrix, used for orthogonal maps acting on star positions.
struct Mat3 {
    std::array<double, 9> a{1, 0, 0, 0, 1, 0, 0, 0, 1};

    static Mat3 identity() { return Mat3{}; }

    double operator()(int r, int c) const { return a[3 * r + c]; }
    double& operator()(int r, int c) { return a[3 * r + c]; }

    Vec3 apply(const Vec3& v) const {
        return {a[0] * v.x + a[1] * v.y + a[2] * v.z,
                a[3] * v.x + a[4] * v.y + a[5] * v.z,
                a[6] * v.x + a[7] * v.y + a[8] * v.z};
    }

    Mat3 operator*(const Mat3& o) const {
        Mat3 r;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) {
                double s = 0.0;
                for (int k = 0; k < 3; ++k) s += (*this)(i, k) * o(k, j);
                r(i, j) = s;
            }
        return r;
    }

    Mat3 transposed() const {
        Mat3 r;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) r(i, j) = (*this)(j, i);
        return r;
    }

    Mat3 operator-() const {
        Mat3 r;
        for (int i = 0; i < 9; ++i) r.a[i] = -a[i];
        return r;
    }

    double det() const {
        return a[0] * (a[4] * a[8] - a[5] * a[7]) - a[1] * (a[3] * a[8] - a[5] * a[6]) +
               a[2] * (a[3] * a[7] - a[4] * a[6]);
    }
};

/// Unit quaternion w + xi + yj + zk representing an SU(2) element
/// U = w*I - i(x*sx + y*sy + z*sz); q and -q give the same SO(3) rotation
/// but distinct SU(2) elements, and both are kept meaningful throughout.
///
/// The sphere this library draws on is the one carrying coherent-state
/// labels and Majorana stars.  With the chart alpha = tan(theta/2) e^{-i phi}
/// that sphere is the z-mirror of the spin-expectation sphere, so the vector
/// action of U on star directions is the mirror conjugate of the textbook
/// quaternion matrix.  from_axis_angle and to_matrix absorb the mirror: the
/// axis handed in is the axis stars actually turn about, and to_matrix is
/// exactly how stars move under rotate().
struct Rotation {
    double w = 1.0;
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    static Rotation identity() { return {1.0, 0.0, 0.0, 0.0}; }

    /// SU(2) element whose star action is the right-handed rotation by
    /// `angle` about `axis`.
    static Rotation from_axis_angle(const Vec3& axis, double angle) {
        Vec3 u = axis.normalized();
        double h = 0.5 * angle;
        double s = std::sin(h);
        return {std::cos(h), -u.x * s, -u.y * s, u.z * s};
    }

    double norm() const { return std::sqrt(w * w + x * x + y * y + z * z); }

    Rotation normalized() const {
        double n = norm();
        return {w / n, x / n, y / n, z / n};
    }

    Rotation inverse() const { return {w, -x, -y, -z}; }

    /// Hamilton product; (a*b) acts as "apply b, then a".
    Rotation operator*(const Rotation& o) const {
        return {w * o.w - x * o.x - y * o.y - z * o.z,
                w * o.x + x * o.w + y * o.z - z * o.y,
                w * o.y - x * o.z + y * o.w + z * o.x,
                w * o.z + x * o.y - y * o.x + z * o.w};
    }

    /// Action on star directions: rotating a state through rotate() moves
    /// its coherent label and every Majorana star by exactly this matrix.
    /// (The mirrored component signs realize the label-sphere action; see
    /// the struct comment.)
    Mat3 to_matrix() const {
        Mat3 m;
        double X = -x, Y = -y;
        double ww = w * w, xx = X * X, yy = Y * Y, zz = z * z;
        m(0, 0) = ww + xx - yy - zz;
        m(0, 1) = 2.0 * (X * Y - w * z);
        m(0, 2) = 2.0 * (X * z + w * Y);
        m(1, 0) = 2.0 * (X * Y + w * z);
        m(1, 1) = ww - xx + yy - zz;
        m(1, 2) = 2.0 * (Y * z - w * X);
        m(2, 0) = 2.0 * (X * z - w * Y);
        m(2, 1) = 2.0 * (Y * z + w * X);
        m(2, 2) = ww - xx - yy + zz;
        return m;
    }
};

/// Quaternion lift of a proper rotation matrix (Shepperd's method), inverse
/// of Rotation::to_matrix; the returned sign is the one with nonnegative w.
inline Rotation rotation_from_matrix(const Mat3& m) {
    double tr = m(0, 0) + m(1, 1) + m(2, 2);
    Rotation q;
    if (tr > 0.0) {
        double s = std::sqrt(tr + 1.0) * 2.0;
        q = {0.25 * s, (m(2, 1) - m(1, 2)) / s, (m(0, 2) - m(2, 0)) / s, (m(1, 0) - m(0, 1)) / s};
    } else if (m(0, 0) > m(1, 1) && m(0, 0) > m(2, 2)) {
        double s = std::sqrt(1.0 + m(0, 0) - m(1, 1) - m(2, 2)) * 2.0;
        q = {(m(2, 1) - m(1, 2)) / s, 0.25 * s, (m(0, 1) + m(1, 0)) / s, (m(0, 2) + m(2, 0)) / s};
    } else if (m(1, 1) > m(2, 2)) {
        double s = std::sqrt(1.0 + m(1, 1) - m(0, 0) - m(2, 2)) * 2.0;
        q = {(m(0, 2) - m(2, 0)) / s, (m(0, 1) + m(1, 0)) / s, 0.25 * s, (m(1, 2) + m(2, 1)) / s};
    } else {
        double s = std::sqrt(1.0 + m(2, 2) - m(0, 0) - m(1, 1)) * 2.0;
        q = {(m(1, 0) - m(0, 1)) / s, (m(0, 2) + m(2, 0)) / s, (m(1, 2) + m(2, 1)) / s, 0.25 * s};
    }
    q = Rotation{q.w, -q.x, -q.y, q.z}.normalized();
    return q.w < 0.0 ? Rotation{-q.w, -q.x, -q.y, -q.z} : q;
}

}  // namespace spinent
