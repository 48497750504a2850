#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <string>

#include <Eigen/Dense>

#include "attctl/errors.hpp"

namespace attctl {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

/// Tolerance on ||R^T R - I||_F and |det R - 1| accepted by RotationMatrix.
inline constexpr double kRotationTol = 1e-9;
/// Below this angle exp/log switch to their Taylor expansions.
inline constexpr double kSmallAngle = 1e-6;

inline double ortho_error(const Mat3& m) {
    return (m.transpose() * m - Mat3::Identity()).norm();
}

/// An element of SO(3). The invariant is checked on construction; anything
/// farther out has to go through project_to_so3() explicitly.
class RotationMatrix {
public:
    RotationMatrix() : m_(Mat3::Identity()) {}

    explicit RotationMatrix(const Mat3& m) : m_(m) {
        if (!m_.allFinite()) throw NotNearRotation("rotation matrix has non-finite entries");
        const double oe = ortho_error(m_);
        const double det = m_.determinant();
        if (oe > kRotationTol || std::abs(det - 1.0) > kRotationTol) {
            throw NotNearRotation("matrix is not a rotation (||R^T R - I||_F = " +
                                  std::to_string(oe) + ", det = " + std::to_string(det) + ")");
        }
    }

    static RotationMatrix identity() { return {}; }

    const Mat3& matrix() const noexcept { return m_; }
    double operator()(int i, int j) const { return m_(i, j); }

    RotationMatrix transpose() const { return RotationMatrix(m_.transpose()); }
    double trace() const { return m_.trace(); }

    friend RotationMatrix operator*(const RotationMatrix& a, const RotationMatrix& b) {
        return RotationMatrix(a.m_ * b.m_);
    }
    friend Vec3 operator*(const RotationMatrix& a, const Vec3& v) { return a.m_ * v; }

private:
    Mat3 m_;
};

inline Mat3 hat(const Vec3& v) {
    Mat3 m;
    m << 0.0, -v.z(), v.y(),
         v.z(), 0.0, -v.x(),
         -v.y(), v.x(), 0.0;
    return m;
}

inline Vec3 vee(const Mat3& m, double tol = 1e-9) {
    if ((m + m.transpose()).norm() > tol) {
        throw NotSkewSymmetric("vee: matrix is not skew-symmetric");
    }
    // Average the redundant entries.
    return Vec3(0.5 * (m(2, 1) - m(1, 2)),
                0.5 * (m(0, 2) - m(2, 0)),
                0.5 * (m(1, 0) - m(0, 1)));
}

/// Rodrigues' formula.
inline RotationMatrix exp_so3(const Vec3& v) {
    const double th = v.norm();
    const double th2 = th * th;
    double a;  // sin(th)/th
    double b;  // (1 - cos(th))/th^2
    if (th < kSmallAngle) {
        a = 1.0 - th2 / 6.0;
        b = 0.5 - th2 / 24.0;
    } else {
        const double half = std::sin(0.5 * th);
        a = std::sin(th) / th;
        b = 2.0 * half * half / th2;
    }
    const Mat3 vh = hat(v);
    return RotationMatrix(Mat3::Identity() + a * vh + b * vh * vh);
}

/// Angle of the rotation, in [0, pi].
inline double rotation_angle(const RotationMatrix& r) {
    const double c = std::clamp(0.5 * (r.trace() - 1.0), -1.0, 1.0);
    return std::acos(c);
}

/// Inverse of exp_so3 with ||result|| <= pi. At exactly pi the axis sign is
/// chosen so that its largest-magnitude component is positive.
inline Vec3 log_so3(const RotationMatrix& r) {
    const Mat3& m = r.matrix();
    const Vec3 w(0.5 * (m(2, 1) - m(1, 2)), 0.5 * (m(0, 2) - m(2, 0)), 0.5 * (m(1, 0) - m(0, 1)));
    const double s = w.norm();                 // sin(theta)
    const double c = 0.5 * (m.trace() - 1.0);  // cos(theta)
    const double th = std::atan2(s, c);

    if (c >= 0.0) {
        if (th < kSmallAngle) return (1.0 + th * th / 6.0) * w;
        return (th / s) * w;
    }

    // Near pi the antisymmetric part vanishes; read the axis off s s^T instead.
    const Mat3 sst = (0.5 * (m + m.transpose()) - c * Mat3::Identity()) / (1.0 - c);
    int k = 0;
    sst.diagonal().maxCoeff(&k);
    Vec3 axis = sst.col(k) / std::sqrt(std::max(sst(k, k), 0.0));
    axis.normalize();

    const double proj = axis.dot(w);
    if (std::abs(proj) > 1e-15) {
        if (proj < 0.0) axis = -axis;
    } else {
        int j = 0;
        axis.cwiseAbs().maxCoeff(&j);
        if (axis(j) < 0.0) axis = -axis;
    }
    return th * axis;
}

/// Orthogonal polar factor of m by the iteration Q <- 3/2 Q - 1/2 Q Q^T Q.
inline RotationMatrix project_to_so3(const Mat3& m) {
    if (!m.allFinite()) throw NotNearRotation("project_to_so3: non-finite input");
    Mat3 q = m;
    for (int it = 0; it < 100 && ortho_error(q) > 1e-13; ++it) {
        q = 1.5 * q - 0.5 * q * q.transpose() * q;
        if (!q.allFinite()) break;
    }
    if (!q.allFinite() || ortho_error(q) > 1e-12 || q.determinant() < 0.0 || (m - q).norm() > 0.5) {
        throw NotNearRotation("project_to_so3: input is not within 0.5 of a rotation");
    }
    return RotationMatrix(q);
}

/// Deterministic rotation for property tests: uniform unit axis, angle
/// uniform on [0, pi).
inline RotationMatrix random_rotation(std::uint64_t seed) {
    std::mt19937_64 gen(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::uniform_real_distribution<double> uni(0.0, std::numbers::pi);
    Vec3 axis;
    do {
        axis = Vec3(normal(gen), normal(gen), normal(gen));
    } while (axis.norm() < 1e-8);
    axis.normalize();
    return exp_so3(uni(gen) * axis);
}

}  // namespace attctl
