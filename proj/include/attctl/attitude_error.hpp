#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>

#include "attctl/so3.hpp"

namespace attctl {

/// e_R is only evaluated while Psi < 2 - kBoundaryEps. Since 2 - Psi equals
/// 2 cos(theta/2), this excludes error angles within about 1e-9 rad of pi.
inline constexpr double kBoundaryEps = 1e-9;

struct AttitudeError {
    double psi = 0.0;
    Vec3 e_R = Vec3::Zero();
    Vec3 e_Omega = Vec3::Zero();
};

namespace detail {

// sqrt(1 + tr(Rd^T R)) = 2 cos(theta/2). Past theta = 2pi/3 the sum 1 + tr cancels
// badly, so there it is recovered as sin(theta) / sin(theta/2) from the skew part.
inline double trace_root(const Mat3& q) {
    const double tr = q.trace();
    if (tr >= 0.0) return std::sqrt(1.0 + tr);
    const Vec3 a(q(2, 1) - q(1, 2), q(0, 2) - q(2, 0), q(1, 0) - q(0, 1));
    const double sin_half = std::sqrt(std::clamp((3.0 - tr) / 4.0, 0.0, 1.0));
    return std::min(0.5 * a.norm() / sin_half, 2.0);
}

inline double trace_root(const RotationMatrix& R, const RotationMatrix& Rd) {
    return trace_root(Mat3(Rd.matrix().transpose() * R.matrix()));
}

inline void check_inside_boundary(double root) {
    if (root <= kBoundaryEps) {
        throw AtErrorBoundary("attitude error is at the antipodal boundary (Psi -> 2)");
    }
}

}  // namespace detail

/// Psi(R, Rd) = 2 - sqrt(1 + tr(Rd^T R)), in [0, 2].
inline double psi(const RotationMatrix& R, const RotationMatrix& Rd) {
    return 2.0 - detail::trace_root(R, Rd);
}

/// Attitude error vector; ||e_R|| = sin(theta/2).
inline Vec3 e_R(const RotationMatrix& R, const RotationMatrix& Rd) {
    const Mat3 q = Rd.matrix().transpose() * R.matrix();
    const double root = detail::trace_root(q);
    detail::check_inside_boundary(root);
    return vee(q - q.transpose()) / (2.0 * root);
}

inline Vec3 e_Omega(const RotationMatrix& R, const Vec3& Omega, const RotationMatrix& Rd,
                    const Vec3& Omega_d) {
    return Omega - R.matrix().transpose() * (Rd.matrix() * Omega_d);
}

inline AttitudeError attitude_error(const RotationMatrix& R, const Vec3& Omega,
                                    const RotationMatrix& Rd, const Vec3& Omega_d) {
    return {psi(R, Rd), e_R(R, Rd), e_Omega(R, Omega, Rd, Omega_d)};
}

/// E(R, Rd) with d/dt e_R = E e_Omega. Its 2-norm is exactly 1/2.
inline Mat3 error_jacobian(const RotationMatrix& R, const RotationMatrix& Rd) {
    const Mat3 q = Rd.matrix().transpose() * R.matrix();
    const double root = detail::trace_root(q);
    detail::check_inside_boundary(root);
    const Vec3 er = vee(q - q.transpose()) / (2.0 * root);
    const Mat3 qt = q.transpose();  // R^T Rd
    return (qt.trace() * Mat3::Identity() - qt + 2.0 * er * er.transpose()) / (2.0 * root);
}

// Baseline error function 1/2 tr(I - Rd^T R) and its error vector.

inline double psi_baseline(const RotationMatrix& R, const RotationMatrix& Rd) {
    return 0.5 * (3.0 - (Rd.matrix().transpose() * R.matrix()).trace());
}

/// 1/2 (Rd^T R - R^T Rd)^vee, so ||result|| = sin(theta). Vanishes at theta = pi.
inline Vec3 e_R_baseline(const RotationMatrix& R, const RotationMatrix& Rd) {
    const Mat3 q = Rd.matrix().transpose() * R.matrix();
    return 0.5 * vee(q - q.transpose());
}

}  // namespace attctl
