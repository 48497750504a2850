#pragma once

#include <Eigen/Eigenvalues>

#include "attctl/so3.hpp"

namespace attctl {

/// Body-frame inertia (kg m^2). Symmetric positive definite; the inverse and
/// extreme eigenvalues are computed once at construction.
class InertiaMatrix {
public:
    explicit InertiaMatrix(const Mat3& J) : J_(J) {
        if (!J_.allFinite()) throw InvalidInertia("inertia has non-finite entries");
        if ((J_ - J_.transpose()).norm() > 1e-12) throw InvalidInertia("inertia is not symmetric");
        Eigen::SelfAdjointEigenSolver<Mat3> es(J_, Eigen::EigenvaluesOnly);
        lambda_min_ = es.eigenvalues()(0);
        lambda_max_ = es.eigenvalues()(2);
        if (!(lambda_min_ > 0.0)) throw InvalidInertia("inertia is not positive definite");
        J_inv_ = J_.inverse();
    }

    static InertiaMatrix diagonal(double j1, double j2, double j3) {
        return InertiaMatrix(Vec3(j1, j2, j3).asDiagonal().toDenseMatrix());
    }

    const Mat3& matrix() const noexcept { return J_; }
    const Mat3& inverse() const noexcept { return J_inv_; }
    double lambda_min() const noexcept { return lambda_min_; }
    double lambda_max() const noexcept { return lambda_max_; }

    Vec3 operator*(const Vec3& v) const { return J_ * v; }

private:
    Mat3 J_;
    Mat3 J_inv_;
    double lambda_min_ = 0.0;
    double lambda_max_ = 0.0;
};

struct BodyState {
    RotationMatrix R;
    Vec3 Omega = Vec3::Zero();
};

/// Euler's equation J dOmega/dt + Omega x J Omega = u, solved for dOmega/dt.
inline Vec3 omega_dot(const Vec3& Omega, const Vec3& u, const InertiaMatrix& J) {
    return J.inverse() * (u - Omega.cross(J * Omega));
}

/// Attitude kinematics dR/dt = R hat(Omega).
inline Mat3 r_dot(const RotationMatrix& R, const Vec3& Omega) {
    return R.matrix() * hat(Omega);
}

inline double free_energy(const BodyState& state, const InertiaMatrix& J) {
    return 0.5 * state.Omega.dot(J * state.Omega);
}

/// Angular momentum expressed in the inertial frame, R J Omega.
inline Vec3 spatial_momentum(const BodyState& state, const InertiaMatrix& J) {
    return state.R * (J * state.Omega);
}

}  // namespace attctl
