#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "attctl/attitude_error.hpp"
#include "test_support.hpp"

using namespace attctl;
using attctl::testing::Gen;

namespace {

constexpr double kPi = std::numbers::pi;
const Vec3 kS = Vec3(1.0, -1.0, 1.0) / std::sqrt(3.0);

// Rigid motions with constant body rates, R(t) = R0 exp(t hat(W)), Rd(t) = Rd0 exp(t hat(Wd)).
struct PairTrajectory {
    RotationMatrix R0, Rd0;
    Vec3 W, Wd;

    RotationMatrix R(double t) const { return R0 * exp_so3(t * W); }
    RotationMatrix Rd(double t) const { return Rd0 * exp_so3(t * Wd); }
    Vec3 e_omega(double t) const { return e_Omega(R(t), W, Rd(t), Wd); }
};

PairTrajectory random_pair(Gen& g) {
    for (;;) {
        PairTrajectory p{g.rotation(), g.rotation(), g.vec(2.0), g.vec(2.0)};
        if (rotation_angle(RotationMatrix(p.Rd0.matrix().transpose() * p.R0.matrix())) < kPi - 1e-2) {
            return p;
        }
    }
}

}  // namespace

TEST(Psi, Examples) {
    Gen g(1);
    for (int i = 0; i < 10; ++i) {
        const RotationMatrix r = g.rotation();
        EXPECT_NEAR(psi(r, r), 0.0, 1e-15);
    }
    const RotationMatrix rd = exp_so3(Vec3(0.2, 0.4, -0.1));
    EXPECT_NEAR(psi(rd * exp_so3(Vec3(kPi / 2, 0, 0)), rd), 2.0 - std::sqrt(2.0), 1e-12);
    EXPECT_NEAR(psi(rd * exp_so3(0.999 * kPi * kS), rd), 1.9968584086383532, 1e-12);
}

TEST(Psi, DefinedOnWholeGroupIncludingAntipode) {
    const double p = psi(exp_so3(Vec3(kPi, 0, 0)), RotationMatrix::identity());
    EXPECT_TRUE(std::isfinite(p));
    EXPECT_NEAR(p, 2.0, 1e-7);
    EXPECT_LE(p, 2.0);
}

TEST(ER, Examples) {
    const RotationMatrix rd = exp_so3(Vec3(-0.3, 0.1, 0.9));
    EXPECT_LE(e_R(rd, rd).norm(), 1e-15);
    // sin(theta/2) * axis, expressed in the Rd frame
    EXPECT_LE((e_R(rd * exp_so3(Vec3(kPi / 2, 0, 0)), rd) - Vec3(0.7071067811865476, 0, 0)).norm(), 1e-12);
    EXPECT_NEAR(e_R(rd * exp_so3(0.999 * kPi * kS), rd).norm(), 0.9999987662997035, 1e-12);
}

TEST(ER, DirectFormulaCrossCheck) {
    // e_R = sin(theta/2) s for Rd^T R = exp(theta s), evaluated independently of the vee formula.
    Gen g(2);
    for (int i = 0; i < 200; ++i) {
        const RotationMatrix rd = g.rotation();
        const Vec3 s = g.unit();
        const double th = g.uniform(0.0, kPi - 1e-3);
        const Vec3 er = e_R(rd * exp_so3(th * s), rd);
        EXPECT_LE((er - std::sin(th / 2) * s).norm(), 1e-12);
    }
}

TEST(ER, BoundaryGuard) {
    const RotationMatrix rd = exp_so3(Vec3(0.5, -0.2, 0.1));
    EXPECT_THROW(e_R(rd * exp_so3(kPi * kS), rd), AtErrorBoundary);
    EXPECT_THROW(error_jacobian(rd * exp_so3(kPi * kS), rd), AtErrorBoundary);
    EXPECT_THROW(e_R(exp_so3((kPi - 1e-11) * kS), RotationMatrix::identity()), AtErrorBoundary);
    // Just inside the guard the vector is still accurate.
    const Vec3 near = e_R(exp_so3((kPi - 1e-4) * kS), RotationMatrix::identity());
    EXPECT_LE((near - std::sin((kPi - 1e-4) / 2) * kS).norm(), 1e-10);
}

TEST(EOmega, Examples) {
    Gen g(3);
    const RotationMatrix r = g.rotation();
    const Vec3 w = g.vec();
    EXPECT_LE(e_Omega(r, w, r, w).norm(), 1e-15);
    EXPECT_EQ(e_Omega(r, w, g.rotation(), Vec3::Zero()), w);
    const Vec3 ew = e_Omega(exp_so3(Vec3(0, 0, kPi / 2)), Vec3::Zero(), RotationMatrix::identity(), Vec3(1, 0, 0));
    EXPECT_LE((ew - Vec3(0, 1, 0)).norm(), 1e-15);
}

TEST(ErrorJacobian, IdentityAndSpectrum) {
    const RotationMatrix r = exp_so3(Vec3(0.1, 0.2, 0.3));
    EXPECT_LE((error_jacobian(r, r) - 0.5 * Mat3::Identity()).norm(), 1e-15);

    Gen g(4);
    for (int i = 0; i < 200; ++i) {
        const RotationMatrix R = g.rotation();
        const RotationMatrix Rd = g.rotation();
        const double th = rotation_angle(RotationMatrix(Rd.matrix().transpose() * R.matrix()));
        if (th > kPi - 1e-6) continue;
        const Mat3 E = error_jacobian(R, Rd);
        Eigen::JacobiSVD<Mat3> svd(E);
        EXPECT_NEAR(svd.singularValues()(0), 0.5, 1e-12);

        Eigen::SelfAdjointEigenSolver<Mat3> es(E.transpose() * E);
        const Vec3 ev = es.eigenvalues();  // ascending
        EXPECT_NEAR(ev(0), (1.0 + std::cos(th)) / 8.0, 1e-10);
        EXPECT_NEAR(ev(1), 0.25, 1e-10);
        EXPECT_NEAR(ev(2), 0.25, 1e-10);
    }

    Eigen::SelfAdjointEigenSolver<Mat3> es(
        [] {
            const Mat3 E = error_jacobian(exp_so3(Vec3(0, kPi / 2, 0)), RotationMatrix::identity());
            return Mat3(E.transpose() * E);
        }());
    EXPECT_NEAR(es.eigenvalues()(0), 0.125, 1e-12);
    EXPECT_NEAR(es.eigenvalues()(1), 0.25, 1e-12);
    EXPECT_NEAR(es.eigenvalues()(2), 0.25, 1e-12);
}

TEST(Baseline, Examples) {
    const RotationMatrix rd = exp_so3(Vec3(0.7, 0.0, -0.4));
    EXPECT_NEAR(psi_baseline(rd, rd), 0.0, 1e-15);
    EXPECT_NEAR(psi_baseline(rd * exp_so3(Vec3(kPi / 2, 0, 0)), rd), 1.0, 1e-12);
    EXPECT_NEAR(psi_baseline(rd * exp_so3(Vec3(kPi, 0, 0)), rd), 2.0, 1e-12);

    EXPECT_LE(e_R_baseline(rd, rd).norm(), 1e-15);
    EXPECT_LE((e_R_baseline(rd * exp_so3(Vec3(kPi / 2, 0, 0)), rd) - Vec3(1, 0, 0)).norm(), 1e-12);
    EXPECT_NEAR(e_R_baseline(rd * exp_so3(0.999 * kPi * kS), rd).norm(), 0.0031415874858794902, 1e-12);
    EXPECT_LE(e_R_baseline(rd * exp_so3(kPi * kS), rd).norm(), 1e-12);
}

// ---------------------------------------------------------------------------
// Properties
// ---------------------------------------------------------------------------

TEST(AttitudeErrorProperties, QuadraticSandwich) {
    Gen g(10);
    for (int i = 0; i < 1000; ++i) {
        const RotationMatrix R = g.rotation();
        const RotationMatrix Rd = g.rotation();
        const double p = psi(R, Rd);
        if (p >= 2.0 - kBoundaryEps) continue;
        const double n2 = e_R(R, Rd).squaredNorm();
        EXPECT_LE(n2, p + 1e-12);
        EXPECT_LE(p, 2.0 * n2 + 1e-12);
        EXPECT_GE(p, 0.0);
    }
}

TEST(AttitudeErrorProperties, ClosedFormsOverAngle) {
    Gen g(11);
    for (int i = 0; i < 1000; ++i) {
        const double th = g.uniform(0.0, kPi - 1e-3);
        const RotationMatrix Rd = g.rotation();
        const RotationMatrix R = Rd * exp_so3(th * g.unit());
        const double q = std::sin(th / 4);
        EXPECT_NEAR(psi(R, Rd), 4.0 * q * q, 1e-12);
        EXPECT_NEAR(e_R(R, Rd).squaredNorm(), std::pow(std::sin(th / 2), 2), 1e-12);
    }
}

TEST(AttitudeErrorProperties, SingleCriticalPointInSublevelSet) {
    int zeros = 0;
    const int n = 100000;
    for (int i = 0; i < n; ++i) {
        const double th = kPi * i / n;
        if (e_R(exp_so3(th * kS), RotationMatrix::identity()).norm() < 1e-12) {
            ++zeros;
            EXPECT_EQ(i, 0);
        }
    }
    EXPECT_EQ(zeros, 1);
}

TEST(AttitudeErrorProperties, ProposedMonotoneBaselinePeaksAtHalfPi) {
    double prev = -1.0;
    double best = -1.0;
    double best_th = 0.0;
    const int n = 10000;
    for (int i = 0; i < n; ++i) {
        const double th = kPi * i / n;
        const RotationMatrix R = exp_so3(th * Vec3::UnitX());
        const double cur = e_R(R, RotationMatrix::identity()).norm();
        EXPECT_GT(cur, prev);
        prev = cur;
        const double base = e_R_baseline(R, RotationMatrix::identity()).norm();
        if (base > best) {
            best = base;
            best_th = th;
        }
    }
    EXPECT_NEAR(best_th, kPi / 2, kPi / n);
    EXPECT_LT(e_R_baseline(exp_so3((kPi - 1e-3) * Vec3::UnitX()), RotationMatrix::identity()).norm(), 1.1e-3);
}

TEST(AttitudeErrorProperties, PsiChainRule) {
    Gen g(12);
    const double dt = 1e-7;
    for (int i = 0; i < 200; ++i) {
        const PairTrajectory p = random_pair(g);
        const double t = 0.0;
        const double fd = (psi(p.R(t + dt), p.Rd(t + dt)) - psi(p.R(t - dt), p.Rd(t - dt))) / (2 * dt);
        const Vec3 er = e_R(p.R(t), p.Rd(t));
        const Vec3 ew = p.e_omega(t);
        const double scale = std::max(er.norm() * ew.norm(), 1e-3);
        EXPECT_LE(std::abs(fd - er.dot(ew)) / scale, 1e-6);
    }
}

TEST(AttitudeErrorProperties, ErrorVectorRateMatchesJacobian) {
    Gen g(13);
    const double dt = 1e-7;
    for (int i = 0; i < 200; ++i) {
        const PairTrajectory p = random_pair(g);
        const Vec3 fd = (e_R(p.R(dt), p.Rd(dt)) - e_R(p.R(-dt), p.Rd(-dt))) / (2 * dt);
        const Vec3 ew = p.e_omega(0.0);
        const Vec3 model = error_jacobian(p.R(0.0), p.Rd(0.0)) * ew;
        EXPECT_LE((fd - model).norm() / std::max(model.norm(), 1e-3), 1e-6);
        EXPECT_LE(fd.norm(), 0.5 * ew.norm() + 1e-6);
        EXPECT_LE(model.norm(), 0.5 * ew.norm() + 1e-9);
    }
}
