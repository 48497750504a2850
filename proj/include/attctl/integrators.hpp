#pragma once

#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>

#include "attctl/rigid_body.hpp"

namespace attctl {

enum class Method { lgvi, rk4, rk4_projected };

struct IntegratorConfig {
    Method method = Method::lgvi;
    double h = 1e-3;
    double newton_tol = 1e-14;
    int newton_max_iter = 50;

    void validate() const {
        if (!(h > 0.0)) throw std::invalid_argument("integrator step h must be positive");
        if (!(newton_tol > 0.0)) throw std::invalid_argument("newton_tol must be positive");
        if (newton_max_iter < 1) throw std::invalid_argument("newton_max_iter must be >= 1");
    }

    bool operator==(const IntegratorConfig&) const = default;
};

struct StepResult {
    BodyState state;
    int newton_iters = 0;
    double ortho_error = 0.0;
    /// Control value used at the end of the step.
    Vec3 u_next = Vec3::Zero();
};

/// Control as a function of the end-of-step state (time is fixed by the caller).
using EndpointControl = std::function<Vec3(const BodyState&)>;

namespace detail {

struct SincTerms {
    double a;   // sin(n)/n
    double b;   // (1 - cos n)/n^2
    double da;  // (da/dn)/n
    double db;  // (db/dn)/n
};

inline SincTerms sinc_terms(double n) {
    if (n < 1e-4) {
        const double n2 = n * n;
        return {1.0 - n2 / 6.0, 0.5 - n2 / 24.0, -1.0 / 3.0 + n2 / 30.0, -1.0 / 12.0 + n2 / 180.0};
    }
    const double s = std::sin(n);
    const double c = std::cos(n);
    const double half = std::sin(0.5 * n);
    const double one_minus_c = 2.0 * half * half;
    return {s / n, one_minus_c / (n * n), (n * c - s) / (n * n * n),
            (n * s - 2.0 * one_minus_c) / (n * n * n * n)};
}

}  // namespace detail

/// Solves h hat(mu) = F Jd - Jd F^T for F = exp(hat(f)), Jd = tr(J)/2 I - J,
/// by Newton's method on f. Returns f and writes the iteration count.
inline Vec3 solve_lgvi_rotation(const Vec3& mu, const InertiaMatrix& J, const Vec3& f0, double tol,
                                int max_iter, int& iters) {
    const Mat3& Jm = J.matrix();
    Vec3 f = f0;
    for (iters = 1; iters <= max_iter; ++iters) {
        const double n = f.norm();
        const auto t = detail::sinc_terms(n);
        const Vec3 jf = Jm * f;
        const Vec3 fxjf = f.cross(jf);
        const Vec3 residual = t.a * jf + t.b * fxjf - mu;
        const Mat3 jac = t.da * jf * f.transpose() + t.a * Jm + t.db * fxjf * f.transpose() +
                         t.b * (hat(f) * Jm - hat(jf));
        const Vec3 step = jac.partialPivLu().solve(-residual);
        if (!step.allFinite()) break;
        f += step;
        if (step.norm() <= tol) return f;
    }
    throw NewtonDivergence("LGVI Newton iteration did not converge in " + std::to_string(max_iter) +
                           " iterations; reduce the step size");
}

/// One step of the Lie group variational integrator:
///   h hat(J Omega_k + h/2 u_k) = F Jd - Jd F^T,
///   R_{k+1} = R_k F,
///   J Omega_{k+1} = F^T (J Omega_k + h/2 u_k) + h/2 u_{k+1}.
/// u_{k+1} is taken from `next_control` at R_{k+1} with a predicted Omega
/// (u_{k+1} ~ u_k) followed by one fixed-point correction.
inline StepResult lgvi_step(const BodyState& s, const Vec3& u_k, const EndpointControl& next_control,
                            double h, const InertiaMatrix& J, const IntegratorConfig& cfg) {
    if (!(h > 0.0)) throw std::invalid_argument("lgvi_step: h must be positive");
    const Vec3 pi_half = J * s.Omega + 0.5 * h * u_k;

    StepResult out;
    const Vec3 f = solve_lgvi_rotation(h * pi_half, J, h * s.Omega, cfg.newton_tol,
                                       cfg.newton_max_iter, out.newton_iters);
    const RotationMatrix F = exp_so3(f);
    const Mat3 next_R = s.R.matrix() * F.matrix();
    out.ortho_error = ortho_error(next_R);
    out.state.R = RotationMatrix(next_R);

    const Vec3 carried = F.matrix().transpose() * pi_half;
    if (!next_control) {
        out.u_next = Vec3::Zero();
        out.state.Omega = J.inverse() * carried;
        return out;
    }
    out.state.Omega = J.inverse() * (carried + 0.5 * h * u_k);
    out.u_next = next_control(out.state);
    out.state.Omega = J.inverse() * (carried + 0.5 * h * out.u_next);
    return out;
}

// ---------------------------------------------------------------------------
// Classical RK4 on the flattened (R, Omega), for drift comparison
// ---------------------------------------------------------------------------

/// State whose attitude is an arbitrary 3x3 matrix; unprojected RK4 leaves SO(3).
struct FlatState {
    Mat3 R = Mat3::Identity();
    Vec3 Omega = Vec3::Zero();
};

struct FlatStepResult {
    FlatState state;
    /// ||R^T R - I||_F before any projection.
    double ortho_error = 0.0;
};

/// Control as a function of (t, state).
using StateControl = std::function<Vec3(double, const BodyState&)>;

inline FlatStepResult rk4_step(const FlatState& s, double t, const StateControl& control, double h,
                               const InertiaMatrix& J, bool project) {
    if (!(h > 0.0)) throw std::invalid_argument("rk4_step: h must be positive");

    struct Deriv {
        Mat3 dR;
        Vec3 dW;
    };
    // Stage attitudes are slightly off SO(3); the controller sees their polar factor.
    auto eval = [&](double tau, const Mat3& R, const Vec3& W) -> Deriv {
        Vec3 u = Vec3::Zero();
        if (control) u = control(tau, BodyState{project_to_so3(R), W});
        return {R * hat(W), omega_dot(W, u, J)};
    };

    const Deriv k1 = eval(t, s.R, s.Omega);
    const Deriv k2 = eval(t + 0.5 * h, s.R + 0.5 * h * k1.dR, s.Omega + 0.5 * h * k1.dW);
    const Deriv k3 = eval(t + 0.5 * h, s.R + 0.5 * h * k2.dR, s.Omega + 0.5 * h * k2.dW);
    const Deriv k4 = eval(t + h, s.R + h * k3.dR, s.Omega + h * k3.dW);

    FlatStepResult out;
    out.state.R = s.R + (h / 6.0) * (k1.dR + 2.0 * k2.dR + 2.0 * k3.dR + k4.dR);
    out.state.Omega = s.Omega + (h / 6.0) * (k1.dW + 2.0 * k2.dW + 2.0 * k3.dW + k4.dW);
    out.ortho_error = ortho_error(out.state.R);
    if (project) out.state.R = project_to_so3(out.state.R).matrix();
    return out;
}

}  // namespace attctl
