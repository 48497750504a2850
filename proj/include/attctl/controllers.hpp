#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string_view>
#include <utility>

#include "attctl/attitude_error.hpp"
#include "attctl/command.hpp"
#include "attctl/rigid_body.hpp"

namespace attctl {

using Mat2 = Eigen::Matrix2d;

struct GainSet {
    double k_R = 0.0;
    double k_Omega = 0.0;

    GainSet() = default;
    GainSet(double kr, double kw) : k_R(kr), k_Omega(kw) {
        if (!(k_R > 0.0) || !(k_Omega > 0.0)) {
            throw std::invalid_argument("controller gains must be strictly positive");
        }
    }

    bool operator==(const GainSet&) const = default;
};

// ---------------------------------------------------------------------------
// Control laws
// ---------------------------------------------------------------------------

namespace detail {

// Omega x J Omega - J (hat(Omega) R^T Rd Omega_d - R^T Rd dOmega_d/dt)
inline Vec3 feedforward(const BodyState& s, const AttitudeCommand& cmd, const InertiaMatrix& J) {
    const Mat3 rt_rd = s.R.matrix().transpose() * cmd.Rd.matrix();
    return s.Omega.cross(J * s.Omega) -
           J * (s.Omega.cross(rt_rd * cmd.Omega_d) - rt_rd * cmd.Omega_d_dot);
}

}  // namespace detail

/// Tracking law. The closed loop satisfies J de_Omega/dt = -k_R e_R - k_Omega e_Omega.
inline Vec3 tracking_control(const BodyState& s, const AttitudeCommand& cmd, const GainSet& g,
                             const InertiaMatrix& J) {
    const Vec3 er = e_R(s.R, cmd.Rd);
    const Vec3 ew = e_Omega(s.R, s.Omega, cmd.Rd, cmd.Omega_d);
    return -g.k_R * er - g.k_Omega * ew + detail::feedforward(s, cmd, J);
}

/// Stabilization of a fixed Rd with no inertia knowledge: u' = -k_R e_R - k_Omega Omega.
inline Vec3 stabilize_control(const BodyState& s, const RotationMatrix& Rd, const GainSet& g) {
    return -g.k_R * e_R(s.R, Rd) - g.k_Omega * s.Omega;
}

struct BaselineOptions {
    /// Add the same feedforward terms as tracking_control. When false the law is
    /// the plain PD u = -k_R e_R0 - k_Omega Omega.
    bool feedforward = true;
    /// Multiplies e_R0 = 1/2 (Rd^T R - R^T Rd)^vee; 2 gives (Rd^T R - R^T Rd)^vee.
    double error_scale = 1.0;

    bool operator==(const BaselineOptions&) const = default;
};

/// Comparison controller built on the trace error function 1/2 tr(I - Rd^T R).
inline Vec3 baseline_control(const BodyState& s, const AttitudeCommand& cmd, const GainSet& g,
                             const InertiaMatrix& J, const BaselineOptions& opt = {}) {
    const Vec3 er = opt.error_scale * e_R_baseline(s.R, cmd.Rd);
    if (!opt.feedforward) return -g.k_R * er - g.k_Omega * s.Omega;
    const Vec3 ew = e_Omega(s.R, s.Omega, cmd.Rd, cmd.Omega_d);
    return -g.k_R * er - g.k_Omega * ew + detail::feedforward(s, cmd, J);
}

// ---------------------------------------------------------------------------
// Lyapunov certification
// ---------------------------------------------------------------------------

enum class CertMode { tracking, stabilization };

inline std::string_view to_string(CertMode m) {
    return m == CertMode::tracking ? "tracking" : "stabilization";
}

/// 1/2 + sqrt(2) lambda_max(J) / lambda_min(J).
inline double stabilization_alpha(const InertiaMatrix& J) {
    return 0.5 + std::sqrt(2.0) * J.lambda_max() / J.lambda_min();
}

/// Supremum of admissible c2: any 0 < c2 < c2_bound makes W11, W12 and W2
/// (or W2' in stabilization mode) positive definite.
inline double c2_bound(const GainSet& g, const InertiaMatrix& J, CertMode mode) {
    const double lmin = J.lambda_min();
    const double lmax = J.lambda_max();
    const double kr = g.k_R;
    const double kw = g.k_Omega;
    const double first = std::sqrt(2.0 * kr * lmin);
    if (mode == CertMode::tracking) {
        const double third = 4.0 * kr * kw * lmin * lmin / (2.0 * kr * lmin * lmin + kw * kw * lmax);
        return std::min({first, 2.0 * kw, third});
    }
    const double a = stabilization_alpha(J);
    const double third = 4.0 * kr * kw * lmin * lmin / (4.0 * a * kr * lmin * lmin + kw * kw * lmax);
    return std::min({first, kw / a, third});
}

/// Eigenvalues (ascending) of a symmetric 2x2 matrix.
inline std::pair<double, double> sym2_eigenvalues(const Mat2& m) {
    const double mean = 0.5 * (m(0, 0) + m(1, 1));
    const double half_diff = 0.5 * (m(0, 0) - m(1, 1));
    const double r = std::hypot(half_diff, m(0, 1));
    return {mean - r, mean + r};
}

struct Certification {
    CertMode mode = CertMode::tracking;
    double alpha = 0.0;  // stabilization only
    double c2_max = 0.0;
    double c2_used = 0.0;
    Mat2 W11 = Mat2::Zero();
    Mat2 W12 = Mat2::Zero();
    Mat2 W2 = Mat2::Zero();  // W2' in stabilization mode
    bool W11_pd = false;
    bool W12_pd = false;
    bool W2_pd = false;
    /// lambda_min(W2) / lambda_max(W12); zero unless every matrix is PD.
    double decay_rate = 0.0;

    bool certified() const { return W11_pd && W12_pd && W2_pd; }
};

/// Builds the bound matrices for z = [||e_R||, ||e_Omega||]:
///   z^T W11 z <= V <= z^T W12 z,   dV/dt <= -z^T W2 z.
/// The off-diagonal of W11 carries -c2/2 so that the lower bound holds for
/// every sign of e_Omega . e_R; its spectrum is unchanged by the sign.
inline Certification certify(const GainSet& g, const InertiaMatrix& J, double c2, CertMode mode) {
    if (!(c2 > 0.0)) throw std::invalid_argument("certify: c2 must be positive");
    const double lmin = J.lambda_min();
    const double lmax = J.lambda_max();

    Certification c;
    c.mode = mode;
    c.alpha = mode == CertMode::stabilization ? stabilization_alpha(J) : 0.0;
    c.c2_max = c2_bound(g, J, mode);
    c.c2_used = c2;

    c.W11 << g.k_R, -0.5 * c2,
             -0.5 * c2, 0.5 * lmin;
    c.W12 << 2.0 * g.k_R, 0.5 * c2,
             0.5 * c2, 0.5 * lmax;
    const double off = -c2 * g.k_Omega / (2.0 * lmin);
    const double w22 = mode == CertMode::tracking ? g.k_Omega - 0.5 * c2 : g.k_Omega - c.alpha * c2;
    c.W2 << c2 * g.k_R / lmax, off,
            off, w22;

    c.W11_pd = sym2_eigenvalues(c.W11).first > 0.0;
    c.W12_pd = sym2_eigenvalues(c.W12).first > 0.0;
    c.W2_pd = sym2_eigenvalues(c.W2).first > 0.0;
    if (c.certified()) {
        c.decay_rate = sym2_eigenvalues(c.W2).first / sym2_eigenvalues(c.W12).second;
    }
    return c;
}

inline constexpr int kC2GridPoints = 200;

/// Certification with the c2 that maximizes decay_rate over an evenly spaced
/// grid strictly inside (0, c2_bound).
inline Certification optimal_certification(const GainSet& g, const InertiaMatrix& J, CertMode mode,
                                           int grid_points = kC2GridPoints) {
    const double bound = c2_bound(g, J, mode);
    Certification best = certify(g, J, bound / (grid_points + 1), mode);
    for (int i = 2; i <= grid_points; ++i) {
        Certification c = certify(g, J, bound * i / (grid_points + 1), mode);
        if (c.certified() && c.decay_rate > best.decay_rate) best = c;
    }
    return best;
}

struct RoaReport {
    double psi0 = 0.0;
    bool psi_ok = false;
    double e_omega0_norm = 0.0;
    /// sqrt((2 / lambda_max(J)) k_R (2 - psi0)); zero when psi0 >= 2.
    double e_omega_bound = 0.0;
    bool inside = false;
};

/// Region-of-attraction estimate: Psi(0) < 2 (less the boundary margin) and
/// ||e_Omega(0)||^2 < (2 / lambda_max(J)) k_R (2 - Psi(0)).
inline RoaReport roa_check(const BodyState& s0, const AttitudeCommand& cmd0, const GainSet& g,
                           const InertiaMatrix& J) {
    RoaReport r;
    r.psi0 = psi(s0.R, cmd0.Rd);
    r.psi_ok = r.psi0 < 2.0 - kBoundaryEps;
    r.e_omega0_norm = e_Omega(s0.R, s0.Omega, cmd0.Rd, cmd0.Omega_d).norm();
    const double bound_sq = 2.0 / J.lambda_max() * g.k_R * (2.0 - r.psi0);
    r.e_omega_bound = bound_sq > 0.0 ? std::sqrt(bound_sq) : 0.0;
    r.inside = r.psi_ok && r.e_omega0_norm * r.e_omega0_norm < bound_sq;
    return r;
}

/// V = 1/2 e_Omega . J e_Omega + k_R Psi + c2 e_Omega . e_R. With c2 = 0 this
/// is the function W used for the invariance argument.
inline double lyapunov_value(const BodyState& s, const AttitudeCommand& cmd, const GainSet& g,
                             const InertiaMatrix& J, double c2) {
    const Vec3 ew = e_Omega(s.R, s.Omega, cmd.Rd, cmd.Omega_d);
    const double kinetic = 0.5 * ew.dot(J * ew);
    const double potential = g.k_R * psi(s.R, cmd.Rd);
    if (c2 == 0.0) return kinetic + potential;
    return kinetic + potential + c2 * ew.dot(e_R(s.R, cmd.Rd));
}

}  // namespace attctl
