#pragma once

#include <array>
#include <cmath>
#include <stdexcept>

#include "attctl/so3.hpp"

namespace attctl {

/// Desired attitude, body rate and body angular acceleration at time t.
struct AttitudeCommand {
    RotationMatrix Rd;
    Vec3 Omega_d = Vec3::Zero();
    Vec3 Omega_d_dot = Vec3::Zero();
    double t = 0.0;
};

/// c0 + c1 t + c2 t^2 (rad, rad/s, rad/s^2).
struct Quadratic {
    std::array<double, 3> c{0.0, 0.0, 0.0};

    double value(double t) const { return c[0] + c[1] * t + c[2] * t * t; }
    double rate(double t) const { return c[1] + 2.0 * c[2] * t; }

    bool operator==(const Quadratic&) const = default;
};

enum class CommandKind { euler_tracking, fixed };

struct CommandSpec {
    CommandKind kind = CommandKind::fixed;
    // euler_tracking: phi about body axis 3, theta about 2, psi about 1.
    Quadratic phi;
    Quadratic theta;
    Quadratic psi;
    // fixed: Rd = exp(angle * hat(axis)).
    Vec3 axis = Vec3::UnitX();
    double angle = 0.0;

    bool operator==(const CommandSpec&) const = default;

    static CommandSpec euler(Quadratic phi, Quadratic theta, Quadratic psi) {
        CommandSpec s;
        s.kind = CommandKind::euler_tracking;
        s.phi = phi;
        s.theta = theta;
        s.psi = psi;
        return s;
    }

    static CommandSpec fixed_axis_angle(const Vec3& axis, double angle) {
        if (std::abs(axis.norm() - 1.0) > 1e-12) {
            throw std::invalid_argument("fixed command axis must be a unit vector");
        }
        CommandSpec s;
        s.kind = CommandKind::fixed;
        s.axis = axis;
        s.angle = angle;
        return s;
    }
};

/// R3(phi) R2(theta) R1(psi) for angles = (phi, theta, psi).
inline RotationMatrix euler_321_rotation(const Vec3& angles) {
    return exp_so3(angles(0) * Vec3::UnitZ()) * exp_so3(angles(1) * Vec3::UnitY()) *
           exp_so3(angles(2) * Vec3::UnitX());
}

/// Body angular velocity of R3(phi) R2(theta) R1(psi) given the Euler rates.
/// The forward map is regular for all angles; only its inverse is singular.
inline Vec3 body_rate_from_euler(const Vec3& angles, const Vec3& rates) {
    const double st = std::sin(angles(1));
    const double ct = std::cos(angles(1));
    const double sp = std::sin(angles(2));
    const double cp = std::cos(angles(2));
    const double dphi = rates(0);
    const double dtheta = rates(1);
    const double dpsi = rates(2);
    return Vec3(dpsi - dphi * st,
                dtheta * cp + dphi * sp * ct,
                -dtheta * sp + dphi * cp * ct);
}

namespace detail {

inline Vec3 euler_angles(double t, const CommandSpec& spec) {
    return Vec3(spec.phi.value(t), spec.theta.value(t), spec.psi.value(t));
}

inline Vec3 euler_rates(double t, const CommandSpec& spec) {
    return Vec3(spec.phi.rate(t), spec.theta.rate(t), spec.psi.rate(t));
}

inline Vec3 euler_body_rate(double t, const CommandSpec& spec) {
    return body_rate_from_euler(euler_angles(t, spec), euler_rates(t, spec));
}

}  // namespace detail

inline constexpr double kCommandDiffStep = 1e-6;

inline AttitudeCommand euler_command(double t, const CommandSpec& spec) {
    if (spec.kind != CommandKind::euler_tracking) {
        throw std::invalid_argument("euler_command requires an euler_tracking command");
    }
    AttitudeCommand cmd;
    cmd.t = t;
    cmd.Rd = euler_321_rotation(detail::euler_angles(t, spec));
    cmd.Omega_d = detail::euler_body_rate(t, spec);
    cmd.Omega_d_dot = (detail::euler_body_rate(t + kCommandDiffStep, spec) -
                       detail::euler_body_rate(t - kCommandDiffStep, spec)) /
                      (2.0 * kCommandDiffStep);
    return cmd;
}

inline AttitudeCommand fixed_command(const CommandSpec& spec, double t = 0.0) {
    if (spec.kind != CommandKind::fixed) {
        throw std::invalid_argument("fixed_command requires a fixed command");
    }
    AttitudeCommand cmd;
    cmd.t = t;
    cmd.Rd = exp_so3(spec.angle * spec.axis);
    return cmd;
}

inline AttitudeCommand command_at(double t, const CommandSpec& spec) {
    return spec.kind == CommandKind::fixed ? fixed_command(spec, t) : euler_command(t, spec);
}

/// The tracking maneuver used in the numerical examples.
inline CommandSpec reference_euler_spec() {
    return CommandSpec::euler(Quadratic{{0.999 * std::numbers::pi, 0.5, 0.0}},
                              Quadratic{{0.0, 0.0, 0.1}},
                              Quadratic{{0.0, -0.2, 0.5}});
}

/// The fixed attitude exp(0.999 pi hat(s)), s = [1, -1, 1]/sqrt(3).
inline CommandSpec reference_fixed_spec() {
    return CommandSpec::fixed_axis_angle(Vec3(1.0, -1.0, 1.0).normalized(),
                                         0.999 * std::numbers::pi);
}

}  // namespace attctl
