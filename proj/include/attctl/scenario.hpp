#pragma once

#include <array>
#include <cmath>
#include <cstdio>
#include <functional>
#include <future>
#include <limits>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "attctl/controllers.hpp"
#include "attctl/integrators.hpp"

namespace attctl {

enum class ControllerKind { proposed_tracking, inertia_free, baseline };

inline std::string_view to_string(ControllerKind k) {
    switch (k) {
        case ControllerKind::proposed_tracking: return "proposed_tracking";
        case ControllerKind::inertia_free: return "inertia_free";
        case ControllerKind::baseline: return "baseline";
    }
    return "?";
}

inline std::string_view to_string(Method m) {
    switch (m) {
        case Method::lgvi: return "lgvi";
        case Method::rk4: return "rk4";
        case Method::rk4_projected: return "rk4_projected";
    }
    return "?";
}

struct ScenarioConfig {
    Mat3 inertia = Mat3::Identity();
    GainSet gains{1.0, 1.0};
    CommandSpec command;
    Vec3 r0_axis = Vec3::UnitX();
    double r0_angle = 0.0;
    Vec3 omega0 = Vec3::Zero();
    ControllerKind controller = ControllerKind::proposed_tracking;
    BaselineOptions baseline;
    IntegratorConfig integrator;
    double duration = 10.0;
    int log_every = 10;
    /// Inertia the controller believes in; the plant always uses `inertia`.
    std::optional<Mat3> controller_inertia_override;

    BodyState initial_state() const { return {exp_so3(r0_angle * r0_axis), omega0}; }

    long long step_count() const {
        return static_cast<long long>(std::floor(duration / integrator.h + 1e-9));
    }
};

/// Reference scenarios: J = diag(3, 2, 1), k_R = 12, k_Omega = 8.4,
/// R(0) = I, Omega(0) = 0, LGVI at h = 1e-3 for 10 s.
inline ScenarioConfig reference_tracking_scenario() {
    ScenarioConfig c;
    c.inertia = Vec3(3.0, 2.0, 1.0).asDiagonal();
    c.gains = GainSet(12.0, 8.4);
    c.command = reference_euler_spec();
    c.controller = ControllerKind::proposed_tracking;
    return c;
}

inline ScenarioConfig reference_stabilization_scenario() {
    ScenarioConfig c = reference_tracking_scenario();
    c.command = reference_fixed_spec();
    c.controller = ControllerKind::inertia_free;
    return c;
}

inline CertMode cert_mode(ControllerKind k) {
    return k == ControllerKind::inertia_free ? CertMode::stabilization : CertMode::tracking;
}

/// The controller of a scenario as a function of (t, state).
inline StateControl make_controller(const ScenarioConfig& cfg) {
    const InertiaMatrix Jc(cfg.controller_inertia_override.value_or(cfg.inertia));
    const GainSet g = cfg.gains;
    const CommandSpec spec = cfg.command;
    switch (cfg.controller) {
        case ControllerKind::proposed_tracking:
            return [=](double t, const BodyState& s) {
                return tracking_control(s, command_at(t, spec), g, Jc);
            };
        case ControllerKind::inertia_free:
            return [=](double t, const BodyState& s) {
                return stabilize_control(s, command_at(t, spec).Rd, g);
            };
        case ControllerKind::baseline: {
            const BaselineOptions opt = cfg.baseline;
            return [=](double t, const BodyState& s) {
                return baseline_control(s, command_at(t, spec), g, Jc, opt);
            };
        }
    }
    return {};
}

// ---------------------------------------------------------------------------
// Trajectory record
// ---------------------------------------------------------------------------

struct TrajectoryRow {
    double t = 0.0;
    double psi = 0.0;
    double e_r_norm = 0.0;
    double e_w_norm = 0.0;
    Vec3 omega = Vec3::Zero();
    Vec3 u = Vec3::Zero();
    double ortho_err = 0.0;
    double V = 0.0;
    double V_bound = 0.0;
    /// W = 1/2 e_W.J e_W + k_R Psi did not grow by more than 1e-9 on any step
    /// since the previous row.
    bool W_monotone = true;
};

inline constexpr std::string_view kCsvHeader = "t,psi,e_r_norm,e_w_norm,wx,wy,wz,ux,uy,uz,ortho_err,V,V_bound";

struct TrajectoryRecord {
    std::vector<TrajectoryRow> rows;
    Certification certification;
    double max_W_increase = 0.0;

    void write_csv(std::ostream& os) const {
        os << kCsvHeader << '\n';
        char buf[64];
        auto put = [&](double v, char sep) {
            std::snprintf(buf, sizeof buf, "%.12g", v);
            os << buf << sep;
        };
        for (const auto& r : rows) {
            put(r.t, ',');
            put(r.psi, ',');
            put(r.e_r_norm, ',');
            put(r.e_w_norm, ',');
            for (int i = 0; i < 3; ++i) put(r.omega(i), ',');
            for (int i = 0; i < 3; ++i) put(r.u(i), ',');
            put(r.ortho_err, ',');
            put(r.V, ',');
            put(r.V_bound, '\n');
        }
    }
};

/// Per-step view handed to observers of run_scenario (every integrator step,
/// not only logged rows).
struct StepSample {
    long long k = 0;
    double t = 0.0;
    const BodyState& state;
    const AttitudeCommand& command;
    const Vec3& u;
    double ortho_err = 0.0;
};

using StepObserver = std::function<void(const StepSample&)>;

inline constexpr double kMonotoneTol = 1e-9;

inline void validate(const ScenarioConfig& cfg) {
    if (!(cfg.duration > 0.0)) throw ConfigInvalid("duration", "must be > 0");
    if (cfg.log_every < 1) throw ConfigInvalid("log_every", "must be >= 1");
    try {
        cfg.integrator.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigInvalid("integrator", e.what());
    }
    try {
        InertiaMatrix{cfg.inertia};
        if (cfg.controller_inertia_override) InertiaMatrix{*cfg.controller_inertia_override};
    } catch (const InvalidInertia& e) {
        throw ConfigInvalid("inertia", e.what());
    }
    if (cfg.step_count() < 1) throw ConfigInvalid("duration", "shorter than one integrator step");
}

/// Closed-loop rollout. Row k * log_every holds the state at t = k * log_every * h
/// and the control applied from that instant.
inline TrajectoryRecord run_scenario(const ScenarioConfig& cfg, const StepObserver& observer = {}) {
    validate(cfg);
    const InertiaMatrix J(cfg.inertia);
    const StateControl control = make_controller(cfg);
    const double h = cfg.integrator.h;
    const long long steps = cfg.step_count();

    TrajectoryRecord rec;
    rec.certification = optimal_certification(cfg.gains, J, cert_mode(cfg.controller));
    const double c2 = rec.certification.c2_used;
    const double decay = rec.certification.decay_rate;
    rec.rows.reserve(static_cast<std::size_t>(steps / cfg.log_every + 1));

    const double nan = std::numeric_limits<double>::quiet_NaN();
    auto safe_V = [&](const BodyState& s, const AttitudeCommand& cmd) {
        try {
            return lyapunov_value(s, cmd, cfg.gains, J, c2);
        } catch (const AtErrorBoundary&) {
            return nan;
        }
    };
    auto error_norm = [&](const BodyState& s, const AttitudeCommand& cmd) {
        if (cfg.controller == ControllerKind::baseline) {
            return (cfg.baseline.error_scale * e_R_baseline(s.R, cmd.Rd)).norm();
        }
        try {
            return e_R(s.R, cmd.Rd).norm();
        } catch (const AtErrorBoundary&) {
            return nan;
        }
    };

    FlatState flat{cfg.initial_state().R.matrix(), cfg.omega0};
    auto as_body = [&](const FlatState& f) {
        return cfg.integrator.method == Method::lgvi ? BodyState{RotationMatrix(f.R), f.Omega}
                                                     : BodyState{project_to_so3(f.R), f.Omega};
    };

    double V0 = nan;
    double W_prev = nan;
    bool monotone_since_row = true;
    // The LGVI hands back the endpoint control it used; the next step starts from it.
    std::optional<Vec3> carried_u;
    for (long long k = 0; k <= steps; ++k) {
        const double t = static_cast<double>(k) * h;
        const BodyState s = as_body(flat);
        const AttitudeCommand cmd = command_at(t, cfg.command);
        const Vec3 u = carried_u ? *carried_u : control(t, s);
        const double oe = ortho_error(flat.R);

        const double W = lyapunov_value(s, cmd, cfg.gains, J, 0.0);
        if (k > 0) {
            const double inc = W - W_prev;
            rec.max_W_increase = std::max(rec.max_W_increase, inc);
            if (inc > kMonotoneTol) monotone_since_row = false;
        }
        W_prev = W;

        if (observer) observer(StepSample{k, t, s, cmd, u, oe});

        if (k % cfg.log_every == 0) {
            TrajectoryRow row;
            row.t = t;
            row.psi = psi(s.R, cmd.Rd);
            row.e_r_norm = error_norm(s, cmd);
            row.e_w_norm = e_Omega(s.R, s.Omega, cmd.Rd, cmd.Omega_d).norm();
            row.omega = s.Omega;
            row.u = u;
            row.ortho_err = oe;
            row.V = safe_V(s, cmd);
            if (k == 0) V0 = row.V;
            row.V_bound = V0 * std::exp(-decay * t);
            row.W_monotone = monotone_since_row;
            monotone_since_row = true;
            rec.rows.push_back(row);
        }
        if (k == steps) break;

        if (cfg.integrator.method == Method::lgvi) {
            const double t1 = t + h;
            const StepResult r = lgvi_step(
                s, u, [&](const BodyState& s1) { return control(t1, s1); }, h, J, cfg.integrator);
            flat = {r.state.R.matrix(), r.state.Omega};
            carried_u = r.u_next;
        } else {
            flat = rk4_step(flat, t, control, h, J, cfg.integrator.method == Method::rk4_projected).state;
        }
    }
    return rec;
}

// ---------------------------------------------------------------------------
// Comparison of two controllers on the same scenario
// ---------------------------------------------------------------------------

inline constexpr std::array<double, 3> kPsiThresholds{1.0, 0.1, 0.01};

struct RunSummary {
    ControllerKind controller = ControllerKind::proposed_tracking;
    /// First time Psi <= each threshold; empty if never reached.
    std::array<std::optional<double>, 3> first_crossing;
    double initial_u_norm = 0.0;
    TrajectoryRecord record;
};

struct ComparisonReport {
    RunSummary a;
    RunSummary b;
    /// Run a crossed the threshold strictly before run b (never = +inf).
    std::array<bool, 3> a_earlier{false, false, false};
};

namespace detail {

inline bool same_scenario(const ScenarioConfig& a, const ScenarioConfig& b) {
    return a.inertia == b.inertia && a.gains == b.gains && a.command == b.command &&
           a.r0_axis == b.r0_axis && a.r0_angle == b.r0_angle && a.omega0 == b.omega0 &&
           a.integrator == b.integrator && a.duration == b.duration && a.log_every == b.log_every;
}

inline bool same_controller(const ScenarioConfig& a, const ScenarioConfig& b) {
    return a.controller == b.controller && a.baseline == b.baseline &&
           a.controller_inertia_override == b.controller_inertia_override;
}

inline RunSummary summarize_run(const ScenarioConfig& cfg) {
    RunSummary out;
    out.controller = cfg.controller;
    out.record = run_scenario(cfg, [&](const StepSample& s) {
        if (s.k == 0) out.initial_u_norm = s.u.norm();
        const double p = psi(s.state.R, s.command.Rd);
        for (std::size_t i = 0; i < kPsiThresholds.size(); ++i) {
            if (!out.first_crossing[i] && p <= kPsiThresholds[i]) out.first_crossing[i] = s.t;
        }
    });
    return out;
}

}  // namespace detail

/// Runs two configurations that differ only in their controller settings,
/// concurrently, and reports Psi threshold crossing times.
inline ComparisonReport compare(const ScenarioConfig& a, const ScenarioConfig& b) {
    if (!detail::same_scenario(a, b)) {
        throw ConfigMismatch("compare: configurations must differ only in controller settings");
    }
    if (detail::same_controller(a, b)) {
        throw ConfigMismatch("compare: configurations are identical");
    }
    auto fut = std::async(std::launch::async, [&] { return detail::summarize_run(b); });
    ComparisonReport rep;
    rep.a = detail::summarize_run(a);
    rep.b = fut.get();
    for (std::size_t i = 0; i < kPsiThresholds.size(); ++i) {
        const auto& ta = rep.a.first_crossing[i];
        const auto& tb = rep.b.first_crossing[i];
        rep.a_earlier[i] = ta && (!tb || *ta < *tb);
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Gain certification report
// ---------------------------------------------------------------------------

struct GainReport {
    Certification certification;  // for the scenario's controller mode, grid-optimal c2
    double c2_max_tracking = 0.0;
    double c2_max_stabilization = 0.0;
    RoaReport roa;
};

inline GainReport check_gains(const ScenarioConfig& cfg) {
    validate(cfg);
    const InertiaMatrix J(cfg.inertia);
    GainReport rep;
    rep.certification = optimal_certification(cfg.gains, J, cert_mode(cfg.controller));
    rep.c2_max_tracking = c2_bound(cfg.gains, J, CertMode::tracking);
    rep.c2_max_stabilization = c2_bound(cfg.gains, J, CertMode::stabilization);
    rep.roa = roa_check(cfg.initial_state(), command_at(0.0, cfg.command), cfg.gains, J);
    return rep;
}

inline void print_gain_report(std::ostream& os, const GainReport& r) {
    char buf[256];
    auto line = [&](const char* key, double v) {
        std::snprintf(buf, sizeof buf, "%-22s %.10g\n", key, v);
        os << buf;
    };
    auto matrix = [&](const char* key, const Mat2& m) {
        std::snprintf(buf, sizeof buf, "%-22s [[%.10g, %.10g], [%.10g, %.10g]]\n", key, m(0, 0),
                      m(0, 1), m(1, 0), m(1, 1));
        os << buf;
    };
    const Certification& c = r.certification;
    os << "mode                   " << to_string(c.mode) << '\n';
    line("c2_max_tracking", r.c2_max_tracking);
    line("c2_max_stabilization", r.c2_max_stabilization);
    if (c.mode == CertMode::stabilization) line("alpha", c.alpha);
    line("c2_max", c.c2_max);
    line("c2_used", c.c2_used);
    matrix("W11", c.W11);
    matrix("W12", c.W12);
    matrix(c.mode == CertMode::tracking ? "W2" : "W2'", c.W2);
    os << "certified              " << (c.certified() ? "true" : "false") << '\n';
    line("decay_rate", c.decay_rate);
    line("psi0", r.roa.psi0);
    os << "psi_ok                 " << (r.roa.psi_ok ? "true" : "false") << '\n';
    line("e_omega0_norm", r.roa.e_omega0_norm);
    line("e_omega_bound", r.roa.e_omega_bound);
    os << "inside                 " << (r.roa.inside ? "true" : "false") << '\n';
}

}  // namespace attctl
