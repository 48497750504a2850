#pragma once

#include <fstream>
#include <set>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

#include "attctl/scenario.hpp"

namespace attctl {

// Scenario files are JSON objects:
//
//   {
//     "inertia": [3, 2, 1],                      // principal moments or 3x3 rows
//     "gains": {"k_R": 12, "k_Omega": 8.4},
//     "command": {"kind": "euler_tracking", "phi": [c0, c1, c2], "theta": [...], "psi": [...]}
//             |  {"kind": "fixed", "axis": [x, y, z], "angle_rad": a},
//     "initial": {"R0": {"axis": [x, y, z], "angle_rad": a}, "Omega0": [wx, wy, wz]},
//     "controller": "proposed_tracking" | "inertia_free" | "baseline",
//     "baseline": {"feedforward": true, "error_scale": 1.0},               // optional
//     "integrator": {"method": "lgvi", "h": 0.001,
//                    "newton_tol": 1e-14, "newton_max_iter": 50},          // optional
//     "duration": 10,
//     "log_every": 10,                                                     // optional
//     "controller_inertia_override": null | [..]                           // optional
//   }

namespace detail {

using json = nlohmann::json;

inline void reject_unknown(const json& j, const std::string& where, std::set<std::string> allowed) {
    for (const auto& [key, _] : j.items()) {
        if (!allowed.count(key)) throw ConfigInvalid(where + key, "unknown field");
    }
}

inline const json& require(const json& j, const std::string& where, const char* key) {
    if (!j.is_object() || !j.contains(key)) throw ConfigInvalid(where + key, "missing");
    return j.at(key);
}

inline double number(const json& j, const std::string& field) {
    if (!j.is_number()) throw ConfigInvalid(field, "expected a number");
    const double v = j.get<double>();
    if (!std::isfinite(v)) throw ConfigInvalid(field, "must be finite");
    return v;
}

inline Vec3 vec3(const json& j, const std::string& field) {
    if (!j.is_array() || j.size() != 3) throw ConfigInvalid(field, "expected an array of 3 numbers");
    return Vec3(number(j[0], field + "[0]"), number(j[1], field + "[1]"), number(j[2], field + "[2]"));
}

inline Mat3 inertia(const json& j, const std::string& field) {
    if (!j.is_array() || j.size() != 3) {
        throw ConfigInvalid(field, "expected 3 principal moments or a 3x3 matrix");
    }
    Mat3 m;
    if (j[0].is_array()) {
        for (int r = 0; r < 3; ++r) m.row(r) = vec3(j[r], field + "[" + std::to_string(r) + "]");
    } else {
        const Vec3 d = vec3(j, field);
        if ((d.array() <= 0.0).any()) throw ConfigInvalid(field, "principal moments must be positive");
        m = d.asDiagonal();
    }
    try {
        InertiaMatrix{m};
    } catch (const InvalidInertia& e) {
        throw ConfigInvalid(field, e.what());
    }
    return m;
}

inline std::pair<Vec3, double> axis_angle(const json& j, const std::string& field) {
    const Vec3 axis = vec3(require(j, field + ".", "axis"), field + ".axis");
    const double angle = number(require(j, field + ".", "angle_rad"), field + ".angle_rad");
    if (std::abs(axis.norm() - 1.0) > 1e-9) throw ConfigInvalid(field + ".axis", "must be a unit vector");
    return {axis.normalized(), angle};
}

inline Quadratic quadratic(const json& j, const std::string& field) {
    const Vec3 c = vec3(j, field);
    return Quadratic{{c(0), c(1), c(2)}};
}

inline CommandSpec command(const json& j) {
    const std::string where = "command.";
    const json& kind = require(j, where, "kind");
    if (kind == "euler_tracking") {
        reject_unknown(j, where, {"kind", "phi", "theta", "psi"});
        return CommandSpec::euler(quadratic(require(j, where, "phi"), "command.phi"),
                                  quadratic(require(j, where, "theta"), "command.theta"),
                                  quadratic(require(j, where, "psi"), "command.psi"));
    }
    if (kind == "fixed") {
        reject_unknown(j, where, {"kind", "axis", "angle_rad"});
        const auto [axis, angle] = axis_angle(j, "command");
        return CommandSpec::fixed_axis_angle(axis, angle);
    }
    throw ConfigInvalid("command.kind", "expected \"euler_tracking\" or \"fixed\"");
}

inline ControllerKind controller(const json& j) {
    if (j == "proposed_tracking") return ControllerKind::proposed_tracking;
    if (j == "inertia_free") return ControllerKind::inertia_free;
    if (j == "baseline") return ControllerKind::baseline;
    throw ConfigInvalid("controller", "expected proposed_tracking, inertia_free or baseline");
}

inline IntegratorConfig integrator(const json& j) {
    IntegratorConfig c;
    reject_unknown(j, "integrator.", {"method", "h", "newton_tol", "newton_max_iter"});
    if (j.contains("method")) {
        const json& m = j["method"];
        if (m == "lgvi") c.method = Method::lgvi;
        else if (m == "rk4") c.method = Method::rk4;
        else if (m == "rk4_projected") c.method = Method::rk4_projected;
        else throw ConfigInvalid("integrator.method", "expected lgvi, rk4 or rk4_projected");
    }
    if (j.contains("h")) c.h = number(j["h"], "integrator.h");
    if (j.contains("newton_tol")) c.newton_tol = number(j["newton_tol"], "integrator.newton_tol");
    if (j.contains("newton_max_iter")) {
        if (!j["newton_max_iter"].is_number_integer()) {
            throw ConfigInvalid("integrator.newton_max_iter", "expected an integer");
        }
        c.newton_max_iter = j["newton_max_iter"].get<int>();
    }
    if (!(c.h > 0.0)) throw ConfigInvalid("integrator.h", "must be > 0");
    if (!(c.newton_tol > 0.0)) throw ConfigInvalid("integrator.newton_tol", "must be > 0");
    if (c.newton_max_iter < 1) throw ConfigInvalid("integrator.newton_max_iter", "must be >= 1");
    return c;
}

}  // namespace detail

inline ScenarioConfig parse_scenario(const nlohmann::json& j) {
    using detail::require;
    if (!j.is_object()) throw ConfigInvalid("<root>", "expected a JSON object");
    detail::reject_unknown(j, "", {"inertia", "gains", "command", "initial", "controller", "baseline",
                                   "integrator", "duration", "log_every",
                                   "controller_inertia_override"});
    ScenarioConfig c;
    c.inertia = detail::inertia(require(j, "", "inertia"), "inertia");

    const auto& gains = require(j, "", "gains");
    detail::reject_unknown(gains, "gains.", {"k_R", "k_Omega"});
    const double kr = detail::number(require(gains, "gains.", "k_R"), "gains.k_R");
    const double kw = detail::number(require(gains, "gains.", "k_Omega"), "gains.k_Omega");
    if (!(kr > 0.0)) throw ConfigInvalid("gains.k_R", "must be > 0");
    if (!(kw > 0.0)) throw ConfigInvalid("gains.k_Omega", "must be > 0");
    c.gains = GainSet(kr, kw);

    c.command = detail::command(require(j, "", "command"));

    const auto& init = require(j, "", "initial");
    detail::reject_unknown(init, "initial.", {"R0", "Omega0"});
    const auto& r0 = require(init, "initial.", "R0");
    detail::reject_unknown(r0, "initial.R0.", {"axis", "angle_rad"});
    std::tie(c.r0_axis, c.r0_angle) = detail::axis_angle(r0, "initial.R0");
    c.omega0 = detail::vec3(require(init, "initial.", "Omega0"), "initial.Omega0");

    c.controller = detail::controller(require(j, "", "controller"));

    if (j.contains("baseline")) {
        const auto& b = j["baseline"];
        detail::reject_unknown(b, "baseline.", {"feedforward", "error_scale"});
        if (b.contains("feedforward")) {
            if (!b["feedforward"].is_boolean()) throw ConfigInvalid("baseline.feedforward", "expected a boolean");
            c.baseline.feedforward = b["feedforward"].get<bool>();
        }
        if (b.contains("error_scale")) {
            c.baseline.error_scale = detail::number(b["error_scale"], "baseline.error_scale");
            if (!(c.baseline.error_scale > 0.0)) throw ConfigInvalid("baseline.error_scale", "must be > 0");
        }
    }

    if (j.contains("integrator")) c.integrator = detail::integrator(j["integrator"]);

    c.duration = detail::number(require(j, "", "duration"), "duration");
    if (!(c.duration > 0.0)) throw ConfigInvalid("duration", "must be > 0");

    if (j.contains("log_every")) {
        if (!j["log_every"].is_number_integer()) throw ConfigInvalid("log_every", "expected an integer");
        c.log_every = j["log_every"].get<int>();
        if (c.log_every < 1) throw ConfigInvalid("log_every", "must be >= 1");
    }

    if (j.contains("controller_inertia_override") && !j["controller_inertia_override"].is_null()) {
        c.controller_inertia_override =
            detail::inertia(j["controller_inertia_override"], "controller_inertia_override");
    }
    validate(c);
    return c;
}

inline ScenarioConfig parse_scenario(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigInvalid("<root>", std::string("malformed JSON: ") + e.what());
    }
    return parse_scenario(j);
}

inline ScenarioConfig load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigInvalid("<file>", "cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_scenario(ss.str());
}

}  // namespace attctl
