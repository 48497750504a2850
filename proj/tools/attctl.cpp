// attctl: closed-loop attitude simulations, controller comparisons and gain
// certification reports.
//
//   attctl simulate    --config <file> --out <csv>
//   attctl compare     --config-a <file> --config-b <file> --out <dir>
//   attctl check-gains --config <file>
//
// Exit codes: 0 success, 1 other runtime error, 2 config error, 3 solver divergence.
// ATTCTL_LOG=info|debug sets diagnostic verbosity (stderr).

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "attctl/config.hpp"

namespace fs = std::filesystem;
using namespace attctl;

namespace {

constexpr int kExitRuntime = 1;
constexpr int kExitConfig = 2;
constexpr int kExitDivergence = 3;

void setup_logging() {
    auto logger = spdlog::stderr_color_mt("attctl");
    spdlog::set_default_logger(logger);
    spdlog::set_level(spdlog::level::warn);
    if (const char* env = std::getenv("ATTCTL_LOG")) {
        const std::string level(env);
        if (level == "info") spdlog::set_level(spdlog::level::info);
        else if (level == "debug") spdlog::set_level(spdlog::level::debug);
    }
}

void write_record(const TrajectoryRecord& rec, const fs::path& path) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    rec.write_csv(out);
    spdlog::info("wrote {} rows to {}", rec.rows.size(), path.string());
}

nlohmann::json summary_json(const RunSummary& s) {
    nlohmann::json j;
    j["controller"] = std::string(to_string(s.controller));
    j["initial_u_norm"] = s.initial_u_norm;
    nlohmann::json crossings = nlohmann::json::object();
    constexpr const char* keys[] = {"psi<=1", "psi<=0.1", "psi<=0.01"};
    for (std::size_t i = 0; i < kPsiThresholds.size(); ++i) {
        crossings[keys[i]] = s.first_crossing[i] ? nlohmann::json(*s.first_crossing[i]) : nlohmann::json();
    }
    j["first_crossing"] = crossings;
    return j;
}

int simulate(const std::string& config_path, const std::string& out_path) {
    const ScenarioConfig cfg = load_scenario(config_path);
    spdlog::info("simulate: controller={} method={} h={} duration={}", to_string(cfg.controller),
                 to_string(cfg.integrator.method), cfg.integrator.h, cfg.duration);
    const TrajectoryRecord rec = run_scenario(cfg, [](const StepSample& s) {
        if (s.k % 1000 == 0) spdlog::debug("t={:.3f} psi={:.6g}", s.t, psi(s.state.R, s.command.Rd));
    });
    if (!rec.certification.certified()) spdlog::warn("gain certification failed for this configuration");
    write_record(rec, out_path);
    return 0;
}

int compare_cmd(const std::string& a_path, const std::string& b_path, const std::string& out_dir) {
    const ScenarioConfig a = load_scenario(a_path);
    const ScenarioConfig b = load_scenario(b_path);
    const ComparisonReport rep = compare(a, b);

    fs::create_directories(out_dir);
    write_record(rep.a.record, fs::path(out_dir) / "run_a.csv");
    write_record(rep.b.record, fs::path(out_dir) / "run_b.csv");

    nlohmann::json j;
    j["a"] = summary_json(rep.a);
    j["b"] = summary_json(rep.b);
    j["a_earlier"] = rep.a_earlier;
    std::ofstream(fs::path(out_dir) / "comparison.json") << j.dump(2) << '\n';
    std::cout << j.dump(2) << '\n';
    return 0;
}

int check_gains_cmd(const std::string& config_path) {
    const ScenarioConfig cfg = load_scenario(config_path);
    print_gain_report(std::cout, check_gains(cfg));
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    setup_logging();

    CLI::App app{"Geometric attitude control simulator on SO(3)"};
    app.require_subcommand(1);

    std::string config;
    std::string out;
    auto* sim = app.add_subcommand("simulate", "Run one closed-loop scenario and write a CSV trajectory");
    sim->add_option("--config", config, "Scenario JSON file")->required();
    sim->add_option("--out", out, "Output CSV path")->required();

    std::string config_a;
    std::string config_b;
    std::string out_dir;
    auto* cmp = app.add_subcommand("compare", "Run two scenarios that differ only in controller");
    cmp->add_option("--config-a", config_a, "First scenario JSON file")->required();
    cmp->add_option("--config-b", config_b, "Second scenario JSON file")->required();
    cmp->add_option("--out", out_dir, "Output directory")->required();

    std::string gains_config;
    auto* gains = app.add_subcommand("check-gains", "Print the Lyapunov gain certification and ROA check");
    gains->add_option("--config", gains_config, "Scenario JSON file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : kExitConfig;
    }

    try {
        if (*sim) return simulate(config, out);
        if (*cmp) return compare_cmd(config_a, config_b, out_dir);
        if (*gains) return check_gains_cmd(gains_config);
    } catch (const ConfigInvalid& e) {
        spdlog::error("config error: {}", e.what());
        return kExitConfig;
    } catch (const ConfigMismatch& e) {
        spdlog::error("config error: {}", e.what());
        return kExitConfig;
    } catch (const NewtonDivergence& e) {
        spdlog::error("solver divergence: {}", e.what());
        return kExitDivergence;
    } catch (const std::exception& e) {
        spdlog::error("{}", e.what());
        return kExitRuntime;
    }
    return kExitRuntime;
}
