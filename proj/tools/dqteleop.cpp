// Command-line front end: run a scenario (scripted or live), check a scenario, plot telemetry.

#include "dqteleop/plot.hpp"
#include "dqteleop/qp.hpp"
#include "dqteleop/scenario.hpp"
#include "dqteleop/server.hpp"
#include "dqteleop/simulator.hpp"

#include <CLI11.hpp>

#include <atomic>
#include <csignal>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>

using namespace dqteleop;

namespace {

std::atomic<bool> interrupted{false};

extern "C" void on_signal(int) { interrupted.store(true); }

struct RunOptions {
    std::string scenario;
    std::string script;
    int serve_port = -1;
    std::string out;
    std::string format;
    double duration = 0.0;
    double ts_ms = 0.0;
    double frame_rate = 50.0;
    double realtime = 1.0;
    std::string record;
    bool quiet = false;
};

void print_summary(const Simulator& sim, std::ostream& os)
{
    const auto& s = sim.summary();
    const auto& sc = sim.scenario();
    os << "ticks: " << s.ticks << " (" << sim.time() << " s)\n";
    os << "fallback ticks: " << s.fallback_ticks << "\n";
    os << "joint limit ticks: " << s.joint_limit_ticks << "\n";
    os << "max QP iterations: " << s.max_iterations << ", max KKT residual: " << s.max_kkt_residual << "\n";
    for (std::size_t k = 0; k < sc.scene.constraints.size(); ++k) {
        os << "  " << sc.scene.constraints[k].name << ": worst margin " << s.worst_margin[k] << " " << sc.length_unit
           << "\n";
    }
    for (std::size_t i = 0; i < s.max_force.size(); ++i) {
        os << "  master " << i << " (" << sc.robots[i].id << "): peak force " << s.max_force[i] << "\n";
    }
}

int run(const RunOptions& o)
{
    auto sc = load_scenario(o.scenario);
    if (o.ts_ms > 0.0) {
        sc.controller.sampling_time = o.ts_ms * 1e-3;
    }
    if (o.duration > 0.0) {
        sc.duration = o.duration;
    }
    const std::size_t ticks = sc.ticks();
    const std::string script_path = o.script.empty() ? sc.script_path : o.script;
    Simulator sim(sc);

    std::ofstream file;
    std::unique_ptr<TelemetryWriter> writer;
    if (!o.out.empty()) {
        file.open(o.out);
        if (!file) {
            throw std::runtime_error("cannot write '" + o.out + "'");
        }
        const auto format = o.format.empty() ? telemetry_format_for(o.out) : parse_telemetry_format(o.format);
        writer = std::make_unique<TelemetryWriter>(file, format, sim.columns());
    }

    if (o.serve_port >= 0) {
        ServerOptions so;
        so.port = o.serve_port;
        so.frame_rate = o.frame_rate;
        so.realtime_factor = o.realtime;
        if (o.duration > 0.0) {
            so.ticks = ticks;
        }
        so.record_path = o.record;
        so.interrupt = &interrupted;
        std::signal(SIGINT, on_signal);
        std::signal(SIGTERM, on_signal);
        SimServer server(sim, so);
        std::cerr << "listening on 127.0.0.1:" << server.port() << std::endl;
        server.run(writer.get());
    } else {
        std::vector<ScriptEntry> script;
        if (!script_path.empty()) {
            script = load_script(script_path, sc.controller.sampling_time, sc.robots.size());
        }
        run_script(sim, script, ticks, writer.get());
    }
    if (!o.quiet) {
        print_summary(sim, std::cout);
    }
    return 0;
}

int validate(const std::string& path)
{
    const auto sc = load_scenario(path);
    std::cout << sc.name << ": " << sc.robots.size() << " robots, " << sc.scene.primitives.size() << " primitives, "
              << sc.scene.constraints.size() << " constraints, " << sc.ticks() << " ticks at "
              << sc.controller.sampling_time * 1e3 << " ms\n";
    for (std::size_t i = 0; i < sc.robots.size(); ++i) {
        const auto& m = sc.scene.robots[i];
        const Vector3 t = translation_of(fkm(m, sc.robots[i].q0));
        std::cout << "  robot " << sc.robots[i].id << ": " << m.dof() << " joints, tip at [" << t.transpose() << "] "
                  << sc.length_unit << "\n";
    }
    if (!sc.script_path.empty()) {
        const auto script = load_script(sc.script_path, sc.controller.sampling_time, sc.robots.size());
        std::cout << "  script " << sc.script_path << ": " << script.size() << " messages\n";
    }

    int warnings = 0;
    Controller controller(sc.scene, sc.controller);
    const auto q = sc.initial_q();
    std::vector<DistanceResult> distances;
    const auto ineq = controller.constraints(q, 0.0, &distances);
    for (std::size_t k = 0; k < sc.scene.constraints.size(); ++k) {
        const auto& c = sc.scene.constraints[k];
        const double e = distance_error(distances[k], c.spec);
        std::cout << "  constraint " << c.name << ": d = " << distances[k].d << ", d_safe = " << c.spec.d_safe << "\n";
        if (e < 0.0) {
            std::cout << "warning: constraint " << c.name << " is violated at the initial configuration (by " << -e
                      << ")\n";
            ++warnings;
        }
    }
    const auto feas = is_feasible(ineq.W, ineq.w);
    if (!feas.feasible) {
        std::cout << "warning: the initial constraint set is infeasible\n";
        ++warnings;
    }
    std::cout << (warnings == 0 ? "ok\n" : "ok with " + std::to_string(warnings) + " warning(s)\n");
    return 0;
}

int plot(const std::string& telemetry, std::string prefix)
{
    const auto table = read_telemetry(telemetry);
    if (prefix.empty()) {
        const auto dot = telemetry.find_last_of('.');
        prefix = dot == std::string::npos ? telemetry : telemetry.substr(0, dot);
    }
    for (const auto& p : write_plots(table, prefix)) {
        std::cout << p << "\n";
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Dual-quaternion constrained teleoperation simulator"};
    app.require_subcommand(1);

    RunOptions ro;
    auto* run_cmd = app.add_subcommand("run", "Simulate a scenario from a master script or a live connection");
    run_cmd->add_option("--scenario", ro.scenario, "Scenario file")->required()->check(CLI::ExistingFile);
    auto* script_opt = run_cmd->add_option("--script", ro.script, "Master script (JSON lines); defaults to the scenario's")
                           ->check(CLI::ExistingFile);
    run_cmd->add_option("--serve", ro.serve_port, "Serve live clients on this port (0 picks one)")
        ->check(CLI::Range(0, 65535))
        ->excludes(script_opt);
    run_cmd->add_option("--out", ro.out, "Telemetry output file");
    run_cmd->add_option("--format", ro.format, "Telemetry format")->check(CLI::IsMember({"csv", "jsonl"}));
    run_cmd->add_option("--duration", ro.duration, "Simulated seconds (overrides the scenario)")
        ->check(CLI::PositiveNumber);
    run_cmd->add_option("--ts", ro.ts_ms, "Sampling time in milliseconds (overrides the scenario)")
        ->check(CLI::PositiveNumber);
    run_cmd->add_option("--frame-rate", ro.frame_rate, "State frames per simulated second when serving")
        ->check(CLI::PositiveNumber);
    run_cmd->add_option("--realtime", ro.realtime, "Pacing when serving: simulated seconds per second, 0 unpaced")
        ->check(CLI::NonNegativeNumber);
    run_cmd->add_option("--record", ro.record, "When serving, write received messages as a replayable script");
    run_cmd->add_flag("--quiet", ro.quiet, "No summary");

    std::string validate_path;
    auto* validate_cmd = app.add_subcommand("validate", "Load a scenario and report problems");
    validate_cmd->add_option("--scenario", validate_path, "Scenario file")->required()->check(CLI::ExistingFile);

    std::string telemetry;
    std::string prefix;
    auto* plot_cmd = app.add_subcommand("plot", "Write distance, force and trajectory plots (SVG)");
    plot_cmd->add_option("--telemetry", telemetry, "Telemetry file (csv or jsonl)")->required()->check(CLI::ExistingFile);
    plot_cmd->add_option("--prefix", prefix, "Output path prefix (default: telemetry path without extension)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*run_cmd) {
            return run(ro);
        }
        if (*validate_cmd) {
            return validate(validate_path);
        }
        return plot(telemetry, prefix);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
