#pragma once

#include "dqteleop/scenario.hpp"
#include "dqteleop/telemetry.hpp"

#include <json.hpp>

#include <variant>

namespace dqteleop {

struct ParamChange {
    std::string name;
    double value = 0.0;
};

/// Inputs a master side can send: relative device motion or a parameter change.
using InboundMessage = std::variant<MasterCommand, ParamChange>;

/// Message applied before the controller runs at `tick`.
struct ScriptEntry {
    std::size_t tick = 0;
    InboundMessage message;
};

/// Parses a master_cmd or set_param object. Throws std::invalid_argument with a
/// readable reason (unknown type, bad field, master id out of range).
InboundMessage message_from_json(const nlohmann::json& j, std::size_t masters);
nlohmann::json message_to_json(const InboundMessage& msg);

/// Master script: one JSON object per line with "tick" (or "time" in seconds),
/// the message fields, and an optional "repeat" count that re-applies the
/// message on that many consecutive ticks. Entries are returned sorted by tick,
/// keeping file order within a tick. Throws ScenarioError naming the line.
std::vector<ScriptEntry> load_script(const std::string& path, double sampling_time, std::size_t masters);
std::vector<ScriptEntry> parse_script(std::istream& in, const std::string& label, double sampling_time,
                                      std::size_t masters);
void write_script_entry(std::ostream& out, const ScriptEntry& entry);

struct RunSummary {
    std::size_t ticks = 0;
    std::size_t fallback_ticks = 0;
    std::size_t joint_limit_ticks = 0;
    int max_iterations = 0;
    double max_kkt_residual = 0.0;
    /// Per constraint: smallest margin (d - d_safe for restricted, d_safe - d for safe).
    std::vector<double> worst_margin;
    /// Per constraint: largest |J_d qdot + zeta| seen.
    std::vector<double> max_rate;
    std::vector<double> max_force;
};

/// Discrete-time closed loop of the slave robots, master mappings and
/// impedance. Every tick: pending master messages -> targets -> controller at
/// (q_k, t_k) -> reflected forces -> record -> q_{k+1} = q_k + T_s qdot_k.
class Simulator {
public:
    explicit Simulator(Scenario scenario);

    const Scenario& scenario() const { return scenario_; }
    const std::vector<std::string>& columns() const { return columns_; }

    /// Applies a message before the next tick. Throws std::invalid_argument on bad input.
    void apply(const InboundMessage& msg);

    /// Advances one tick and returns its telemetry record.
    const std::vector<double>& step();

    std::size_t tick() const { return tick_; }
    double time() const { return static_cast<double>(tick_) * controller_.config().sampling_time; }
    const std::vector<VectorXd>& q() const { return q_; }
    const ControlOutput& last_output() const { return last_; }
    const std::vector<Vector3>& forces() const { return forces_; }
    const MasterSlaveMapping& mapping(std::size_t master) const { return mappings_.at(master); }
    const ControllerConfig& controller_config() const { return controller_.config(); }
    const ImpedanceConfig& impedance() const { return impedance_; }
    const RunSummary& summary() const { return summary_; }

    /// Snapshot of the last recorded tick for live clients.
    nlohmann::json state_frame() const;

private:
    void build_columns();
    void record();

    Scenario scenario_;
    Controller controller_;
    ImpedanceConfig impedance_;
    std::vector<MasterSlaveMapping> mappings_;
    std::vector<Vector3> pending_dt_;
    std::vector<Vector3> master_velocity_;
    std::vector<VectorXd> q_;
    std::vector<VectorXd> q_recorded_;
    std::vector<Vector3> forces_;
    ControlOutput last_;
    std::vector<std::string> columns_;
    std::vector<double> row_;
    std::size_t tick_ = 0;
    RunSummary summary_;
};

/// Runs `ticks` ticks, applying script entries at their ticks and writing every record.
void run_script(Simulator& sim, const std::vector<ScriptEntry>& script, std::size_t ticks,
                TelemetryWriter* writer);

}  // namespace dqteleop
