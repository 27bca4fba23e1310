#pragma once

#include "dqteleop/impedance.hpp"

#include <json.hpp>

#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

namespace dqteleop {

inline constexpr int scenario_schema_version = 1;

/// Raised for malformed scenario or script files. `where` is a field path
/// such as "constraints[2].zone" or "line 14".
class ScenarioError : public std::runtime_error {
public:
    ScenarioError(std::string file, std::string where, const std::string& message)
        : std::runtime_error(file + ": " + where + ": " + message), file_(std::move(file)), where_(std::move(where))
    {
    }

    const std::string& file() const { return file_; }
    const std::string& where() const { return where_; }

private:
    std::string file_;
    std::string where_;
};

struct RobotSetup {
    std::string id;
    std::string model_path;
    VectorXd q0;
    /// Rotation taking master-frame vectors into the world frame.
    Quaternion master_alignment = quat::one;
};

struct Scenario {
    std::string name;
    std::string source_path;
    std::string length_unit = "m";
    double duration = 10.0;
    std::uint64_t seed = 0;
    Scene scene;
    std::vector<RobotSetup> robots;
    ControllerConfig controller;
    ImpedanceConfig impedance;
    /// Resolved path of the master script, empty when none.
    std::string script_path;

    std::size_t ticks() const;
    /// Index of a robot by id, or throws std::out_of_range.
    std::size_t robot_index(const std::string& id) const;
    std::vector<VectorXd> initial_q() const;
};

Scenario scenario_from_json(const nlohmann::json& doc, const std::filesystem::path& base_dir,
                            const std::string& file_label = "<scenario>");
/// Throws ScenarioError with a line number for JSON syntax errors and a field path otherwise.
Scenario load_scenario(const std::string& path);

/// Controller parameter by name ("alpha", "beta", "eta", ...); throws std::invalid_argument for unknown names.
void set_controller_param(ControllerConfig& cfg, const std::string& name, double value);

}  // namespace dqteleop
