#include "dqteleop/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>

namespace dqteleop {

using nlohmann::json;

namespace {

Vector3 json_vec3(const json& j, const char* field)
{
    if (!j.is_array() || j.size() != 3) {
        throw std::invalid_argument(std::string("'") + field + "' must be an array of 3 numbers");
    }
    Vector3 v;
    for (int i = 0; i < 3; ++i) {
        if (!j.at(i).is_number()) {
            throw std::invalid_argument(std::string("'") + field + "' must be an array of 3 numbers");
        }
        v(i) = j.at(i).get<double>();
    }
    if (!v.allFinite()) {
        throw std::invalid_argument(std::string("'") + field + "' must be finite");
    }
    return v;
}

Quaternion json_quat(const json& j, const char* field)
{
    if (!j.is_array() || j.size() != 4) {
        throw std::invalid_argument(std::string("'") + field + "' must be an array of 4 numbers");
    }
    Vector4 v;
    for (int i = 0; i < 4; ++i) {
        if (!j.at(i).is_number()) {
            throw std::invalid_argument(std::string("'") + field + "' must be an array of 4 numbers");
        }
        v(i) = j.at(i).get<double>();
    }
    return Quaternion::from_vec4(v);
}

std::vector<double> to_vector(const Vector3& v) { return {v.x(), v.y(), v.z()}; }

}  // namespace

InboundMessage message_from_json(const json& j, std::size_t masters)
{
    if (!j.is_object()) {
        throw std::invalid_argument("message must be a JSON object");
    }
    const std::string type = j.value("type", std::string("master_cmd"));
    if (type == "master_cmd") {
        MasterCommand cmd;
        if (!j.contains("master_id") || !j.at("master_id").is_number_integer()) {
            throw std::invalid_argument("master_cmd needs an integer 'master_id'");
        }
        cmd.master_id = j.at("master_id").get<int>();
        if (cmd.master_id < 0 || static_cast<std::size_t>(cmd.master_id) >= masters) {
            throw std::invalid_argument("master_id " + std::to_string(cmd.master_id) + " out of range");
        }
        if (!j.contains("clutch") || !j.at("clutch").is_boolean()) {
            throw std::invalid_argument("master_cmd needs a boolean 'clutch'");
        }
        cmd.clutch = j.at("clutch").get<bool>();
        if (j.contains("dt")) {
            cmd.dt = json_vec3(j.at("dt"), "dt");
        }
        if (j.contains("dr")) {
            cmd.dr = json_quat(j.at("dr"), "dr");
            if (!cmd.dr.is_unit(1e-6)) {
                throw std::invalid_argument("'dr' must be a unit quaternion");
            }
        }
        return cmd;
    }
    if (type == "set_param") {
        if (!j.contains("name") || !j.at("name").is_string()) {
            throw std::invalid_argument("set_param needs a string 'name'");
        }
        ParamChange p{j.at("name").get<std::string>(), 0.0};
        const auto& v = j.contains("value") ? j.at("value") : json();
        if (v.is_boolean()) {
            p.value = v.get<bool>() ? 1.0 : 0.0;
        } else if (v.is_number()) {
            p.value = v.get<double>();
        } else {
            throw std::invalid_argument("set_param needs a numeric or boolean 'value'");
        }
        return p;
    }
    throw std::invalid_argument("unknown message type '" + type + "'");
}

json message_to_json(const InboundMessage& msg)
{
    if (const auto* cmd = std::get_if<MasterCommand>(&msg)) {
        return {{"type", "master_cmd"},
                {"master_id", cmd->master_id},
                {"clutch", cmd->clutch},
                {"dt", to_vector(cmd->dt)},
                {"dr", {cmd->dr.w(), cmd->dr.x(), cmd->dr.y(), cmd->dr.z()}}};
    }
    const auto& p = std::get<ParamChange>(msg);
    return {{"type", "set_param"}, {"name", p.name}, {"value", p.value}};
}

std::vector<ScriptEntry> parse_script(std::istream& in, const std::string& label, double sampling_time,
                                      std::size_t masters)
{
    std::vector<ScriptEntry> entries;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos) {
            continue;
        }
        const std::string where = "line " + std::to_string(lineno);
        json j;
        try {
            j = json::parse(line);
        } catch (const json::parse_error&) {
            throw ScenarioError(label, where, "JSON syntax error");
        }
        try {
            std::size_t tick = 0;
            if (j.contains("tick")) {
                if (!j.at("tick").is_number_unsigned()) {
                    throw std::invalid_argument("'tick' must be a non-negative integer");
                }
                tick = j.at("tick").get<std::size_t>();
            } else if (j.contains("time")) {
                const double t = j.at("time").get<double>();
                if (!(t >= 0.0)) {
                    throw std::invalid_argument("'time' must be non-negative");
                }
                tick = static_cast<std::size_t>(std::llround(t / sampling_time));
            } else {
                throw std::invalid_argument("entry needs 'tick' or 'time'");
            }
            std::size_t repeat = 1;
            if (j.contains("repeat")) {
                if (!j.at("repeat").is_number_unsigned() || j.at("repeat").get<std::size_t>() == 0) {
                    throw std::invalid_argument("'repeat' must be a positive integer");
                }
                repeat = j.at("repeat").get<std::size_t>();
            }
            const InboundMessage msg = message_from_json(j, masters);
            for (std::size_t k = 0; k < repeat; ++k) {
                entries.push_back({tick + k, msg});
            }
        } catch (const std::exception& e) {
            throw ScenarioError(label, where, e.what());
        }
    }
    std::stable_sort(entries.begin(), entries.end(),
                     [](const ScriptEntry& a, const ScriptEntry& b) { return a.tick < b.tick; });
    return entries;
}

std::vector<ScriptEntry> load_script(const std::string& path, double sampling_time, std::size_t masters)
{
    std::ifstream in(path);
    if (!in) {
        throw ScenarioError(path, "<file>", "cannot open script");
    }
    return parse_script(in, path, sampling_time, masters);
}

void write_script_entry(std::ostream& out, const ScriptEntry& entry)
{
    json j = message_to_json(entry.message);
    j["tick"] = entry.tick;
    out << j.dump() << '\n';
}

Simulator::Simulator(Scenario scenario)
    : scenario_(std::move(scenario)),
      controller_(scenario_.scene, scenario_.controller),
      impedance_(scenario_.impedance),
      q_(scenario_.initial_q())
{
    const std::size_t robots = scenario_.robots.size();
    for (std::size_t i = 0; i < robots; ++i) {
        const auto x = fkm(scenario_.scene.robots[i], q_[i]);
        const TaskTarget start{x.primary(), translation_of(x)};
        mappings_.emplace_back(start, scenario_.robots[i].master_alignment, scenario_.controller.motion_scaling);
    }
    q_recorded_ = q_;
    pending_dt_.assign(robots, Vector3::Zero());
    master_velocity_.assign(robots, Vector3::Zero());
    forces_.assign(robots, Vector3::Zero());
    const std::size_t ncons = scenario_.scene.constraints.size();
    summary_.worst_margin.assign(ncons, std::numeric_limits<double>::infinity());
    summary_.max_rate.assign(ncons, 0.0);
    summary_.max_force.assign(robots, 0.0);
    build_columns();
}

void Simulator::build_columns()
{
    columns_ = {"tick", "time", "beta", "alpha"};
    for (std::size_t i = 0; i < scenario_.robots.size(); ++i) {
        const auto& id = scenario_.robots[i].id;
        const int n = scenario_.scene.robots[i].dof();
        for (int j = 0; j < n; ++j) {
            columns_.push_back(id + ".q" + std::to_string(j));
        }
        for (int j = 0; j < n; ++j) {
            columns_.push_back(id + ".qd" + std::to_string(j));
        }
        for (const char* group : {".t.", ".td.", ".terr."}) {
            for (const char* axis : {"x", "y", "z"}) {
                columns_.push_back(id + group + axis);
            }
        }
        columns_.push_back(id + ".rerr");
    }
    for (const auto& c : scenario_.scene.constraints) {
        for (const char* field : {".d", ".d_safe", ".slack", ".rate"}) {
            columns_.push_back("c:" + c.name + field);
        }
    }
    for (const char* field : {"qp.status", "qp.iterations", "qp.kkt", "qp.fallback", "joint_limit"}) {
        columns_.push_back(field);
    }
    for (std::size_t i = 0; i < scenario_.robots.size(); ++i) {
        const std::string m = "m" + std::to_string(i);
        for (const char* field : {".force.x", ".force.y", ".force.z", ".clutch"}) {
            columns_.push_back(m + field);
        }
    }
    row_.reserve(columns_.size());
}

void Simulator::apply(const InboundMessage& msg)
{
    if (const auto* cmd = std::get_if<MasterCommand>(&msg)) {
        if (cmd->master_id < 0 || static_cast<std::size_t>(cmd->master_id) >= mappings_.size()) {
            throw std::invalid_argument("master_id out of range");
        }
        const auto m = static_cast<std::size_t>(cmd->master_id);
        mappings_[m].apply(*cmd);
        pending_dt_[m] += cmd->dt;
        return;
    }
    const auto& p = std::get<ParamChange>(msg);
    if (!std::isfinite(p.value)) {
        throw std::invalid_argument("parameter '" + p.name + "' must be finite");
    }
    if (p.name.rfind("clutch.", 0) == 0) {
        std::size_t m = 0;
        try {
            m = std::stoul(p.name.substr(7));
        } catch (const std::exception&) {
            throw std::invalid_argument("bad clutch parameter '" + p.name + "'");
        }
        if (m >= mappings_.size()) {
            throw std::invalid_argument("clutch parameter for unknown master " + std::to_string(m));
        }
        mappings_[m].set_engaged(p.value != 0.0);
        return;
    }
    if (p.name == "eta_f" || p.name == "eta_v") {
        ImpedanceConfig next = impedance_;
        (p.name == "eta_f" ? next.eta_f : next.eta_v) = p.value;
        next.validate();
        impedance_ = next;
        return;
    }
    ControllerConfig cfg = controller_.config();
    set_controller_param(cfg, p.name, p.value);
    if (p.name == "eta_d") {
        controller_.set_constraint_gain(p.value);
    }
    if (p.name == "motion_scaling") {
        for (auto& m : mappings_) {
            m.set_motion_scaling(p.value);
        }
    }
    controller_.set_config(cfg);
}

const std::vector<double>& Simulator::step()
{
    const double ts = controller_.config().sampling_time;
    const double t = time();
    std::vector<TaskTarget> targets;
    targets.reserve(mappings_.size());
    for (const auto& m : mappings_) {
        targets.push_back(m.target());
    }

    last_ = controller_.step(q_, targets, t);

    const double to_metres = scenario_.length_unit == "mm" ? 1e-3 : 1.0;
    for (std::size_t i = 0; i < mappings_.size(); ++i) {
        master_velocity_[i] = pending_dt_[i] / ts;
        const Vector3 e = master_error(mappings_[i], last_.robots[i].t, last_.robots[i].t_d);
        // Gains are per metre whatever the scenario length unit.
        forces_[i] = master_force(to_metres * e, to_metres * master_velocity_[i], impedance_);
    }

    record();
    q_recorded_ = q_;

    for (std::size_t i = 0; i < q_.size(); ++i) {
        q_[i] += ts * last_.qdot[i];
        pending_dt_[i].setZero();
    }
    ++tick_;
    return row_;
}

void Simulator::record()
{
    const auto& cfg = controller_.config();
    row_.clear();
    row_.push_back(static_cast<double>(tick_));
    row_.push_back(time());
    row_.push_back(cfg.beta);
    row_.push_back(cfg.alpha);
    for (std::size_t i = 0; i < q_.size(); ++i) {
        const auto& rep = last_.robots[i];
        row_.insert(row_.end(), q_[i].data(), q_[i].data() + q_[i].size());
        row_.insert(row_.end(), last_.qdot[i].data(), last_.qdot[i].data() + last_.qdot[i].size());
        for (const Vector3* v : {&rep.t, &rep.t_d, &rep.t_error}) {
            row_.insert(row_.end(), v->data(), v->data() + 3);
        }
        row_.push_back(rep.r_error.norm());
    }
    const auto& cons = scenario_.scene.constraints;
    for (std::size_t k = 0; k < cons.size(); ++k) {
        const auto& c = last_.constraints[k];
        row_.insert(row_.end(), {c.d, c.d_safe, c.slack, c.rate});
        const double margin = cons[k].spec.zone == Zone::restricted ? c.d - c.d_safe : c.d_safe - c.d;
        summary_.worst_margin[k] = std::min(summary_.worst_margin[k], margin);
        summary_.max_rate[k] = std::max(summary_.max_rate[k], std::abs(c.rate));
    }
    row_.push_back(static_cast<double>(static_cast<int>(last_.status)));
    row_.push_back(last_.iterations);
    row_.push_back(last_.kkt_residual);
    row_.push_back(last_.fallback ? 1.0 : 0.0);
    row_.push_back(last_.joint_limit_violation ? 1.0 : 0.0);
    for (std::size_t i = 0; i < mappings_.size(); ++i) {
        row_.insert(row_.end(), forces_[i].data(), forces_[i].data() + 3);
        row_.push_back(mappings_[i].engaged() ? 1.0 : 0.0);
        summary_.max_force[i] = std::max(summary_.max_force[i], forces_[i].norm());
    }

    ++summary_.ticks;
    summary_.fallback_ticks += last_.fallback ? 1 : 0;
    summary_.joint_limit_ticks += last_.joint_limit_violation ? 1 : 0;
    summary_.max_iterations = std::max(summary_.max_iterations, last_.iterations);
    if (!last_.fallback) {
        summary_.max_kkt_residual = std::max(summary_.max_kkt_residual, last_.kkt_residual);
    }
}

json Simulator::state_frame() const
{
    const auto& cfg = controller_.config();
    json frame;
    frame["type"] = "state_frame";
    // The record describes the tick that was just completed.
    const std::size_t shown = tick_ == 0 ? 0 : tick_ - 1;
    frame["tick"] = shown;
    frame["time"] = static_cast<double>(shown) * cfg.sampling_time;
    frame["length_unit"] = scenario_.length_unit;
    frame["poses"] = json::array();
    for (std::size_t i = 0; i < scenario_.robots.size() && !last_.robots.empty(); ++i) {
        const auto& model = scenario_.scene.robots[i];
        const auto& rep = last_.robots[i];
        const auto& target = mappings_[i].target();
        json links = json::array();
        const VectorXd& q_rec = q_recorded_[i];
        for (int l = 0; l <= model.dof(); ++l) {
            links.push_back(to_vector(translation_of(fkm(model, q_rec, l))));
        }
        links.push_back(to_vector(rep.t));
        const auto r = fkm(model, q_rec).primary();
        frame["poses"].push_back({{"robot", scenario_.robots[i].id},
                                  {"t", to_vector(rep.t)},
                                  {"r", {r.w(), r.x(), r.y(), r.z()}},
                                  {"t_d", to_vector(target.t_d)},
                                  {"r_d", {target.r_d.w(), target.r_d.x(), target.r_d.y(), target.r_d.z()}},
                                  {"links", links}});
    }
    frame["distances"] = json::object();
    frame["d_safe"] = json::object();
    frame["slacks"] = json::object();
    for (std::size_t k = 0; k < last_.constraints.size(); ++k) {
        const auto& name = scenario_.scene.constraints[k].name;
        frame["distances"][name] = last_.constraints[k].d;
        frame["d_safe"][name] = last_.constraints[k].d_safe;
        frame["slacks"][name] = last_.constraints[k].slack;
    }
    frame["forces"] = json::array();
    frame["clutch"] = json::array();
    for (std::size_t i = 0; i < mappings_.size(); ++i) {
        frame["forces"].push_back(to_vector(forces_[i]));
        frame["clutch"].push_back(mappings_[i].engaged());
    }
    frame["qp_status"] = std::string(to_string(last_.status));
    frame["params"] = {{"alpha", cfg.alpha},
                       {"beta", cfg.beta},
                       {"eta", cfg.eta},
                       {"eta_d", cfg.eta_d},
                       {"motion_scaling", cfg.motion_scaling},
                       {"eta_f", impedance_.eta_f},
                       {"eta_v", impedance_.eta_v}};
    return frame;
}

void run_script(Simulator& sim, const std::vector<ScriptEntry>& script, std::size_t ticks, TelemetryWriter* writer)
{
    std::size_t next = 0;
    for (std::size_t k = 0; k < ticks; ++k) {
        const std::size_t tick = sim.tick();
        while (next < script.size() && script[next].tick < tick) {
            ++next;  // entries scheduled before the simulator's current tick are stale
        }
        while (next < script.size() && script[next].tick == tick) {
            sim.apply(script[next].message);
            ++next;
        }
        const auto& row = sim.step();
        if (writer) {
            writer->write(row);
        }
    }
}

}  // namespace dqteleop
