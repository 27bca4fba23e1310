#include "dqteleop/controller.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace dqteleop {

namespace {

void require(bool ok, const char* message)
{
    if (!ok) {
        throw std::invalid_argument(message);
    }
}

}  // namespace

void ControllerConfig::validate() const
{
    require(alpha >= 0.0 && alpha <= 1.0, "controller: alpha must be in [0, 1]");
    require(beta >= 0.0 && beta <= 1.0, "controller: beta must be in [0, 1]");
    require(eta > 0.0, "controller: eta must be positive");
    require(lambda_r >= 0.0 && lambda_f >= 0.0, "controller: damping must be non-negative");
    require(eta_d >= 0.0, "controller: eta_d must be non-negative");
    require(sampling_time > 0.0, "controller: sampling_time must be positive");
    require(motion_scaling > 0.0, "controller: motion_scaling must be positive");
    require(beta_floor > 0.0 && beta_floor < 0.5, "controller: beta_floor must be in (0, 0.5)");
}

Vector4 switching_rotation_error(const Quaternion& r, const Quaternion& r_d)
{
    if (!r.is_unit() || !r_d.is_unit()) {
        throw std::invalid_argument("switching_rotation_error: rotations must be unit quaternions");
    }
    const Vector4 e = vec4(r.conj() * r_d);
    Vector4 minus = e;
    minus(0) -= 1.0;
    Vector4 plus = e;
    plus(0) += 1.0;
    return minus.norm() < plus.norm() ? minus : plus;
}

MatrixXd damping_matrix(const RobotModel& model, const ControllerConfig& cfg)
{
    const int n = model.dof();
    const int nf = model.forceps_joints();
    VectorXd diag(n);
    diag.head(n - nf).setConstant(cfg.lambda_r);
    diag.tail(nf).setConstant(cfg.lambda_f);
    return diag.asDiagonal();
}

std::vector<double> priority_weights(const ControllerConfig& cfg, std::size_t robots)
{
    if (robots != 2) {
        return std::vector<double>(robots, 1.0);
    }
    return {std::max(cfg.beta, cfg.beta_floor), std::max(1.0 - cfg.beta, cfg.beta_floor)};
}

Objective build_objective(const std::vector<RobotModel>& robots, const std::vector<RobotTaskState>& states,
                          const std::vector<TaskTarget>& targets, const ControllerConfig& cfg)
{
    if (states.size() != robots.size() || targets.size() != robots.size()) {
        throw std::invalid_argument("build_objective: one state and one target per robot required");
    }
    int total = 0;
    for (const auto& r : robots) {
        total += r.dof();
    }
    Objective obj{MatrixXd::Zero(total, total), VectorXd::Zero(total)};
    const auto b = priority_weights(cfg, robots.size());

    int offset = 0;
    for (std::size_t i = 0; i < robots.size(); ++i) {
        const int n = robots[i].dof();
        const auto& s = states[i];
        if (s.pose_jacobian.rows() != 8 || s.pose_jacobian.cols() != n) {
            throw std::invalid_argument("build_objective: pose Jacobian of robot " + std::to_string(i) +
                                        " must be 8 x " + std::to_string(n));
        }
        const MatrixXd jt = translation_jacobian(s.pose, s.pose_jacobian);
        // Jacobian of the rotation error r* r_d, which has the same Gram matrix as J_r.
        const MatrixXd jr = hamilton_minus4(targets[i].r_d) * conj_matrix4() * rotation_jacobian(s.pose_jacobian);
        const MatrixXd lambda = damping_matrix(robots[i], cfg);

        const Vector3 t_err = translation_of(s.pose) - targets[i].t_d;
        const Vector4 r_err = switching_rotation_error(s.pose.primary(), targets[i].r_d);

        obj.H.block(offset, offset, n, n) = 2.0 * b[i] *
                                            (cfg.alpha * jt.transpose() * jt + (1.0 - cfg.alpha) * jr.transpose() * jr +
                                             lambda.transpose() * lambda);
        obj.f.segment(offset, n) =
            2.0 * cfg.eta * b[i] * (cfg.alpha * jt.transpose() * t_err + (1.0 - cfg.alpha) * jr.transpose() * r_err);
        offset += n;
    }
    // Round-off can leave the blocks a few ulps from symmetric.
    obj.H = 0.5 * (obj.H + obj.H.transpose()).eval();
    return obj;
}

Objective damped_task_objective(const MatrixXd& task_jacobian, const VectorXd& task_error, double eta,
                                double lambda)
{
    if (task_jacobian.rows() != task_error.size()) {
        throw std::invalid_argument("damped_task_objective: Jacobian rows must match the error size");
    }
    if (eta <= 0.0 || lambda < 0.0) {
        throw std::invalid_argument("damped_task_objective: eta must be positive and lambda non-negative");
    }
    const auto n = task_jacobian.cols();
    return {2.0 * (task_jacobian.transpose() * task_jacobian + lambda * MatrixXd::Identity(n, n)),
            2.0 * eta * task_jacobian.transpose() * task_error};
}

Controller::Controller(Scene scene, ControllerConfig cfg) : scene_(std::move(scene)), cfg_(cfg)
{
    scene_.validate();
    cfg_.validate();
    layout_ = scene_.layout();
}

void Controller::set_config(const ControllerConfig& cfg)
{
    cfg.validate();
    cfg_ = cfg;
}

void Controller::set_constraint_gain(double eta_d)
{
    if (!(eta_d >= 0.0)) {
        throw std::invalid_argument("eta_d must be non-negative");
    }
    for (auto& c : scene_.constraints) {
        c.spec.eta_d = eta_d;
    }
}

LinearInequalities Controller::constraints(const std::vector<VectorXd>& q, double time,
                                           std::vector<DistanceResult>* distances) const
{
    std::vector<PrimitiveState> prims;
    prims.reserve(scene_.primitives.size());
    for (const auto& p : scene_.primitives) {
        prims.push_back(evaluate_primitive(scene_, p, q, time));
    }

    if (distances) {
        distances->clear();
    }
    std::vector<ConstraintRow> rows;
    rows.reserve(scene_.constraints.size() + 4 * static_cast<std::size_t>(layout_.total()));
    for (const auto& c : scene_.constraints) {
        const DistanceResult res = evaluate_distance(prims[c.first], prims[c.second]);
        ConstraintSpec spec = c.spec;
        spec.d_safe = d_safe_at(c.spec, time);
        rows.push_back(vfi_row(res, spec));
        if (distances) {
            distances->push_back(res);
        }
    }
    for (std::size_t i = 0; cfg_.joint_limits && i < scene_.robots.size(); ++i) {
        const auto state = scene_.robots[i].initial_state(q[i]);
        auto jl = joint_limit_rows(state, cfg_.joint_limit_gain(), i);
        std::move(jl.begin(), jl.end(), std::back_inserter(rows));
    }
    return assemble(rows, layout_);
}

ControlOutput Controller::step(const std::vector<VectorXd>& q, const std::vector<TaskTarget>& targets, double time)
{
    const std::size_t robots = scene_.robots.size();
    if (q.size() != robots || targets.size() != robots) {
        throw std::invalid_argument("Controller::step: one joint vector and one target per robot required");
    }

    ControlOutput out;
    std::vector<RobotTaskState> states;
    states.reserve(robots);
    for (std::size_t i = 0; i < robots; ++i) {
        const auto& model = scene_.robots[i];
        states.push_back({fkm(model, q[i]), pose_jacobian(model, q[i])});
        RobotReport rep;
        rep.t = translation_of(states.back().pose);
        rep.t_d = targets[i].t_d;
        rep.t_error = rep.t - rep.t_d;
        rep.r_error = switching_rotation_error(states.back().pose.primary(), targets[i].r_d);
        out.robots.push_back(rep);
        out.joint_limit_violation = out.joint_limit_violation || !model.initial_state(q[i]).within_limits();
    }

    std::vector<DistanceResult> distances;
    distances.reserve(scene_.constraints.size());
    const LinearInequalities lin = constraints(q, time, &distances);
    const Objective obj = build_objective(scene_.robots, states, targets, cfg_);

    const QpSolution sol = solver_.solve({obj.H, obj.f, lin.W, lin.w});
    out.status = sol.status;
    out.iterations = sol.iterations;
    out.kkt_residual = sol.kkt_residual;

    VectorXd qdot = sol.x;
    if (sol.status != QpStatus::optimal) {
        qdot = VectorXd::Zero(layout_.total());
        out.fallback = true;
        solver_.reset();
    }

    for (std::size_t i = 0; i < robots; ++i) {
        out.qdot.push_back(qdot.segment(layout_.offset(i), layout_.dof(i)));
    }
    const VectorXd slack = lin.w - lin.W * qdot;
    for (std::size_t k = 0; k < scene_.constraints.size(); ++k) {
        const auto& res = distances[k];
        out.constraints.push_back({res.d, d_safe_at(scene_.constraints[k].spec, time),
                                   slack(static_cast<Eigen::Index>(k)), res.jacobian.dot(qdot) + res.residual,
                                   res.coincident});
    }
    return out;
}

}  // namespace dqteleop
