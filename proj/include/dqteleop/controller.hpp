#pragma once

#include "dqteleop/qp.hpp"
#include "dqteleop/scene.hpp"

#include <vector>

namespace dqteleop {

struct ControllerConfig {
    double alpha = 0.99;   ///< translation vs rotation weight
    double beta = 0.5;     ///< priority of robot 0 over robot 1
    double eta = 1.0;      ///< task convergence gain (1/s)
    double lambda_r = 0.01;
    double lambda_f = 0.01;
    double eta_d = 1.0;
    /// Joint-limit damper gain; negative means "same as eta_d".
    double eta_q = -1.0;
    double sampling_time = 1e-3;
    double motion_scaling = 1.0;
    double beta_floor = 1e-3;
    bool joint_limits = true;

    double joint_limit_gain() const { return eta_q < 0.0 ? eta_d : eta_q; }
    /// Throws std::invalid_argument naming the offending field.
    void validate() const;
};

struct TaskTarget {
    Quaternion r_d = quat::one;
    Vector3 t_d = Vector3::Zero();
};

/// r* r_d - 1, or r* r_d + 1 when that is the smaller of the two. Throws on non-unit input.
Vector4 switching_rotation_error(const Quaternion& r, const Quaternion& r_d);

/// Diagonal damping: lambda_r on the arm joints, lambda_f on the trailing forceps joints.
MatrixXd damping_matrix(const RobotModel& model, const ControllerConfig& cfg);

/// Objective weight of each robot: (beta, 1 - beta) floored for two robots, 1 otherwise.
std::vector<double> priority_weights(const ControllerConfig& cfg, std::size_t robots);

struct Objective {
    MatrixXd H;
    VectorXd f;
};

struct RobotTaskState {
    DualQuaternion pose;
    MatrixXd pose_jacobian;
};

/// Weighted multi-robot tracking objective over the stacked joint vector.
Objective build_objective(const std::vector<RobotModel>& robots, const std::vector<RobotTaskState>& states,
                          const std::vector<TaskTarget>& targets, const ControllerConfig& cfg);

/// min |J qdot + eta e|^2 + lambda |qdot|^2 over the stacked task Jacobian of p robots.
Objective damped_task_objective(const MatrixXd& task_jacobian, const VectorXd& task_error, double eta,
                                double lambda);

struct ConstraintReport {
    double d = 0.0;
    double d_safe = 0.0;
    double slack = 0.0;  ///< w - W qdot of the constraint's row
    double rate = 0.0;   ///< J_d qdot + zeta
    bool coincident = false;
};

struct RobotReport {
    Vector3 t = Vector3::Zero();
    Vector3 t_d = Vector3::Zero();
    Vector3 t_error = Vector3::Zero();  ///< t - t_d
    Vector4 r_error = Vector4::Zero();
};

struct ControlOutput {
    std::vector<VectorXd> qdot;
    std::vector<RobotReport> robots;
    std::vector<ConstraintReport> constraints;
    QpStatus status = QpStatus::optimal;
    int iterations = 0;
    double kkt_residual = 0.0;
    /// QP failed and the zero command was applied.
    bool fallback = false;
    /// Some joint is outside its limits.
    bool joint_limit_violation = false;
};

/// One tick of the constrained controller over a scene.
class Controller {
public:
    Controller(Scene scene, ControllerConfig cfg);

    ControlOutput step(const std::vector<VectorXd>& q, const std::vector<TaskTarget>& targets, double time);

    const Scene& scene() const { return scene_; }
    const ControllerConfig& config() const { return cfg_; }
    /// Validates before replacing.
    void set_config(const ControllerConfig& cfg);
    /// Replaces the damper gain of every scene constraint.
    void set_constraint_gain(double eta_d);

    /// Linear inequalities of the current tick (exposed for inspection). `distances`
    /// receives one result per scene constraint.
    LinearInequalities constraints(const std::vector<VectorXd>& q, double time,
                                   std::vector<DistanceResult>* distances = nullptr) const;

private:
    Scene scene_;
    ControllerConfig cfg_;
    JointLayout layout_;
    QpSolver solver_;
};

}  // namespace dqteleop
