#pragma once

#include "dqteleop/dq.hpp"

#include <json.hpp>

#include <string>
#include <vector>

namespace dqteleop {

using Eigen::MatrixXd;
using Eigen::VectorXd;

enum class JointType { revolute, prismatic };

/// Standard DH link: Rz(theta) Tz(d) Tx(a) Rx(alpha). For a revolute joint q
/// is added to theta, for a prismatic joint to d.
struct DhJoint {
    JointType type = JointType::revolute;
    double theta = 0.0;
    double d = 0.0;
    double a = 0.0;
    double alpha = 0.0;
};

struct JointState {
    VectorXd q;
    VectorXd q_min;
    VectorXd q_max;
    VectorXd qd_max;

    /// True when q_min <= q <= q_max elementwise.
    bool within_limits() const;
};

/// Serial chain with base and tool transforms.
class RobotModel {
public:
    /// Sentinel link index meaning "last joint frame followed by the effector transform".
    static constexpr int effector_link = -1;

    RobotModel() = default;
    RobotModel(std::string name, std::vector<DhJoint> joints, DualQuaternion base = DualQuaternion::identity(),
               DualQuaternion effector = DualQuaternion::identity());

    const std::string& name() const { return name_; }
    int dof() const { return static_cast<int>(joints_.size()); }
    const std::vector<DhJoint>& joints() const { return joints_; }
    const DualQuaternion& base() const { return base_; }
    const DualQuaternion& effector() const { return effector_; }
    void set_base(const DualQuaternion& base);
    void set_effector(const DualQuaternion& effector);

    const VectorXd& q_min() const { return q_min_; }
    const VectorXd& q_max() const { return q_max_; }
    const VectorXd& qd_max() const { return qd_max_; }
    void set_limits(VectorXd q_min, VectorXd q_max, VectorXd qd_max);

    /// Trailing joints treated as the forceps block of the damping matrix.
    int forceps_joints() const { return forceps_joints_; }
    void set_forceps_joints(int n);

    /// Unit of every length in the model ("m" or "mm").
    const std::string& length_unit() const { return length_unit_; }
    /// Multiplies all lengths (DH d/a, base/effector translations, prismatic limits) by `factor`.
    void rescale_lengths(double factor, std::string new_unit);

    JointState initial_state(const VectorXd& q0) const;

private:
    std::string name_;
    std::vector<DhJoint> joints_;
    DualQuaternion base_ = DualQuaternion::identity();
    DualQuaternion effector_ = DualQuaternion::identity();
    VectorXd q_min_;
    VectorXd q_max_;
    VectorXd qd_max_;
    int forceps_joints_ = 0;
    std::string length_unit_ = "m";
};

/// Pose of a single DH link at joint value q.
DualQuaternion dh_transform(const DhJoint& joint, double q);

/// End-effector pose (base, chain, effector).
DualQuaternion fkm(const RobotModel& model, const VectorXd& q);
/// Pose of frame `link` (0 = base, n = last joint, RobotModel::effector_link = tool).
DualQuaternion fkm(const RobotModel& model, const VectorXd& q, int link);

/// Pose Jacobian, vec8(xdot) = J qdot. 8 x n.
MatrixXd pose_jacobian(const RobotModel& model, const VectorXd& q);
/// Pose Jacobian of frame `link`; columns of joints beyond the link are zero.
MatrixXd pose_jacobian(const RobotModel& model, const VectorXd& q, int link);

/// First four rows of the pose Jacobian.
MatrixXd rotation_jacobian(const MatrixXd& pose_jac);
/// vec3(tdot) = J_t qdot for t = 2 D(x) P(x)*.
MatrixXd translation_jacobian(const DualQuaternion& pose, const MatrixXd& pose_jac);
MatrixXd translation_jacobian(const RobotModel& model, const VectorXd& q);

/// Pose Jacobian of x * c for a constant c, given the Jacobian of x.
MatrixXd right_compose_jacobian(const MatrixXd& pose_jac, const DualQuaternion& c);

struct PluckerLine {
    Vector3 l = Vector3::UnitZ();  ///< unit direction
    Vector3 m = Vector3::Zero();   ///< moment p x l

    static PluckerLine through(const Vector3& point, const Vector3& direction);
    Vector8 to_vec8() const;
    /// Point of the line closest to the origin.
    Vector3 closest_point_to_origin() const { return l.cross(m); }
    bool is_valid(double tol = 1e-9) const;
};

struct LineKinematics {
    PluckerLine line;
    MatrixXd jacobian;  ///< 8 x n over [vec4 l; vec4 m]
};

/// Line through the origin of frame `x` with direction `axis` (frame coordinates),
/// together with its Jacobian.
LineKinematics line_kinematics(const DualQuaternion& x, const MatrixXd& pose_jac, const Vector3& axis);

/// Tool line through the end-effector along `axis` (unit, end-effector frame).
LineKinematics line_jacobian(const RobotModel& model, const VectorXd& q, const Vector3& axis);
/// Line through `offset` of frame `link` along `axis`.
LineKinematics line_jacobian(const RobotModel& model, const VectorXd& q, int link, const Vector3& offset,
                             const Vector3& axis);

struct PointKinematics {
    Vector3 p;
    MatrixXd jacobian;  ///< 3 x n
};

/// Point rigidly attached to frame `link` at `offset` (frame coordinates).
PointKinematics point_jacobian(const RobotModel& model, const VectorXd& q, int link, const Vector3& offset);

/// Robot model file: {name, dh: [[theta,d,a,alpha,type],...], base, effector, q_min, q_max, qd_max,
/// optional forceps_joints, length_unit}. Poses are 8-vectors.
RobotModel robot_model_from_json(const nlohmann::json& doc);
RobotModel load_robot_model(const std::string& path);
nlohmann::json robot_model_to_json(const RobotModel& model);

}  // namespace dqteleop
