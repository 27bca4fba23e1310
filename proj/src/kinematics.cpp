#include "dqteleop/kinematics.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

namespace dqteleop {

namespace {

void require_dimension(const RobotModel& model, const VectorXd& q)
{
    if (q.size() != model.dof()) {
        throw std::invalid_argument("joint vector has " + std::to_string(q.size()) + " entries, model '" +
                                    model.name() + "' has " + std::to_string(model.dof()) + " joints");
    }
}

int resolve_link(const RobotModel& model, int link)
{
    if (link == RobotModel::effector_link) {
        return model.dof();
    }
    if (link < 0 || link > model.dof()) {
        throw std::out_of_range("link index " + std::to_string(link) + " out of range");
    }
    return link;
}

DualQuaternion scale_translation(const DualQuaternion& x, double factor)
{
    return {x.primary(), x.dual() * factor};
}

Vector8 json_to_vec8(const nlohmann::json& j, const char* field)
{
    if (!j.is_array() || j.size() != 8) {
        throw std::invalid_argument(std::string("robot model: '") + field + "' must be an 8-vector");
    }
    Vector8 v;
    for (int i = 0; i < 8; ++i) {
        v(i) = j.at(i).get<double>();
    }
    return v;
}

VectorXd json_to_vector(const nlohmann::json& j, const char* field, int n)
{
    if (!j.is_array() || static_cast<int>(j.size()) != n) {
        throw std::invalid_argument(std::string("robot model: '") + field + "' must have " + std::to_string(n) +
                                    " entries");
    }
    VectorXd v(n);
    for (int i = 0; i < n; ++i) {
        v(i) = j.at(i).get<double>();
    }
    return v;
}

}  // namespace

bool JointState::within_limits() const
{
    return (q.array() >= q_min.array()).all() && (q.array() <= q_max.array()).all();
}

RobotModel::RobotModel(std::string name, std::vector<DhJoint> joints, DualQuaternion base, DualQuaternion effector)
    : name_(std::move(name)), joints_(std::move(joints))
{
    if (joints_.empty()) {
        throw std::invalid_argument("robot model needs at least one joint");
    }
    for (const auto& j : joints_) {
        if (!std::isfinite(j.theta) || !std::isfinite(j.d) || !std::isfinite(j.a) || !std::isfinite(j.alpha)) {
            throw std::invalid_argument("robot model '" + name_ + "': non-finite DH parameter");
        }
    }
    set_base(base);
    set_effector(effector);
    const auto n = static_cast<Eigen::Index>(joints_.size());
    q_min_ = VectorXd::Constant(n, -M_PI);
    q_max_ = VectorXd::Constant(n, M_PI);
    qd_max_ = VectorXd::Constant(n, 1.0);
}

void RobotModel::set_base(const DualQuaternion& base)
{
    if (!base.is_unit()) {
        throw std::invalid_argument("robot model '" + name_ + "': base pose is not a unit dual quaternion");
    }
    base_ = base;
}

void RobotModel::set_effector(const DualQuaternion& effector)
{
    if (!effector.is_unit()) {
        throw std::invalid_argument("robot model '" + name_ + "': effector pose is not a unit dual quaternion");
    }
    effector_ = effector;
}

void RobotModel::set_limits(VectorXd q_min, VectorXd q_max, VectorXd qd_max)
{
    if (q_min.size() != dof() || q_max.size() != dof() || qd_max.size() != dof()) {
        throw std::invalid_argument("robot model '" + name_ + "': limit vectors must have one entry per joint");
    }
    if (!(q_min.array() < q_max.array()).all()) {
        throw std::invalid_argument("robot model '" + name_ + "': q_min must be strictly below q_max");
    }
    if (!(qd_max.array() > 0.0).all()) {
        throw std::invalid_argument("robot model '" + name_ + "': qd_max must be positive");
    }
    q_min_ = std::move(q_min);
    q_max_ = std::move(q_max);
    qd_max_ = std::move(qd_max);
}

void RobotModel::set_forceps_joints(int n)
{
    if (n < 0 || n > dof()) {
        throw std::invalid_argument("robot model '" + name_ + "': forceps_joints out of range");
    }
    forceps_joints_ = n;
}

void RobotModel::rescale_lengths(double factor, std::string new_unit)
{
    for (std::size_t i = 0; i < joints_.size(); ++i) {
        auto& j = joints_[i];
        j.d *= factor;
        j.a *= factor;
        if (j.type == JointType::prismatic) {
            const auto k = static_cast<Eigen::Index>(i);
            q_min_(k) *= factor;
            q_max_(k) *= factor;
            qd_max_(k) *= factor;
        }
    }
    base_ = scale_translation(base_, factor);
    effector_ = scale_translation(effector_, factor);
    length_unit_ = std::move(new_unit);
}

JointState RobotModel::initial_state(const VectorXd& q0) const
{
    require_dimension(*this, q0);
    return {q0, q_min_, q_max_, qd_max_};
}

DualQuaternion dh_transform(const DhJoint& joint, double q)
{
    const double theta = joint.theta + (joint.type == JointType::revolute ? q : 0.0);
    const double d = joint.d + (joint.type == JointType::prismatic ? q : 0.0);
    const DualQuaternion rz(Quaternion::rotation(theta, Vector3::UnitZ()));
    const DualQuaternion rx(Quaternion::rotation(joint.alpha, Vector3::UnitX()));
    return rz * DualQuaternion::translation(Vector3(joint.a, 0.0, d)) * rx;
}

DualQuaternion fkm(const RobotModel& model, const VectorXd& q) { return fkm(model, q, RobotModel::effector_link); }

DualQuaternion fkm(const RobotModel& model, const VectorXd& q, int link)
{
    require_dimension(model, q);
    const int last = resolve_link(model, link);
    DualQuaternion x = model.base();
    for (int i = 0; i < last; ++i) {
        x = x * dh_transform(model.joints()[static_cast<std::size_t>(i)], q(i));
    }
    if (link == RobotModel::effector_link) {
        x = x * model.effector();
    }
    return x;
}

MatrixXd pose_jacobian(const RobotModel& model, const VectorXd& q)
{
    return pose_jacobian(model, q, RobotModel::effector_link);
}

MatrixXd pose_jacobian(const RobotModel& model, const VectorXd& q, int link)
{
    require_dimension(model, q);
    const int last = resolve_link(model, link);
    const int n = model.dof();

    // prefix[i] = base * A_1 * ... * A_i
    std::vector<DualQuaternion> prefix;
    prefix.reserve(static_cast<std::size_t>(last) + 1);
    prefix.push_back(model.base());
    for (int i = 0; i < last; ++i) {
        prefix.push_back(prefix.back() * dh_transform(model.joints()[static_cast<std::size_t>(i)], q(i)));
    }
    DualQuaternion x_end = prefix.back();
    if (link == RobotModel::effector_link) {
        x_end = x_end * model.effector();
    }

    // d/dq_i A_i = (1/2) g A_i with g = k (rotation about z) or eps k (slide along z),
    // so the column is vec8((1/2) Ad(prefix[i-1]) g * x_end).
    const DualQuaternion rotate_z(quat::k);
    const DualQuaternion slide_z(Quaternion(), quat::k);
    MatrixXd jac = MatrixXd::Zero(8, n);
    const Matrix8 right = hamilton_minus8(x_end);
    for (int i = 0; i < last; ++i) {
        const auto& frame = prefix[static_cast<std::size_t>(i)];
        const auto& g = model.joints()[static_cast<std::size_t>(i)].type == JointType::revolute ? rotate_z : slide_z;
        const DualQuaternion w = frame * g * frame.conj();
        jac.col(i) = 0.5 * right * vec8(w);
    }
    return jac;
}

MatrixXd rotation_jacobian(const MatrixXd& pose_jac) { return pose_jac.topRows(4); }

MatrixXd translation_jacobian(const DualQuaternion& pose, const MatrixXd& pose_jac)
{
    // t = 2 D P*  =>  vec4(tdot) = 2 (H-(P*) J_D + H+(D) C4 J_P)
    const MatrixXd jt4 = 2.0 * (hamilton_minus4(pose.primary().conj()) * pose_jac.bottomRows(4) +
                                hamilton_plus4(pose.dual()) * conj_matrix4() * pose_jac.topRows(4));
    return jt4.bottomRows(3);
}

MatrixXd translation_jacobian(const RobotModel& model, const VectorXd& q)
{
    return translation_jacobian(fkm(model, q), pose_jacobian(model, q));
}

MatrixXd right_compose_jacobian(const MatrixXd& pose_jac, const DualQuaternion& c)
{
    return hamilton_minus8(c) * pose_jac;
}

PluckerLine PluckerLine::through(const Vector3& point, const Vector3& direction)
{
    const Vector3 l = direction.normalized();
    return {l, point.cross(l)};
}

Vector8 PluckerLine::to_vec8() const
{
    Vector8 v;
    v << 0.0, l, 0.0, m;
    return v;
}

bool PluckerLine::is_valid(double tol) const
{
    return std::abs(l.norm() - 1.0) <= tol && std::abs(l.dot(m)) <= tol * std::max(1.0, m.norm());
}

LineKinematics line_kinematics(const DualQuaternion& x, const MatrixXd& pose_jac, const Vector3& axis)
{
    if (std::abs(axis.norm() - 1.0) > 1e-9) {
        throw std::invalid_argument("line axis must be a unit vector");
    }
    // l + eps m = x l_e x*
    const DualQuaternion le(Quaternion::pure(axis));
    const DualQuaternion line = x * le * x.conj();
    LineKinematics out;
    out.line.l = vec3(line.primary().im());
    out.line.m = vec3(line.dual().im());
    out.jacobian = hamilton_minus8(le * x.conj()) * pose_jac + hamilton_plus8(x * le) * conj_matrix8() * pose_jac;
    // Real parts vanish analytically.
    out.jacobian.row(0).setZero();
    out.jacobian.row(4).setZero();
    return out;
}

LineKinematics line_jacobian(const RobotModel& model, const VectorXd& q, const Vector3& axis)
{
    return line_kinematics(fkm(model, q), pose_jacobian(model, q), axis);
}

LineKinematics line_jacobian(const RobotModel& model, const VectorXd& q, int link, const Vector3& offset,
                             const Vector3& axis)
{
    const DualQuaternion c = DualQuaternion::translation(offset);
    const DualQuaternion x = fkm(model, q, link) * c;
    return line_kinematics(x, right_compose_jacobian(pose_jacobian(model, q, link), c), axis);
}

PointKinematics point_jacobian(const RobotModel& model, const VectorXd& q, int link, const Vector3& offset)
{
    const DualQuaternion c = DualQuaternion::translation(offset);
    const DualQuaternion x = fkm(model, q, link) * c;
    const MatrixXd jac = right_compose_jacobian(pose_jacobian(model, q, link), c);
    return {translation_of(x), translation_jacobian(x, jac)};
}

RobotModel robot_model_from_json(const nlohmann::json& doc)
{
    const auto name = doc.value("name", std::string("robot"));
    if (!doc.contains("dh") || !doc.at("dh").is_array() || doc.at("dh").empty()) {
        throw std::invalid_argument("robot model '" + name + "': field 'dh' must be a non-empty array");
    }
    std::vector<DhJoint> joints;
    for (const auto& row : doc.at("dh")) {
        if (!row.is_array() || row.size() != 5) {
            throw std::invalid_argument("robot model '" + name + "': each 'dh' row is [theta, d, a, alpha, type]");
        }
        DhJoint j;
        j.theta = row.at(0).get<double>();
        j.d = row.at(1).get<double>();
        j.a = row.at(2).get<double>();
        j.alpha = row.at(3).get<double>();
        const auto type = row.at(4).get<std::string>();
        if (type == "revolute" || type == "R") {
            j.type = JointType::revolute;
        } else if (type == "prismatic" || type == "P") {
            j.type = JointType::prismatic;
        } else {
            throw std::invalid_argument("robot model '" + name + "': unknown joint type '" + type + "'");
        }
        joints.push_back(j);
    }
    const auto base = doc.contains("base") ? DualQuaternion::from_vec8(json_to_vec8(doc.at("base"), "base"))
                                           : DualQuaternion::identity();
    const auto effector = doc.contains("effector")
                              ? DualQuaternion::from_vec8(json_to_vec8(doc.at("effector"), "effector"))
                              : DualQuaternion::identity();
    RobotModel model(name, std::move(joints), base, effector);
    const int n = model.dof();
    for (const char* field : {"q_min", "q_max", "qd_max"}) {
        if (!doc.contains(field)) {
            throw std::invalid_argument("robot model '" + name + "': missing field '" + field + "'");
        }
    }
    model.set_limits(json_to_vector(doc.at("q_min"), "q_min", n), json_to_vector(doc.at("q_max"), "q_max", n),
                     json_to_vector(doc.at("qd_max"), "qd_max", n));
    model.set_forceps_joints(doc.value("forceps_joints", 0));
    const auto unit = doc.value("length_unit", std::string("m"));
    if (unit != "m" && unit != "mm") {
        throw std::invalid_argument("robot model '" + name + "': length_unit must be \"m\" or \"mm\"");
    }
    model.rescale_lengths(1.0, unit);
    return model;
}

RobotModel load_robot_model(const std::string& path)
{
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open robot model file '" + path + "'");
    }
    return robot_model_from_json(nlohmann::json::parse(in));
}

nlohmann::json robot_model_to_json(const RobotModel& model)
{
    nlohmann::json doc;
    doc["name"] = model.name();
    doc["dh"] = nlohmann::json::array();
    for (const auto& j : model.joints()) {
        doc["dh"].push_back({j.theta, j.d, j.a, j.alpha, j.type == JointType::revolute ? "revolute" : "prismatic"});
    }
    const auto to_array = [](const auto& v) { return std::vector<double>(v.data(), v.data() + v.size()); };
    doc["base"] = to_array(vec8(model.base()));
    doc["effector"] = to_array(vec8(model.effector()));
    doc["q_min"] = to_array(model.q_min());
    doc["q_max"] = to_array(model.q_max());
    doc["qd_max"] = to_array(model.qd_max());
    doc["forceps_joints"] = model.forceps_joints();
    doc["length_unit"] = model.length_unit();
    return doc;
}

}  // namespace dqteleop
