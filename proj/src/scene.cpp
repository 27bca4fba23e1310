#include "dqteleop/scene.hpp"

#include <cmath>
#include <stdexcept>

namespace dqteleop {

namespace {

constexpr double two_pi = 2.0 * M_PI;

Vector3 world_position(const WorldMotion& m, const Vector3& p0, double t)
{
    return p0 + m.velocity * t + m.amplitude * std::sin(two_pi * m.frequency * t);
}

Vector3 world_velocity(const WorldMotion& m, double t)
{
    return m.velocity + m.amplitude * (two_pi * m.frequency * std::cos(two_pi * m.frequency * t));
}

const VectorXd& joints_of(const std::vector<VectorXd>& q, std::size_t robot)
{
    if (robot >= q.size()) {
        throw std::invalid_argument("joint values missing for robot " + std::to_string(robot));
    }
    return q[robot];
}

}  // namespace

std::string_view to_string(PrimitiveKind kind)
{
    switch (kind) {
    case PrimitiveKind::point:
        return "point";
    case PrimitiveKind::line:
        return "line";
    case PrimitiveKind::plane:
        return "plane";
    }
    return "unknown";
}

JointLayout Scene::layout() const
{
    std::vector<int> dofs;
    dofs.reserve(robots.size());
    for (const auto& r : robots) {
        dofs.push_back(r.dof());
    }
    return JointLayout(std::move(dofs));
}

bool distance_supported(PrimitiveKind a, PrimitiveKind b)
{
    if (a == PrimitiveKind::plane || b == PrimitiveKind::plane) {
        return (a == PrimitiveKind::point) != (b == PrimitiveKind::point);
    }
    return true;
}

void Scene::validate() const
{
    if (robots.empty()) {
        throw std::invalid_argument("scene has no robots");
    }
    for (const auto& p : primitives) {
        if (p.robot) {
            if (*p.robot >= robots.size()) {
                throw std::invalid_argument("primitive '" + p.name + "' is attached to a missing robot");
            }
            const int dof = robots[*p.robot].dof();
            if (p.link != RobotModel::effector_link && (p.link < 0 || p.link > dof)) {
                throw std::invalid_argument("primitive '" + p.name + "' refers to link " + std::to_string(p.link) +
                                            " outside 0.." + std::to_string(dof));
            }
            if (p.kind == PrimitiveKind::plane) {
                throw std::invalid_argument("plane '" + p.name + "' must be a world primitive");
            }
            if (!p.motion.is_static()) {
                throw std::invalid_argument("primitive '" + p.name + "' is attached to a robot and cannot have motion");
            }
        }
        if (p.kind != PrimitiveKind::point && std::abs(p.direction.norm() - 1.0) > 1e-9) {
            throw std::invalid_argument("primitive '" + p.name + "' needs a unit direction");
        }
    }
    for (const auto& c : constraints) {
        if (c.first >= primitives.size() || c.second >= primitives.size()) {
            throw std::invalid_argument("constraint '" + c.name + "' refers to a missing primitive");
        }
        const auto& a = primitives[c.first];
        const auto& b = primitives[c.second];
        if (!distance_supported(a.kind, b.kind)) {
            throw std::invalid_argument("constraint '" + c.name + "': no distance between a " +
                                        std::string(to_string(a.kind)) + " and a " + std::string(to_string(b.kind)));
        }
        if (c.spec.d_safe < 0.0 || c.spec.eta_d < 0.0) {
            throw std::invalid_argument("constraint '" + c.name + "': d_safe and eta_d must be non-negative");
        }
    }
}

PrimitiveState evaluate_primitive(const Scene& scene, const Primitive& prim, const std::vector<VectorXd>& q,
                                  double t)
{
    const JointLayout layout = scene.layout();
    const Eigen::Index cols = layout.total();

    if (!prim.robot) {
        switch (prim.kind) {
        case PrimitiveKind::point:
            return moving_point(world_position(prim.motion, prim.position, t), world_velocity(prim.motion, t), cols);
        case PrimitiveKind::line: {
            const Vector3 p = world_position(prim.motion, prim.position, t);
            const Vector3 v = world_velocity(prim.motion, t);
            LineState s = static_line(PluckerLine::through(p, prim.direction), cols);
            s.velocity.segment<3>(5) = v.cross(s.line.l);
            return s;
        }
        case PrimitiveKind::plane: {
            PlaneState s = static_plane(Plane{prim.direction, prim.offset + prim.motion.offset_rate * t}, cols);
            s.velocity(3) = prim.motion.offset_rate;
            return s;
        }
        }
    }

    const std::size_t robot = *prim.robot;
    const RobotModel& model = scene.robots.at(robot);
    const VectorXd& qi = joints_of(q, robot);
    const auto offset = layout.offset(robot);
    const auto dof = layout.dof(robot);
    if (prim.kind == PrimitiveKind::point) {
        const auto pk = point_jacobian(model, qi, prim.link, prim.position);
        PointState s{pk.p, MatrixXd::Zero(3, cols), Vector3::Zero()};
        s.jacobian.middleCols(offset, dof) = pk.jacobian;
        return s;
    }
    if (prim.kind == PrimitiveKind::line) {
        const auto lk = line_jacobian(model, qi, prim.link, prim.position, prim.direction);
        LineState s{lk.line, MatrixXd::Zero(8, cols), Vector8::Zero()};
        s.jacobian.middleCols(offset, dof) = lk.jacobian;
        return s;
    }
    throw std::invalid_argument("plane '" + prim.name + "' must be a world primitive");
}

DistanceResult evaluate_distance(const PrimitiveState& a, const PrimitiveState& b)
{
    return std::visit(
        [](const auto& x, const auto& y) -> DistanceResult {
            using X = std::decay_t<decltype(x)>;
            using Y = std::decay_t<decltype(y)>;
            if constexpr (std::is_same_v<X, PointState> && std::is_same_v<Y, PointState>) {
                return dist_point_point(x, y);
            } else if constexpr (std::is_same_v<X, LineState> && std::is_same_v<Y, PointState>) {
                return dist_line_point(x, y);
            } else if constexpr (std::is_same_v<X, PointState> && std::is_same_v<Y, LineState>) {
                return dist_line_point(y, x);
            } else if constexpr (std::is_same_v<X, LineState> && std::is_same_v<Y, LineState>) {
                return dist_line_line(x, y);
            } else if constexpr (std::is_same_v<X, PlaneState> && std::is_same_v<Y, PointState>) {
                return dist_plane_point(x, y);
            } else if constexpr (std::is_same_v<X, PointState> && std::is_same_v<Y, PlaneState>) {
                return dist_plane_point(y, x);
            } else {
                throw std::invalid_argument("unsupported primitive pair for a distance");
            }
        },
        a, b);
}

double d_safe_at(const ConstraintSpec& spec, double t) { return spec.d_safe + spec.d_safe_rate * t; }

}  // namespace dqteleop
