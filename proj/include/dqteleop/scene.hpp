#pragma once

#include "dqteleop/vfi.hpp"

#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace dqteleop {

enum class PrimitiveKind { point, line, plane };

/// Prescribed motion of a world primitive: p(t) = p0 + v t + A sin(2 pi f t).
/// Planes only use offset_rate (translation along their normal).
struct WorldMotion {
    Vector3 velocity = Vector3::Zero();
    Vector3 amplitude = Vector3::Zero();
    double frequency = 0.0;
    double offset_rate = 0.0;

    bool is_static() const
    {
        return velocity.isZero(0.0) && (amplitude.isZero(0.0) || frequency == 0.0) && offset_rate == 0.0;
    }
};

/// A geometric primitive either fixed to a robot link or living in the world.
///
/// Points use `position`; lines use `position` and the unit `direction`;
/// planes use the unit normal `direction` and `offset` (world only).
/// Coordinates are in the link frame for attached primitives.
struct Primitive {
    std::string name;
    PrimitiveKind kind = PrimitiveKind::point;
    std::optional<std::size_t> robot;
    int link = RobotModel::effector_link;
    Vector3 position = Vector3::Zero();
    Vector3 direction = Vector3::UnitZ();
    double offset = 0.0;
    WorldMotion motion;
};

struct SceneConstraint {
    std::string name;
    std::size_t first = 0;
    std::size_t second = 0;
    ConstraintSpec spec;
};

struct Scene {
    std::vector<RobotModel> robots;
    std::vector<Primitive> primitives;
    std::vector<SceneConstraint> constraints;

    JointLayout layout() const;
    /// Throws std::invalid_argument on dangling references, unsupported pairs or bad directions.
    void validate() const;
};

using PrimitiveState = std::variant<PointState, LineState, PlaneState>;

/// Value, stacked Jacobian and explicit velocity of a primitive at joint values q and time t.
PrimitiveState evaluate_primitive(const Scene& scene, const Primitive& prim, const std::vector<VectorXd>& q,
                                  double t);

/// Distance between two evaluated primitives (either argument order).
/// Supported pairs: point-point, line-point, line-line, plane-point.
DistanceResult evaluate_distance(const PrimitiveState& a, const PrimitiveState& b);

bool distance_supported(PrimitiveKind a, PrimitiveKind b);

/// Safe distance at time t.
double d_safe_at(const ConstraintSpec& spec, double t);

std::string_view to_string(PrimitiveKind kind);

}  // namespace dqteleop
