#pragma once

#include "dqteleop/kinematics.hpp"

#include <array>

namespace dqteleop {

/// Distances below this are treated as coincident primitives.
inline constexpr double coincident_distance = 1e-9;

/// Plane {p : <p, n> = offset}; signed distance is positive on the side n points to.
struct Plane {
    Vector3 n = Vector3::UnitZ();
    double offset = 0.0;

    bool is_valid(double tol = 1e-9) const { return std::abs(n.norm() - 1.0) <= tol; }
};

struct Sphere {
    Vector3 center = Vector3::Zero();
    double radius = 0.0;
};

/// A primitive evaluated at (q, t): its value, its Jacobian over the stacked
/// joint vector, and its explicit time derivative (motion not caused by joints).
struct PointState {
    Vector3 p = Vector3::Zero();
    MatrixXd jacobian;            ///< 3 x N
    Vector3 velocity = Vector3::Zero();
};

struct LineState {
    PluckerLine line;
    MatrixXd jacobian;            ///< 8 x N over [vec4 l; vec4 m]
    Vector8 velocity = Vector8::Zero();
};

struct PlaneState {
    Plane plane;
    MatrixXd jacobian;            ///< 4 x N over [n; offset]
    Vector4 velocity = Vector4::Zero();
};

/// Distance d, Jacobian J_d and residual zeta with ddot = J_d qdot + zeta.
struct DistanceResult {
    double d = 0.0;
    Eigen::RowVectorXd jacobian;  ///< 1 x N
    double residual = 0.0;
    bool coincident = false;
};

PointState static_point(const Vector3& p, Eigen::Index columns);
PointState moving_point(const Vector3& p, const Vector3& velocity, Eigen::Index columns);
LineState static_line(const PluckerLine& line, Eigen::Index columns);
PlaneState static_plane(const Plane& plane, Eigen::Index columns);

/// d = |p1 - p2|.
DistanceResult dist_point_point(const PointState& a, const PointState& b);
/// d = |p x l - m|.
DistanceResult dist_line_point(const LineState& line, const PointState& point);
/// Common-perpendicular distance; parallel lines fall back to point-to-line distance.
DistanceResult dist_line_line(const LineState& a, const LineState& b);
/// Signed distance d = <p, n> - offset (never coincident).
DistanceResult dist_plane_point(const PlaneState& plane, const PointState& point);

/// Six planes bounding a box centered at `center` with the box axes given by
/// the rotation of `center`. Normals point inward, so a point inside has six
/// positive signed distances. Order: +x, -x, +y, -y, +z, -z faces.
std::array<Plane, 6> cuboid_planes(const DualQuaternion& center, const Vector3& extents);

}  // namespace dqteleop
