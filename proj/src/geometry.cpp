#include "dqteleop/geometry.hpp"

#include <cmath>
#include <stdexcept>

namespace dqteleop {

namespace {

// Below this |l1 x l2| the skew-line formula is ill-conditioned.
constexpr double parallel_threshold = 1e-6;

// Gradient of a scalar with respect to a line's 8-vector [0 l 0 m].
Vector8 line_gradient(const Vector3& d_dl, const Vector3& d_dm)
{
    Vector8 g;
    g << 0.0, d_dl, 0.0, d_dm;
    return g;
}

DistanceResult combine(double d, const Eigen::RowVectorXd& jacobian, double residual)
{
    if (d < coincident_distance) {
        DistanceResult out;
        out.d = 0.0;
        out.jacobian = Eigen::RowVectorXd::Zero(jacobian.size());
        out.coincident = true;
        return out;
    }
    return {d, jacobian, residual, false};
}

void require_columns(Eigen::Index a, Eigen::Index b)
{
    if (a != b) {
        throw std::invalid_argument("primitive Jacobians span different joint vectors");
    }
}

// Distance from point p to the line (l, m), with gradients.
struct PointLineTerms {
    double d;
    Vector3 d_dl;
    Vector3 d_dm;
    Vector3 d_dp;
};

PointLineTerms point_line_terms(const Vector3& l, const Vector3& m, const Vector3& p)
{
    const Vector3 u = p.cross(l) - m;
    const double d = u.norm();
    if (d < coincident_distance) {
        return {d, Vector3::Zero(), Vector3::Zero(), Vector3::Zero()};
    }
    const Vector3 uh = u / d;
    // du = -S(l) dp + S(p) dl - dm
    return {d, cross_matrix(p).transpose() * uh, -uh, -cross_matrix(l).transpose() * uh};
}

}  // namespace

PointState static_point(const Vector3& p, Eigen::Index columns)
{
    return {p, MatrixXd::Zero(3, columns), Vector3::Zero()};
}

PointState moving_point(const Vector3& p, const Vector3& velocity, Eigen::Index columns)
{
    return {p, MatrixXd::Zero(3, columns), velocity};
}

LineState static_line(const PluckerLine& line, Eigen::Index columns)
{
    return {line, MatrixXd::Zero(8, columns), Vector8::Zero()};
}

PlaneState static_plane(const Plane& plane, Eigen::Index columns)
{
    return {plane, MatrixXd::Zero(4, columns), Vector4::Zero()};
}

DistanceResult dist_point_point(const PointState& a, const PointState& b)
{
    require_columns(a.jacobian.cols(), b.jacobian.cols());
    const Vector3 u = a.p - b.p;
    const double d = u.norm();
    if (d < coincident_distance) {
        return combine(d, Eigen::RowVectorXd::Zero(a.jacobian.cols()), 0.0);
    }
    const Vector3 g = u / d;
    const Eigen::RowVectorXd jac = g.transpose() * (a.jacobian - b.jacobian);
    return combine(d, jac, g.dot(a.velocity - b.velocity));
}

DistanceResult dist_line_point(const LineState& line, const PointState& point)
{
    require_columns(line.jacobian.cols(), point.jacobian.cols());
    const auto t = point_line_terms(line.line.l, line.line.m, point.p);
    if (t.d < coincident_distance) {
        return combine(t.d, Eigen::RowVectorXd::Zero(line.jacobian.cols()), 0.0);
    }
    const Vector8 gl = line_gradient(t.d_dl, t.d_dm);
    const Eigen::RowVectorXd jac = gl.transpose() * line.jacobian + t.d_dp.transpose() * point.jacobian;
    const double residual = gl.dot(line.velocity) + t.d_dp.dot(point.velocity);
    return combine(t.d, jac, residual);
}

DistanceResult dist_line_line(const LineState& a, const LineState& b)
{
    require_columns(a.jacobian.cols(), b.jacobian.cols());
    const Vector3& l1 = a.line.l;
    const Vector3& m1 = a.line.m;
    const Vector3& l2 = b.line.l;
    const Vector3& m2 = b.line.m;

    const Vector3 c = l1.cross(l2);
    const double n = c.norm();
    Vector8 g1;
    Vector8 g2;
    double d = 0.0;
    if (n > parallel_threshold) {
        // d = |<l1, m2> + <l2, m1>| / |l1 x l2|
        const double s = l1.dot(m2) + l2.dot(m1);
        d = std::abs(s) / n;
        if (d < coincident_distance) {
            return combine(d, Eigen::RowVectorXd::Zero(a.jacobian.cols()), 0.0);
        }
        const double sg = s >= 0.0 ? 1.0 : -1.0;
        const Vector3 dn_dl1 = l2.cross(c) / n;
        const Vector3 dn_dl2 = -l1.cross(c) / n;
        const double n2 = n * n;
        g1 = line_gradient(sg * m2 / n - std::abs(s) * dn_dl1 / n2, sg * l2 / n);
        g2 = line_gradient(sg * m1 / n - std::abs(s) * dn_dl2 / n2, sg * l1 / n);
    } else {
        // Distance from the point of line b closest to the origin, p = l2 x m2, to line a.
        const Vector3 p = l2.cross(m2);
        const auto t = point_line_terms(l1, m1, p);
        d = t.d;
        if (d < coincident_distance) {
            return combine(d, Eigen::RowVectorXd::Zero(a.jacobian.cols()), 0.0);
        }
        g1 = line_gradient(t.d_dl, t.d_dm);
        // dp = -S(m2) dl2 + S(l2) dm2
        g2 = line_gradient(-cross_matrix(m2).transpose() * t.d_dp, cross_matrix(l2).transpose() * t.d_dp);
    }
    const Eigen::RowVectorXd jac = g1.transpose() * a.jacobian + g2.transpose() * b.jacobian;
    return combine(d, jac, g1.dot(a.velocity) + g2.dot(b.velocity));
}

DistanceResult dist_plane_point(const PlaneState& plane, const PointState& point)
{
    require_columns(plane.jacobian.cols(), point.jacobian.cols());
    const Vector3& n = plane.plane.n;
    const double d = point.p.dot(n) - plane.plane.offset;
    Vector4 gp;
    gp << point.p, -1.0;
    const Eigen::RowVectorXd jac = n.transpose() * point.jacobian + gp.transpose() * plane.jacobian;
    DistanceResult out;
    out.d = d;
    out.jacobian = jac;
    out.residual = n.dot(point.velocity) + gp.dot(plane.velocity);
    return out;
}

std::array<Plane, 6> cuboid_planes(const DualQuaternion& center, const Vector3& extents)
{
    if (!(extents.array() > 0.0).all()) {
        throw std::invalid_argument("cuboid extents must be positive");
    }
    const auto rt = rt_from_pose(center);
    const Vector3 c = vec3(rt.translation);
    const Quaternion& r = rt.rotation;
    std::array<Plane, 6> planes;
    for (int axis = 0; axis < 3; ++axis) {
        const Vector3 local = Vector3::Unit(axis);
        const Vector3 world_axis = vec3((r * Quaternion::pure(local) * r.conj()).im());
        for (int side = 0; side < 2; ++side) {
            const double sign = side == 0 ? 1.0 : -1.0;
            const Vector3 face_point = c + sign * 0.5 * extents(axis) * world_axis;
            const Vector3 inward = -sign * world_axis;
            planes[static_cast<std::size_t>(2 * axis + side)] = Plane{inward, face_point.dot(inward)};
        }
    }
    return planes;
}

}  // namespace dqteleop
