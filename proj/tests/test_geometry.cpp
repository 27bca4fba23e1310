#include "dqteleop/geometry.hpp"
#include "test_support.hpp"

#include <doctest.h>

#include <cmath>

using namespace dqteleop;
using namespace dqteleop::testing;

namespace {

// Two robots side by side; primitives are evaluated over the stacked joint vector.
struct TwoArms {
    RobotModel a = psm_model();
    RobotModel b = psm_model();

    TwoArms()
    {
        a.set_base(DualQuaternion::translation(Vector3(-0.05, 0.0, 0.0)) * a.base());
        b.set_base(DualQuaternion::translation(Vector3(0.05, 0.0, 0.0)) * b.base());
    }

    int total() const { return a.dof() + b.dof(); }

    LineState shaft(int which, const VectorXd& q) const
    {
        const auto& m = which == 0 ? a : b;
        const VectorXd qi = q.segment(which == 0 ? 0 : a.dof(), m.dof());
        const auto lk = line_jacobian(m, qi, 3, Vector3::Zero(), Vector3::UnitZ());
        LineState s{lk.line, MatrixXd::Zero(8, total()), Vector8::Zero()};
        s.jacobian.middleCols(which == 0 ? 0 : a.dof(), m.dof()) = lk.jacobian;
        return s;
    }

    PointState tip(int which, const VectorXd& q) const
    {
        const auto& m = which == 0 ? a : b;
        const VectorXd qi = q.segment(which == 0 ? 0 : a.dof(), m.dof());
        const auto pk = point_jacobian(m, qi, RobotModel::effector_link, Vector3::Zero());
        PointState s{pk.p, MatrixXd::Zero(3, total()), Vector3::Zero()};
        s.jacobian.middleCols(which == 0 ? 0 : a.dof(), m.dof()) = pk.jacobian;
        return s;
    }

    VectorXd random_q(std::mt19937& rng) const
    {
        VectorXd q(total());
        q << random_configuration(a, rng), random_configuration(b, rng);
        q(2) = std::max(q(2), 0.05);
        q(a.dof() + 2) = std::max(q(a.dof() + 2), 0.05);
        return q;
    }
};

VectorXd scalar(double d) { return VectorXd::Constant(1, d); }

}  // namespace

TEST_CASE("distance Jacobians match finite differences over the stacked joint vector")
{
    const TwoArms arms;
    std::mt19937 rng(21);
    const Plane board{Vector3(0.1, 0.2, 1.0).normalized(), -0.12};
    for (int trial = 0; trial < 40; ++trial) {
        const VectorXd q = arms.random_q(rng);

        const auto ll = dist_line_line(arms.shaft(0, q), arms.shaft(1, q));
        const MatrixXd ll_fd = numeric_jacobian(
            [&](const VectorXd& v) { return scalar(dist_line_line(arms.shaft(0, v), arms.shaft(1, v)).d); }, q);
        CHECK(relative_error(ll.jacobian, ll_fd) < 1e-6);

        const auto lp = dist_line_point(arms.shaft(0, q), arms.tip(1, q));
        const MatrixXd lp_fd = numeric_jacobian(
            [&](const VectorXd& v) { return scalar(dist_line_point(arms.shaft(0, v), arms.tip(1, v)).d); }, q);
        CHECK(relative_error(lp.jacobian, lp_fd) < 1e-6);

        const auto pp = dist_point_point(arms.tip(0, q), arms.tip(1, q));
        const MatrixXd pp_fd = numeric_jacobian(
            [&](const VectorXd& v) { return scalar(dist_point_point(arms.tip(0, v), arms.tip(1, v)).d); }, q);
        CHECK(relative_error(pp.jacobian, pp_fd) < 1e-6);

        const auto plane = static_plane(board, arms.total());
        const auto np = dist_plane_point(plane, arms.tip(1, q));
        const MatrixXd np_fd = numeric_jacobian(
            [&](const VectorXd& v) { return scalar(dist_plane_point(plane, arms.tip(1, v)).d); }, q);
        CHECK(relative_error(np.jacobian, np_fd) < 1e-6);
    }
}

TEST_CASE("closed forms on simple configurations")
{
    const auto z_axis = static_line(PluckerLine::through(Vector3::Zero(), Vector3::UnitZ()), 0);
    const auto offset_x = static_line(PluckerLine::through(Vector3(0.0, 2.0, 5.0), Vector3::UnitX()), 0);
    CHECK(dist_line_line(z_axis, offset_x).d == doctest::Approx(2.0).epsilon(1e-14));

    const auto parallel = static_line(PluckerLine::through(Vector3(3.0, 4.0, -1.0), -Vector3::UnitZ()), 0);
    const auto par = dist_line_line(z_axis, parallel);
    CHECK(par.d == doctest::Approx(5.0).epsilon(1e-14));
    CHECK_FALSE(par.coincident);

    CHECK(dist_line_point(z_axis, static_point(Vector3(0.0, -1.5, 7.0), 0)).d == doctest::Approx(1.5));
    CHECK(dist_point_point(static_point(Vector3(1, 2, 3), 0), static_point(Vector3(1, 2, 5), 0)).d ==
          doctest::Approx(2.0));

    const auto floor = static_plane(Plane{Vector3::UnitZ(), -1.0}, 0);
    CHECK(dist_plane_point(floor, static_point(Vector3(4.0, 4.0, -3.0), 0)).d == doctest::Approx(-2.0));
}

TEST_CASE("nearly parallel lines use the fallback continuously")
{
    const auto a = static_line(PluckerLine::through(Vector3::Zero(), Vector3::UnitZ()), 0);
    for (double angle : {1e-4, 1e-7, 1e-9}) {
        const auto b = static_line(
            PluckerLine::through(Vector3(0.0, 1.0, 0.0), Vector3(std::sin(angle), 0.0, std::cos(angle))), 0);
        CHECK(dist_line_line(a, b).d == doctest::Approx(1.0).epsilon(1e-6));
    }
}

TEST_CASE("coincident primitives report zero distance and a zero Jacobian")
{
    const TwoArms arms;
    std::mt19937 rng(22);
    const VectorXd q = arms.random_q(rng);
    const auto tip = arms.tip(0, q);
    const auto same = dist_point_point(tip, tip);
    CHECK(same.coincident);
    CHECK(same.d == 0.0);
    CHECK(same.jacobian.size() == arms.total());
    CHECK(same.jacobian.norm() == 0.0);

    const auto shaft = arms.shaft(0, q);
    CHECK(dist_line_line(shaft, shaft).coincident);
    CHECK(dist_line_point(shaft, static_point(shaft.line.closest_point_to_origin(), arms.total())).coincident);
}

TEST_CASE("residual equals the time derivative for moving primitives")
{
    const Vector3 p0(0.3, -0.2, 0.4);
    const Vector3 v(0.05, 0.1, -0.2);
    const auto line = static_line(PluckerLine::through(Vector3(0.1, 0.0, 0.0), Vector3(0, 1, 1).normalized()), 0);
    const double h = 1e-6;
    const auto at = [&](double t) { return dist_line_point(line, moving_point(p0 + v * t, v, 0)); };
    const double fd = (at(h).d - at(-h).d) / (2.0 * h);
    CHECK(at(0.0).residual == doctest::Approx(fd).epsilon(1e-7));

    // Plane translating along its normal.
    PlaneState plane = static_plane(Plane{Vector3::UnitZ(), 0.0}, 0);
    plane.velocity << 0.0, 0.0, 0.0, 0.3;
    const auto res = dist_plane_point(plane, static_point(Vector3(0, 0, 1), 0));
    CHECK(res.residual == doctest::Approx(-0.3));
}

TEST_CASE("cuboid planes: inside has six positive distances")
{
    const auto center =
        pose_from_rt(Quaternion::rotation(0.4, Vector3(1, 1, 0).normalized()), Quaternion::pure(Vector3(1, 2, 3)));
    const Vector3 extents(0.2, 0.4, 0.6);
    const auto planes = cuboid_planes(center, extents);
    const Vector3 c(1, 2, 3);
    for (const auto& p : planes) {
        CHECK(p.is_valid());
        CHECK(c.dot(p.n) - p.offset > 0.0);
    }
    // Center-to-face distances are the half extents in +x,-x,+y,-y,+z,-z order.
    for (int k = 0; k < 6; ++k) {
        const auto& p = planes[static_cast<std::size_t>(k)];
        CHECK(c.dot(p.n) - p.offset == doctest::Approx(0.5 * extents(k / 2)));
    }
    const Vector3 far = c + Vector3(10, 0, 0);
    bool outside = false;
    for (const auto& p : planes) {
        outside = outside || far.dot(p.n) - p.offset < 0.0;
    }
    CHECK(outside);
    CHECK_THROWS_AS(cuboid_planes(center, Vector3(1, 0, 1)), std::invalid_argument);
}

TEST_CASE("mismatched Jacobian widths are rejected")
{
    CHECK_THROWS_AS(dist_point_point(static_point(Vector3::Zero(), 3), static_point(Vector3::UnitX(), 4)),
                    std::invalid_argument);
}
