#include "dqteleop/impedance.hpp"
#include "test_support.hpp"

#include <doctest.h>

#include <cmath>

using namespace dqteleop;
using namespace dqteleop::testing;

namespace {

MasterCommand command(bool clutch, Vector3 dt, Quaternion dr = quat::one)
{
    return {0, clutch, dt, dr};
}

}  // namespace

TEST_CASE("engaged clutch scales master translation")
{
    MasterSlaveMapping m({quat::one, Vector3(0.1, 0.2, 0.3)}, quat::one, 0.5);
    CHECK_FALSE(m.engaged());
    m.apply(command(true, Vector3(0.010, 0.0, -0.004)));
    CHECK((m.target().t_d - Vector3(0.105, 0.2, 0.298)).norm() < 1e-15);
    CHECK((m.master_position() - Vector3(0.010, 0.0, -0.004)).norm() < 1e-15);
}

TEST_CASE("released clutch freezes the target but tracks the master")
{
    MasterSlaveMapping m({quat::one, Vector3::Zero()}, quat::one, 1.0);
    m.apply(command(true, Vector3(0.01, 0.0, 0.0)));
    const TaskTarget held = m.target();
    m.apply(command(false, Vector3(0.05, 0.05, 0.0), Quaternion::rotation(0.3, Vector3::UnitZ())));
    CHECK_FALSE(m.engaged());
    CHECK(m.target().t_d == held.t_d);
    CHECK(m.target().r_d == held.r_d);
    CHECK((m.master_position() - Vector3(0.06, 0.05, 0.0)).norm() < 1e-15);
    // Re-engaging continues from the held target (relative mapping).
    m.apply(command(true, Vector3(0.0, 0.01, 0.0)));
    CHECK((m.target().t_d - Vector3(0.01, 0.01, 0.0)).norm() < 1e-15);
}

TEST_CASE("alignment rotates master motion into the slave frame")
{
    const Quaternion a = Quaternion::rotation(M_PI / 2.0, Vector3::UnitZ());
    MasterSlaveMapping m({quat::one, Vector3::Zero()}, a, 1.0 / 3.0);
    m.apply(command(true, Vector3(0.03, 0.0, 0.0)));
    // Master +x is slave +y.
    CHECK((m.target().t_d - Vector3(0.0, 0.01, 0.0)).norm() < 1e-15);
    CHECK((m.to_master(Vector3(0.0, 0.01, 0.0)) - Vector3(0.03, 0.0, 0.0)).norm() < 1e-15);

    // A master rotation about its x axis turns the slave about world y.
    m.apply(command(true, Vector3::Zero(), Quaternion::rotation(0.2, Vector3::UnitX())));
    const Quaternion expect = Quaternion::rotation(0.2, Vector3::UnitY());
    CHECK((vec4(m.target().r_d) - vec4(expect)).norm() < 1e-14);
}

TEST_CASE("rotation deltas compose and stay unit")
{
    MasterSlaveMapping m({quat::one, Vector3::Zero()}, quat::one, 1.0);
    const Quaternion step = Quaternion::rotation(M_PI / 2000.0, Vector3::UnitZ());
    for (int i = 0; i < 1000; ++i) {
        m.apply(command(true, Vector3::Zero(), step));
    }
    const Quaternion expect = Quaternion::rotation(M_PI / 2.0, Vector3::UnitZ());
    CHECK((vec4(m.target().r_d) - vec4(expect)).norm() < 1e-12);
    CHECK(m.target().r_d.is_unit(1e-12));
}

TEST_CASE("mapping input validation")
{
    CHECK_THROWS_AS(MasterSlaveMapping({}, Quaternion(0.5, 0, 0, 0), 1.0), std::invalid_argument);
    CHECK_THROWS_AS(MasterSlaveMapping({}, quat::one, 0.0), std::invalid_argument);
    MasterSlaveMapping m({}, quat::one, 1.0);
    CHECK_THROWS_AS(m.apply(command(true, Vector3::Zero(), Quaternion(1.0, 1.0, 0.0, 0.0))), std::invalid_argument);
    CHECK_THROWS_AS(m.set_motion_scaling(-1.0), std::invalid_argument);
}

TEST_CASE("force law at the bundled gains")
{
    const ImpedanceConfig dvrk{350.0, 10.0};
    const ImpedanceConfig infant{100.0, 10.0};
    const Vector3 e(0.002, -0.001, 0.0005);
    const Vector3 v(0.0, 0.05, -0.01);
    CHECK((master_force(e, v, dvrk) - Vector3(-0.7, 0.35 - 0.5, -0.175 + 0.1)).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((master_force(e, v, infant) - Vector3(-0.2, 0.1 - 0.5, -0.05 + 0.1)).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(master_force(Vector3::Zero(), Vector3::Zero(), dvrk).isZero(0.0));
}

TEST_CASE("force pulls the master back toward the lagging slave")
{
    // MS 1/2: the slave lags 5 mm behind its target, so the master leads by 10 mm.
    MasterSlaveMapping m({quat::one, Vector3::Zero()}, quat::one, 0.5);
    m.apply(command(true, Vector3(0.01, 0.0, 0.0)));
    const Vector3 slave(0.0, 0.0, 0.0);
    const Vector3 e = master_error(m, slave, m.target().t_d);
    CHECK((e - Vector3(0.01, 0.0, 0.0)).norm() < 1e-15);
    const Vector3 f = master_force(e, Vector3::Zero(), {350.0, 10.0});
    CHECK(f.x() == doctest::Approx(-3.5).epsilon(1e-12));
}

TEST_CASE("impedance validation")
{
    CHECK_THROWS_AS((ImpedanceConfig{0.0, 1.0}.validate()), std::invalid_argument);
    CHECK_THROWS_AS((ImpedanceConfig{1.0, -1.0}.validate()), std::invalid_argument);
    CHECK_NOTHROW((ImpedanceConfig{350.0, 10.0}.validate()));
}
