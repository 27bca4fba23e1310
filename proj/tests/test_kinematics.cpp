#include "dqteleop/kinematics.hpp"
#include "test_support.hpp"

#include <doctest.h>

#include <cmath>
#include <stdexcept>

using namespace dqteleop;
using namespace dqteleop::testing;

namespace {

void check_model_jacobians(const RobotModel& model, unsigned seed)
{
    std::mt19937 rng(seed);
    for (int trial = 0; trial < 25; ++trial) {
        const VectorXd q = random_configuration(model, rng);

        const MatrixXd j = pose_jacobian(model, q);
        const MatrixXd j_fd = numeric_jacobian([&](const VectorXd& v) { return VectorXd(vec8(fkm(model, v))); }, q);
        CHECK(relative_error(j, j_fd) < 1e-6);

        const MatrixXd jt = translation_jacobian(model, q);
        const MatrixXd jt_fd =
            numeric_jacobian([&](const VectorXd& v) { return VectorXd(translation_of(fkm(model, v))); }, q);
        CHECK(relative_error(jt, jt_fd) < 1e-6);

        const Vector3 axis = Vector3(0.3, -0.2, 0.9).normalized();
        const auto lk = line_jacobian(model, q, axis);
        CHECK(lk.line.is_valid());
        const MatrixXd jl_fd = numeric_jacobian(
            [&](const VectorXd& v) { return VectorXd(line_jacobian(model, v, axis).line.to_vec8()); }, q);
        CHECK(relative_error(lk.jacobian, jl_fd) < 1e-6);

        for (int link = 1; link <= model.dof(); ++link) {
            const Vector3 offset(0.01, -0.02, 0.03);
            const auto pk = point_jacobian(model, q, link, offset);
            const MatrixXd jp_fd = numeric_jacobian(
                [&](const VectorXd& v) { return VectorXd(point_jacobian(model, v, link, offset).p); }, q);
            CHECK(relative_error(pk.jacobian, jp_fd) < 1e-6);
            // Joints after the link do not move it.
            if (link < model.dof()) {
                CHECK(pk.jacobian.rightCols(model.dof() - link).norm() == 0.0);
            }
        }
    }
}

}  // namespace

TEST_CASE("pose, translation, line and point Jacobians match finite differences (psm_like)")
{
    check_model_jacobians(psm_model(), 11);
}

TEST_CASE("pose, translation, line and point Jacobians match finite differences (redundant_7r)")
{
    check_model_jacobians(redundant_model(), 12);
}

TEST_CASE("prismatic joint moves along the previous z axis")
{
    const RobotModel model("slider", {DhJoint{JointType::prismatic, 0.0, 0.1, 0.0, 0.0}});
    VectorXd q(1);
    q << 0.25;
    CHECK((translation_of(fkm(model, q)) - Vector3(0.0, 0.0, 0.35)).norm() < 1e-15);
    const MatrixXd jt = translation_jacobian(model, q);
    CHECK((jt.col(0) - Vector3::UnitZ()).norm() < 1e-15);
}

TEST_CASE("planar two-link arm matches the closed form")
{
    const RobotModel model("planar", {DhJoint{JointType::revolute, 0.0, 0.0, 1.0, 0.0},
                                      DhJoint{JointType::revolute, 0.0, 0.0, 0.5, 0.0}});
    VectorXd q(2);
    q << 0.3, -0.7;
    const Vector3 expected(std::cos(0.3) + 0.5 * std::cos(-0.4), std::sin(0.3) + 0.5 * std::sin(-0.4), 0.0);
    CHECK((translation_of(fkm(model, q)) - expected).norm() < 1e-14);
}

TEST_CASE("psm-like tool points along its shaft at the zero configuration")
{
    const auto model = psm_model();
    VectorXd q = VectorXd::Zero(6);
    q(2) = 0.1;
    const auto x = fkm(model, q);
    const Vector3 t = translation_of(x);
    // Shaft points down from the remote center at the base origin.
    CHECK(std::abs(t.x()) < 1e-12);
    CHECK(std::abs(t.y()) < 1e-12);
    CHECK(t.z() == doctest::Approx(-(0.1 + 0.0091 + 0.0102)).epsilon(1e-12));
    const auto shaft = line_jacobian(model, q, 3, Vector3::Zero(), Vector3::UnitZ()).line;
    CHECK((shaft.l - Vector3(0.0, 0.0, -1.0)).norm() < 1e-12);
}

TEST_CASE("model JSON round trip and validation")
{
    const auto model = redundant_model();
    CHECK(model.length_unit() == "mm");
    CHECK(model.forceps_joints() == 3);
    const auto again = robot_model_from_json(robot_model_to_json(model));
    std::mt19937 rng(5);
    const VectorXd q = random_configuration(model, rng);
    CHECK((vec8(fkm(model, q)) - vec8(fkm(again, q))).norm() < 1e-12);

    auto doc = robot_model_to_json(model);
    doc["dh"][0][4] = "helical";
    CHECK_THROWS_AS(robot_model_from_json(doc), std::invalid_argument);
    doc = robot_model_to_json(model);
    doc.erase("q_max");
    CHECK_THROWS_AS(robot_model_from_json(doc), std::invalid_argument);
    doc = robot_model_to_json(model);
    doc["base"] = {2, 0, 0, 0, 0, 0, 0, 0};
    CHECK_THROWS_AS(robot_model_from_json(doc), std::invalid_argument);
    CHECK_THROWS_AS(fkm(model, VectorXd::Zero(3)), std::invalid_argument);
    CHECK_THROWS_AS(load_robot_model("/nonexistent/model.json"), std::runtime_error);
}

TEST_CASE("rescaling lengths scales positions but not orientations")
{
    auto model = psm_model();
    std::mt19937 rng(6);
    VectorXd q = random_configuration(model, rng);
    const auto x_m = fkm(model, q);
    model.rescale_lengths(1000.0, "mm");
    q(2) *= 1000.0;
    const auto x_mm = fkm(model, q);
    CHECK((translation_of(x_mm) - 1000.0 * translation_of(x_m)).norm() < 1e-9);
    CHECK((vec4(x_mm.primary()) - vec4(x_m.primary())).norm() < 1e-12);
    CHECK(model.q_max()(2) == doctest::Approx(240.0));
}
