#include "dqteleop/controller.hpp"
#include "dqteleop/scenario.hpp"
#include "test_support.hpp"

#include <doctest.h>

#include <cmath>

using namespace dqteleop;
using namespace dqteleop::testing;

namespace {

Scenario dvrk() { return load_scenario(source_path("scenarios/dvrk-priority-b05.json")); }

std::vector<TaskTarget> current_targets(const Scene& scene, const std::vector<VectorXd>& q)
{
    std::vector<TaskTarget> out;
    for (std::size_t i = 0; i < q.size(); ++i) {
        const auto rt = rt_from_pose(fkm(scene.robots[i], q[i]));
        out.push_back({rt.rotation, vec3(rt.translation)});
    }
    return out;
}

Objective objective_at(const Scene& scene, const std::vector<VectorXd>& q, const std::vector<TaskTarget>& targets,
                       const ControllerConfig& cfg)
{
    std::vector<RobotTaskState> states;
    for (std::size_t i = 0; i < q.size(); ++i) {
        states.push_back({fkm(scene.robots[i], q[i]), pose_jacobian(scene.robots[i], q[i])});
    }
    return build_objective(scene.robots, states, targets, cfg);
}

VectorXd stack(const std::vector<VectorXd>& parts)
{
    Eigen::Index n = 0;
    for (const auto& p : parts) {
        n += p.size();
    }
    VectorXd out(n);
    n = 0;
    for (const auto& p : parts) {
        out.segment(n, p.size()) = p;
        n += p.size();
    }
    return out;
}

}  // namespace

TEST_CASE("switching error picks the closer of r_d and -r_d")
{
    std::mt19937 rng(3);
    for (int i = 0; i < 50; ++i) {
        const Quaternion r = random_unit_quaternion(rng);
        CHECK(switching_rotation_error(r, r).norm() < 1e-15);
        CHECK(switching_rotation_error(r, r * -1.0).norm() < 1e-15);
        const Quaternion rd = random_unit_quaternion(rng);
        const Vector4 e = switching_rotation_error(r, rd);
        const Vector4 rt = vec4(r.conj() * rd);
        CHECK(e.norm() <= std::min((rt - Vector4::UnitX()).norm(), (rt + Vector4::UnitX()).norm()) + 1e-15);
    }
    CHECK_THROWS_AS(switching_rotation_error(Quaternion(2.0, 0, 0, 0), quat::one), std::invalid_argument);
}

TEST_CASE("priority weights and damping")
{
    ControllerConfig cfg;
    cfg.beta = 0.01;
    auto b = priority_weights(cfg, 2);
    CHECK(b[0] == doctest::Approx(0.01));
    CHECK(b[1] == doctest::Approx(0.99));
    cfg.beta = 0.0;
    b = priority_weights(cfg, 2);
    CHECK(b[0] == cfg.beta_floor);
    CHECK(b[1] == 1.0);
    CHECK(priority_weights(cfg, 1) == std::vector<double>{1.0});
    CHECK(priority_weights(cfg, 3) == std::vector<double>{1.0, 1.0, 1.0});

    cfg.lambda_r = 0.2;
    cfg.lambda_f = 0.05;
    const MatrixXd lam = damping_matrix(psm_model(), cfg);
    CHECK(lam.diagonal().head(3).isApproxToConstant(0.2));
    CHECK(lam.diagonal().tail(3).isApproxToConstant(0.05));
}

TEST_CASE("objective with only translation reduces to the damped least-squares form")
{
    const auto model = psm_model();
    std::mt19937 rng(8);
    ControllerConfig cfg;
    cfg.alpha = 1.0;
    cfg.eta = 3.0;
    cfg.lambda_r = cfg.lambda_f = 0.1;
    const VectorXd q = random_configuration(model, rng);
    const auto x = fkm(model, q);
    const TaskTarget target{quat::one, translation_of(x) + Vector3(0.01, -0.02, 0.005)};
    const auto obj = build_objective({model}, {{x, pose_jacobian(model, q)}}, {target}, cfg);
    const MatrixXd jt = translation_jacobian(model, q);
    const auto ref = damped_task_objective(jt, translation_of(x) - target.t_d, cfg.eta, 0.01);
    CHECK((obj.H - ref.H).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((obj.f - ref.f).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("rotation part of the objective matches a finite-difference gradient of the error norm")
{
    // With alpha = 0, f = 2 eta J_e' e where e is the rotation error; J_e' e is half the gradient of |e|^2.
    const auto model = psm_model();
    std::mt19937 rng(13);
    ControllerConfig cfg;
    cfg.alpha = 0.0;
    cfg.eta = 1.0;
    for (int i = 0; i < 10; ++i) {
        const VectorXd q = random_configuration(model, rng);
        const Quaternion rd = random_unit_quaternion(rng);
        const auto x = fkm(model, q);
        const auto obj = build_objective({model}, {{x, pose_jacobian(model, q)}}, {{rd, Vector3::Zero()}}, cfg);
        const auto err2 = [&](const VectorXd& v) {
            return VectorXd::Constant(1, switching_rotation_error(fkm(model, v).primary(), rd).squaredNorm());
        };
        const VectorXd grad = numeric_jacobian(err2, q).transpose();
        CHECK((obj.f - grad).cwiseAbs().maxCoeff() < 1e-6);
    }
}

TEST_CASE("controller output is the constrained minimizer")
{
    auto sc = dvrk();
    Controller controller(sc.scene, sc.controller);
    std::mt19937 rng(99);
    auto q = sc.initial_q();
    auto targets = current_targets(sc.scene, q);
    targets[0].t_d += Vector3(0.0, 0.04, -0.02);
    targets[1].t_d += Vector3(0.01, -0.03, 0.0);
    const auto out = controller.step(q, targets, 0.0);
    REQUIRE(out.status == QpStatus::optimal);
    REQUIRE_FALSE(out.fallback);
    const auto obj = objective_at(sc.scene, q, targets, sc.controller);
    const auto ineq = controller.constraints(q, 0.0);
    const VectorXd x = stack(out.qdot);
    CHECK((ineq.W * x - ineq.w).maxCoeff() < 1e-10);
    const auto cost = [&](const VectorXd& v) { return 0.5 * v.dot(obj.H * v) + obj.f.dot(v); };
    std::normal_distribution<double> n(0.0, 1e-3);
    int tried = 0;
    for (int i = 0; i < 2000; ++i) {
        VectorXd y = x;
        for (Eigen::Index k = 0; k < y.size(); ++k) {
            y(k) += n(rng);
        }
        if ((ineq.W * y - ineq.w).maxCoeff() > 0.0) {
            continue;
        }
        ++tried;
        CHECK(cost(y) >= cost(x) - 1e-12);
    }
    CHECK(tried > 100);
}

TEST_CASE("targets at the current pose give zero velocity")
{
    auto sc = dvrk();
    Controller controller(sc.scene, sc.controller);
    const auto q = sc.initial_q();
    const auto out = controller.step(q, current_targets(sc.scene, q), 0.0);
    CHECK(out.status == QpStatus::optimal);
    for (const auto& qd : out.qdot) {
        CHECK(qd.norm() < 1e-12);
    }
    // Without constraints the slacks equal the bounds.
    for (const auto& c : out.constraints) {
        CHECK(c.rate == doctest::Approx(0.0).epsilon(1e-12));
    }
}

TEST_CASE("unwinding: the antipodal target needs no motion")
{
    auto sc = dvrk();
    Controller controller(sc.scene, sc.controller);
    const auto q = sc.initial_q();
    auto targets = current_targets(sc.scene, q);
    for (auto& t : targets) {
        t.r_d = t.r_d * -1.0;
    }
    const auto out = controller.step(q, targets, 0.0);
    for (const auto& qd : out.qdot) {
        CHECK(qd.norm() < 1e-12);
    }
}

TEST_CASE("closed loop converges to a reachable target")
{
    auto sc = dvrk();
    auto cfg = sc.controller;
    cfg.eta = 5.0;
    Controller controller(sc.scene, cfg);
    auto q = sc.initial_q();
    auto targets = current_targets(sc.scene, q);
    targets[1].t_d += Vector3(0.01, 0.005, 0.0);
    double err = 0.0;
    for (int k = 0; k < 3000; ++k) {
        const auto out = controller.step(q, targets, k * cfg.sampling_time);
        REQUIRE_FALSE(out.fallback);
        for (std::size_t i = 0; i < q.size(); ++i) {
            q[i] += cfg.sampling_time * out.qdot[i];
        }
        err = out.robots[1].t_error.norm();
    }
    CHECK(err < 2e-4);
}

TEST_CASE("joint velocity caps and limits bound the command")
{
    auto sc = dvrk();
    Controller controller(sc.scene, sc.controller);
    auto q = sc.initial_q();
    auto targets = current_targets(sc.scene, q);
    targets[0].t_d += Vector3(0.0, 0.0, -1.0);  // far beyond the prismatic stroke
    const auto out = controller.step(q, targets, 0.0);
    const auto& model = sc.scene.robots[0];
    for (int j = 0; j < model.dof(); ++j) {
        CHECK(std::abs(out.qdot[0](j)) <= model.qd_max()(j) + 1e-12);
    }

    // At the upper insertion limit the prismatic joint may not advance further.
    q[0](2) = model.q_max()(2);
    const auto at_limit = controller.step(q, targets, 0.0);
    CHECK(at_limit.qdot[0](2) <= 1e-12);
}

TEST_CASE("infeasible constraints fall back to zero velocity")
{
    auto sc = dvrk();
    // Board moved far above the left tip: leaving it at the damper rate needs more than the caps allow.
    for (auto& p : sc.scene.primitives) {
        if (p.name == "board") {
            p.offset = 0.05;
        }
    }
    for (auto& c : sc.scene.constraints) {
        c.spec.eta_d = 1000.0;
    }
    Controller controller(sc.scene, sc.controller);
    const auto q = sc.initial_q();
    auto targets = current_targets(sc.scene, q);
    targets[0].t_d += Vector3(0.0, 0.01, 0.0);
    const auto out = controller.step(q, targets, 0.0);
    CHECK(out.status == QpStatus::infeasible);
    CHECK(out.fallback);
    for (const auto& qd : out.qdot) {
        CHECK(qd.isZero(0.0));
    }
}

TEST_CASE("config validation")
{
    ControllerConfig cfg;
    cfg.alpha = 1.5;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg = {};
    cfg.eta = 0.0;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg = {};
    cfg.eta_q = -1.0;
    cfg.eta_d = 2.5;
    CHECK(cfg.joint_limit_gain() == 2.5);
    cfg.eta_q = 4.0;
    CHECK(cfg.joint_limit_gain() == 4.0);
    auto sc = dvrk();
    Controller controller(sc.scene, sc.controller);
    cfg = sc.controller;
    cfg.beta = -0.1;
    CHECK_THROWS_AS(controller.set_config(cfg), std::invalid_argument);
    CHECK(controller.config().beta == sc.controller.beta);
}
