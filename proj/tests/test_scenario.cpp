#include "dqteleop/scenario.hpp"
#include "test_support.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>

using namespace dqteleop;
using namespace dqteleop::testing;
using nlohmann::json;

namespace {

json minimal()
{
    return json::parse(R"({
      "schema_version": 1,
      "name": "mini",
      "length_unit": "m",
      "duration": 0.01,
      "robots": [
        {"id": "a", "model": "models/psm_like.json", "q0": [0, 0, 0.1, 0, 0, 0]},
        {"id": "b", "model": "models/psm_like.json", "base": {"translation": [0.1, 0, 0]}, "q0": [0, 0, 0.1, 0, 0, 0]}
      ],
      "primitives": [
        {"id": "tip_a", "type": "point", "attached_to": {"robot": "a", "link": "effector"}},
        {"id": "shaft_b", "type": "line", "attached_to": {"robot": "b", "link": 3}, "direction": [0, 0, 1]},
        {"id": "floor", "type": "plane", "normal": [0, 0, 1], "offset": -0.2}
      ],
      "constraints": [
        {"name": "c1", "pair": ["shaft_b", "tip_a"], "zone": "restricted", "d_safe": 0.01},
        {"pair": ["floor", "tip_a"], "zone": "restricted"}
      ]
    })");
}

Scenario parse(const json& doc) { return scenario_from_json(doc, source_path("scenarios"), "mini.json"); }

std::string error_of(const json& doc)
{
    try {
        parse(doc);
    } catch (const ScenarioError& e) {
        return e.where() + ": " + e.what();
    }
    return "no error";
}

}  // namespace

TEST_CASE("bundled priority scenario")
{
    const auto sc = load_scenario(source_path("scenarios/dvrk-priority-b05.json"));
    CHECK(sc.robots.size() == 2);
    CHECK(sc.controller.beta == 0.5);
    CHECK(sc.controller.joint_limits);
    REQUIRE(sc.scene.constraints.size() == 3);
    CHECK(sc.scene.constraints[0].name == "shafts");
    CHECK(sc.scene.primitives[sc.scene.constraints[0].first].kind == PrimitiveKind::line);
    CHECK(sc.scene.primitives[sc.scene.constraints[0].second].kind == PrimitiveKind::line);
    CHECK(sc.scene.primitives[sc.scene.constraints[1].first].kind == PrimitiveKind::plane);
    CHECK(sc.ticks() == 15000);
    CHECK_FALSE(sc.script_path.empty());
}

TEST_CASE("bundled entry-sphere scenario")
{
    const auto sc = load_scenario(source_path("scenarios/infant-entry-sphere.json"));
    CHECK(sc.robots.size() == 2);
    CHECK(sc.length_unit == "mm");
    CHECK(sc.controller.beta == 0.5);
    int spheres = 0;
    int planes = 0;
    for (const auto& c : sc.scene.constraints) {
        if (c.spec.zone == Zone::safe) {
            ++spheres;
            CHECK(c.spec.d_safe == 2.0);
        } else {
            ++planes;
        }
    }
    CHECK(spheres == 2);
    CHECK(planes == 12);
    // The anchored entry points sit within half a millimetre of the shafts at q0.
    Controller controller(sc.scene, sc.controller);
    std::vector<DistanceResult> d;
    controller.constraints(sc.initial_q(), 0.0, &d);
    CHECK(d[0].d < 0.5);
    CHECK(d[1].d < 0.5);
    // Tips start at the box centres: 30 mm from the side walls, 20 mm from top and bottom.
    CHECK(d[2].d == doctest::Approx(30.0).epsilon(1e-9));
    CHECK(d[6].d == doctest::Approx(20.0).epsilon(1e-9));
}

TEST_CASE("minimal scenario resolves references and defaults")
{
    const auto sc = parse(minimal());
    CHECK(sc.name == "mini");
    CHECK(sc.scene.constraints.size() == 2);
    CHECK(sc.scene.constraints[1].name == "floor-tip_a");
    CHECK(sc.scene.constraints[0].spec.eta_d == sc.controller.eta_d);
    CHECK(sc.ticks() == 10);
    CHECK(sc.robot_index("b") == 1);
    CHECK_THROWS_AS(sc.robot_index("zz"), std::out_of_range);
    // Base of robot b is shifted by 0.1 m in x.
    const Vector3 ta = translation_of(fkm(sc.scene.robots[0], sc.robots[0].q0));
    const Vector3 tb = translation_of(fkm(sc.scene.robots[1], sc.robots[1].q0));
    CHECK((tb - ta - Vector3(0.1, 0.0, 0.0)).norm() < 1e-12);
}

TEST_CASE("millimetre scenarios rescale metre models")
{
    auto doc = minimal();
    doc["length_unit"] = "mm";
    doc["robots"][1]["base"]["translation"] = {100.0, 0.0, 0.0};
    doc["robots"][0]["q0"] = {0, 0, 100.0, 0, 0, 0};
    doc["robots"][1]["q0"] = {0, 0, 100.0, 0, 0, 0};
    doc["primitives"][2]["offset"] = -200.0;
    doc["constraints"][0]["d_safe"] = 10.0;
    const auto sc = parse(doc);
    const auto m = parse(minimal());
    const Vector3 t_mm = translation_of(fkm(sc.scene.robots[0], sc.robots[0].q0));
    const Vector3 t_m = translation_of(fkm(m.scene.robots[0], m.robots[0].q0));
    CHECK((t_mm - 1000.0 * t_m).norm() < 1e-9);
}

TEST_CASE("schema errors name the offending field")
{
    auto doc = minimal();
    doc["constraints"][0]["pair"][0] = "nope";
    CHECK(error_of(doc).find("constraints[0].pair[0]") != std::string::npos);
    CHECK(error_of(doc).find("unknown primitive 'nope'") != std::string::npos);

    doc = minimal();
    doc["primitives"][0]["attached_to"]["robot"] = "ghost";
    CHECK(error_of(doc).find("primitives[0].attached_to.robot") != std::string::npos);

    doc = minimal();
    doc["robots"][0]["q0"] = {0, 0, 0.1};
    CHECK(error_of(doc).find("robots[0].q0") != std::string::npos);

    doc = minimal();
    doc["robots"][0]["q0"] = {0, 0, 0.5, 0, 0, 0};
    CHECK(error_of(doc).find("outside the joint limits") != std::string::npos);

    doc = minimal();
    doc["constraints"][1]["zone"] = "forbidden";
    CHECK(error_of(doc).find("constraints[1].zone") != std::string::npos);

    doc = minimal();
    doc["controller"] = {{"alpha", 2.0}};
    CHECK(error_of(doc).find("alpha") != std::string::npos);

    doc = minimal();
    doc["controller"] = {{"alfa", 0.5}};
    CHECK(error_of(doc).find("controller.alfa") != std::string::npos);

    doc = minimal();
    doc["schema_version"] = 2;
    CHECK(error_of(doc).find("schema_version") != std::string::npos);

    doc = minimal();
    doc.erase("robots");
    CHECK(error_of(doc).find("robots") != std::string::npos);

    doc = minimal();
    doc["primitives"][2]["attached_to"] = {{"robot", "a"}, {"link", 2}};
    CHECK(error_of(doc).find("planes must be attached to the world") != std::string::npos);

    doc = minimal();
    doc["constraints"][1]["pair"] = {"floor", "shaft_b"};
    CHECK(error_of(doc).find("no distance between a plane and a line") != std::string::npos);

    doc = minimal();
    doc["primitives"].push_back({{"id", "box"}, {"type", "cuboid"}, {"center", {0, 0, 0}}, {"extents", {1, 1, 1}}});
    doc["constraints"].push_back({{"pair", {"box", "tip_a"}}, {"zone", "restricted"}});
    CHECK(error_of(doc).find("a cuboid constraint must be a safe zone") != std::string::npos);
}

TEST_CASE("cuboid safe zones expand to six inward faces")
{
    auto doc = minimal();
    doc["primitives"].push_back(
        {{"id", "box"}, {"type", "cuboid"}, {"center", {{"anchor", {{"robot", "a"}, {"link", "effector"}}}}}, {"extents", {0.1, 0.2, 0.3}}});
    doc["constraints"].push_back({{"name", "stay"}, {"pair", {"box", "tip_a"}}, {"zone", "safe"}});
    const auto sc = parse(doc);
    REQUIRE(sc.scene.constraints.size() == 8);
    CHECK(sc.scene.constraints[2].name == "stay.+x");
    CHECK(sc.scene.constraints[7].name == "stay.-z");
    Controller controller(sc.scene, sc.controller);
    std::vector<DistanceResult> d;
    controller.constraints(sc.initial_q(), 0.0, &d);
    CHECK(d[2].d == doctest::Approx(0.05));
    CHECK(d[3].d == doctest::Approx(0.05));
    CHECK(d[4].d == doctest::Approx(0.1));
    CHECK(d[7].d == doctest::Approx(0.15));
}

TEST_CASE("file errors report the JSON line")
{
    const auto dir = std::filesystem::temp_directory_path() / "dqteleop_scenario_test";
    std::filesystem::create_directories(dir);
    const auto path = (dir / "broken.json").string();
    {
        std::ofstream out(path);
        out << "{\n  \"schema_version\": 1,\n  \"name\": \"x\",\n  oops\n}\n";
    }
    try {
        load_scenario(path);
        FAIL("expected an error");
    } catch (const ScenarioError& e) {
        CHECK(e.where() == "line 4");
        CHECK(e.file() == path);
    }
    CHECK_THROWS_AS(load_scenario((dir / "missing.json").string()), ScenarioError);
}

TEST_CASE("runtime parameter changes are validated")
{
    ControllerConfig cfg;
    set_controller_param(cfg, "beta", 0.99);
    CHECK(cfg.beta == 0.99);
    set_controller_param(cfg, "alpha", 0.5);
    CHECK(cfg.alpha == 0.5);
    CHECK_THROWS_AS(set_controller_param(cfg, "beta", 1.5), std::invalid_argument);
    CHECK(cfg.beta == 0.99);
    CHECK_THROWS_AS(set_controller_param(cfg, "gamma", 1.0), std::invalid_argument);
    CHECK_THROWS_AS(set_controller_param(cfg, "eta", std::nan("")), std::invalid_argument);
}
