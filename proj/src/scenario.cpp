#include "dqteleop/scenario.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace dqteleop {

using nlohmann::json;

namespace {

// Walks the document and reports errors with their field path.
class Reader {
public:
    explicit Reader(std::string file) : file_(std::move(file)) {}

    [[noreturn]] void fail(const std::string& path, const std::string& message) const
    {
        throw ScenarioError(file_, path, message);
    }

    void only_keys(const json& obj, const std::string& path, std::initializer_list<const char*> keys) const
    {
        const std::set<std::string> allowed(keys.begin(), keys.end());
        for (const auto& [key, value] : obj.items()) {
            if (!allowed.contains(key)) {
                fail(join(path, key), "unknown field");
            }
        }
    }

    const json& object(const json& j, const std::string& path) const
    {
        if (!j.is_object()) {
            fail(path, "expected an object");
        }
        return j;
    }

    const json& array(const json& j, const std::string& path) const
    {
        if (!j.is_array()) {
            fail(path, "expected an array");
        }
        return j;
    }

    const json& field(const json& obj, const std::string& path, const char* key) const
    {
        if (!obj.contains(key)) {
            fail(join(path, key), "missing required field");
        }
        return obj.at(key);
    }

    double number(const json& j, const std::string& path) const
    {
        if (!j.is_number()) {
            fail(path, "expected a number");
        }
        const double v = j.get<double>();
        if (!std::isfinite(v)) {
            fail(path, "expected a finite number");
        }
        return v;
    }

    double number_or(const json& obj, const std::string& path, const char* key, double fallback) const
    {
        return obj.contains(key) ? number(obj.at(key), join(path, key)) : fallback;
    }

    std::string string(const json& j, const std::string& path) const
    {
        if (!j.is_string()) {
            fail(path, "expected a string");
        }
        return j.get<std::string>();
    }

    bool boolean(const json& j, const std::string& path) const
    {
        if (!j.is_boolean()) {
            fail(path, "expected true or false");
        }
        return j.get<bool>();
    }

    VectorXd vector(const json& j, const std::string& path, Eigen::Index size = -1) const
    {
        array(j, path);
        if (size >= 0 && static_cast<Eigen::Index>(j.size()) != size) {
            fail(path, "expected " + std::to_string(size) + " numbers");
        }
        VectorXd v(static_cast<Eigen::Index>(j.size()));
        for (std::size_t i = 0; i < j.size(); ++i) {
            v(static_cast<Eigen::Index>(i)) = number(j.at(i), index(path, i));
        }
        return v;
    }

    Vector3 vec3(const json& j, const std::string& path) const { return vector(j, path, 3); }

    Vector3 unit3(const json& j, const std::string& path) const
    {
        const Vector3 v = vec3(j, path);
        if (v.norm() < 1e-12) {
            fail(path, "direction must be non-zero");
        }
        return v.normalized();
    }

    static std::string join(const std::string& path, const std::string& key)
    {
        return path.empty() ? key : path + "." + key;
    }
    static std::string index(const std::string& path, std::size_t i) { return path + "[" + std::to_string(i) + "]"; }

private:
    std::string file_;
};

Quaternion parse_rotation(const Reader& rd, const json& j, const std::string& path)
{
    if (j.is_array()) {
        const VectorXd v = rd.vector(j, path, 4);
        if (v.norm() < 1e-12) {
            rd.fail(path, "rotation quaternion must be non-zero");
        }
        return Quaternion::from_vec4(v.normalized());
    }
    rd.object(j, path);
    rd.only_keys(j, path, {"axis", "angle"});
    const Vector3 axis = rd.unit3(rd.field(j, path, "axis"), Reader::join(path, "axis"));
    return Quaternion::rotation(rd.number(rd.field(j, path, "angle"), Reader::join(path, "angle")), axis);
}

// A pose is an 8-vector or {translation, rotation}.
DualQuaternion parse_pose(const Reader& rd, const json& j, const std::string& path)
{
    if (j.is_array()) {
        const auto x = DualQuaternion::from_vec8(rd.vector(j, path, 8));
        if (!x.is_unit(1e-6)) {
            rd.fail(path, "pose is not a unit dual quaternion");
        }
        return x.normalized();
    }
    rd.object(j, path);
    rd.only_keys(j, path, {"translation", "rotation"});
    const Vector3 t = j.contains("translation") ? rd.vec3(j.at("translation"), Reader::join(path, "translation"))
                                                : Vector3::Zero();
    const Quaternion r =
        j.contains("rotation") ? parse_rotation(rd, j.at("rotation"), Reader::join(path, "rotation")) : quat::one;
    return pose_from_rt(r, Quaternion::pure(t));
}

double unit_factor(const std::string& from, const std::string& to)
{
    if (from == to) {
        return 1.0;
    }
    return from == "m" ? 1000.0 : 1e-3;
}

struct PrimitiveRef {
    std::vector<std::size_t> indices;  // one entry, or six planes for a cuboid
    bool cuboid = false;
    double radius = -1.0;              // spheres only
};

class ScenarioParser {
public:
    ScenarioParser(const json& doc, std::filesystem::path base_dir, const std::string& label)
        : doc_(doc), base_(std::move(base_dir)), rd_(label)
    {
    }

    Scenario parse()
    {
        rd_.object(doc_, "<root>");
        rd_.only_keys(doc_, "", {"schema_version", "name", "description", "length_unit", "duration", "seed", "robots",
                                 "primitives", "constraints", "controller", "impedance", "script"});
        const auto& version = rd_.field(doc_, "", "schema_version");
        if (!version.is_number_integer() || version.get<int>() != scenario_schema_version) {
            rd_.fail("schema_version", "unsupported version (expected " + std::to_string(scenario_schema_version) + ")");
        }
        sc_.name = doc_.contains("name") ? rd_.string(doc_.at("name"), "name") : "scenario";
        sc_.length_unit = doc_.contains("length_unit") ? rd_.string(doc_.at("length_unit"), "length_unit") : "m";
        if (sc_.length_unit != "m" && sc_.length_unit != "mm") {
            rd_.fail("length_unit", "must be \"m\" or \"mm\"");
        }
        sc_.duration = rd_.number_or(doc_, "", "duration", 10.0);
        if (!(sc_.duration > 0.0)) {
            rd_.fail("duration", "must be positive");
        }
        if (doc_.contains("seed")) {
            if (!doc_.at("seed").is_number_unsigned()) {
                rd_.fail("seed", "expected a non-negative integer");
            }
            sc_.seed = doc_.at("seed").get<std::uint64_t>();
        }
        parse_controller();
        parse_impedance();
        parse_robots();
        parse_primitives();
        parse_constraints();
        if (doc_.contains("script")) {
            sc_.script_path = (base_ / rd_.string(doc_.at("script"), "script")).lexically_normal().string();
        }
        try {
            sc_.scene.validate();
        } catch (const std::invalid_argument& e) {
            rd_.fail("<scene>", e.what());
        }
        return std::move(sc_);
    }

private:
    void parse_controller()
    {
        auto& c = sc_.controller;
        if (!doc_.contains("controller")) {
            return;
        }
        const auto& j = rd_.object(doc_.at("controller"), "controller");
        rd_.only_keys(j, "controller", {"alpha", "beta", "eta", "lambda_r", "lambda_f", "eta_d", "eta_q",
                                        "sampling_time", "motion_scaling", "beta_floor", "joint_limits"});
        c.alpha = rd_.number_or(j, "controller", "alpha", c.alpha);
        c.beta = rd_.number_or(j, "controller", "beta", c.beta);
        c.eta = rd_.number_or(j, "controller", "eta", c.eta);
        c.lambda_r = rd_.number_or(j, "controller", "lambda_r", c.lambda_r);
        c.lambda_f = rd_.number_or(j, "controller", "lambda_f", c.lambda_f);
        c.eta_d = rd_.number_or(j, "controller", "eta_d", c.eta_d);
        c.eta_q = rd_.number_or(j, "controller", "eta_q", c.eta_q);
        c.sampling_time = rd_.number_or(j, "controller", "sampling_time", c.sampling_time);
        c.motion_scaling = rd_.number_or(j, "controller", "motion_scaling", c.motion_scaling);
        c.beta_floor = rd_.number_or(j, "controller", "beta_floor", c.beta_floor);
        if (j.contains("joint_limits")) {
            c.joint_limits = rd_.boolean(j.at("joint_limits"), "controller.joint_limits");
        }
        try {
            c.validate();
        } catch (const std::invalid_argument& e) {
            rd_.fail("controller", e.what());
        }
    }

    void parse_impedance()
    {
        if (!doc_.contains("impedance")) {
            return;
        }
        const auto& j = rd_.object(doc_.at("impedance"), "impedance");
        rd_.only_keys(j, "impedance", {"eta_f", "eta_v"});
        sc_.impedance.eta_f = rd_.number_or(j, "impedance", "eta_f", sc_.impedance.eta_f);
        sc_.impedance.eta_v = rd_.number_or(j, "impedance", "eta_v", sc_.impedance.eta_v);
        try {
            sc_.impedance.validate();
        } catch (const std::invalid_argument& e) {
            rd_.fail("impedance", e.what());
        }
    }

    void parse_robots()
    {
        const auto& robots = rd_.array(rd_.field(doc_, "", "robots"), "robots");
        if (robots.empty()) {
            rd_.fail("robots", "at least one robot is required");
        }
        for (std::size_t i = 0; i < robots.size(); ++i) {
            const std::string path = Reader::index("robots", i);
            const auto& j = rd_.object(robots.at(i), path);
            rd_.only_keys(j, path, {"id", "model", "base", "q0", "master_alignment"});
            RobotSetup setup;
            setup.id = rd_.string(rd_.field(j, path, "id"), Reader::join(path, "id"));
            if (robot_ids_.contains(setup.id)) {
                rd_.fail(Reader::join(path, "id"), "duplicate robot id '" + setup.id + "'");
            }
            setup.model_path =
                (base_ / rd_.string(rd_.field(j, path, "model"), Reader::join(path, "model"))).lexically_normal().string();
            RobotModel model;
            try {
                model = load_robot_model(setup.model_path);
            } catch (const std::exception& e) {
                rd_.fail(Reader::join(path, "model"), e.what());
            }
            model.rescale_lengths(unit_factor(model.length_unit(), sc_.length_unit), sc_.length_unit);
            if (j.contains("base")) {
                model.set_base(parse_pose(rd_, j.at("base"), Reader::join(path, "base")) * model.base());
            }
            setup.q0 = rd_.vector(rd_.field(j, path, "q0"), Reader::join(path, "q0"), model.dof());
            if (j.contains("master_alignment")) {
                setup.master_alignment =
                    parse_rotation(rd_, j.at("master_alignment"), Reader::join(path, "master_alignment"));
            }
            if (!model.initial_state(setup.q0).within_limits()) {
                rd_.fail(Reader::join(path, "q0"), "initial configuration is outside the joint limits");
            }
            robot_ids_[setup.id] = sc_.robots.size();
            sc_.robots.push_back(setup);
            sc_.scene.robots.push_back(std::move(model));
        }
    }

    std::size_t robot_ref(const json& j, const std::string& path) const
    {
        const auto id = rd_.string(j, path);
        const auto it = robot_ids_.find(id);
        if (it == robot_ids_.end()) {
            rd_.fail(path, "unknown robot '" + id + "'");
        }
        return it->second;
    }

    int link_ref(const json& obj, const std::string& path) const
    {
        if (!obj.contains("link")) {
            return RobotModel::effector_link;
        }
        const auto& j = obj.at("link");
        const auto p = Reader::join(path, "link");
        if (j.is_string() && j.get<std::string>() == "effector") {
            return RobotModel::effector_link;
        }
        if (!j.is_number_integer()) {
            rd_.fail(p, "expected a link index or \"effector\"");
        }
        return j.get<int>();
    }

    // A position is [x, y, z] or {"anchor": {robot, link, point}, "shift": [..]} resolved at q0.
    Vector3 position(const json& j, const std::string& path) const
    {
        if (j.is_array()) {
            return rd_.vec3(j, path);
        }
        rd_.object(j, path);
        rd_.only_keys(j, path, {"anchor", "shift"});
        const auto apath = Reader::join(path, "anchor");
        const auto& a = rd_.object(rd_.field(j, path, "anchor"), apath);
        rd_.only_keys(a, apath, {"robot", "link", "point"});
        const std::size_t robot = robot_ref(rd_.field(a, apath, "robot"), Reader::join(apath, "robot"));
        const int link = link_ref(a, apath);
        const Vector3 local = a.contains("point") ? rd_.vec3(a.at("point"), Reader::join(apath, "point")) : Vector3::Zero();
        const auto& model = sc_.scene.robots[robot];
        if (link != RobotModel::effector_link && (link < 0 || link > model.dof())) {
            rd_.fail(Reader::join(apath, "link"), "link out of range");
        }
        const Vector3 shift = j.contains("shift") ? rd_.vec3(j.at("shift"), Reader::join(path, "shift")) : Vector3::Zero();
        return point_jacobian(model, sc_.robots[robot].q0, link, local).p + shift;
    }

    WorldMotion motion(const json& obj, const std::string& path) const
    {
        WorldMotion m;
        if (!obj.contains("motion")) {
            return m;
        }
        const auto mpath = Reader::join(path, "motion");
        const auto& j = rd_.object(obj.at("motion"), mpath);
        rd_.only_keys(j, mpath, {"velocity", "amplitude", "frequency", "offset_rate"});
        if (j.contains("velocity")) {
            m.velocity = rd_.vec3(j.at("velocity"), Reader::join(mpath, "velocity"));
        }
        if (j.contains("amplitude")) {
            m.amplitude = rd_.vec3(j.at("amplitude"), Reader::join(mpath, "amplitude"));
        }
        m.frequency = rd_.number_or(j, mpath, "frequency", 0.0);
        m.offset_rate = rd_.number_or(j, mpath, "offset_rate", 0.0);
        return m;
    }

    void add_primitive(const std::string& id, Primitive p, PrimitiveRef& ref)
    {
        ref.indices.push_back(sc_.scene.primitives.size());
        p.name = id;
        sc_.scene.primitives.push_back(std::move(p));
    }

    void parse_primitives()
    {
        if (!doc_.contains("primitives")) {
            return;
        }
        const auto& prims = rd_.array(doc_.at("primitives"), "primitives");
        for (std::size_t i = 0; i < prims.size(); ++i) {
            const std::string path = Reader::index("primitives", i);
            const auto& j = rd_.object(prims.at(i), path);
            rd_.only_keys(j, path, {"id", "type", "attached_to", "point", "direction", "normal", "offset", "center",
                                    "radius", "extents", "rotation", "motion"});
            const auto id = rd_.string(rd_.field(j, path, "id"), Reader::join(path, "id"));
            if (prim_ids_.contains(id)) {
                rd_.fail(Reader::join(path, "id"), "duplicate primitive id '" + id + "'");
            }
            const auto type = rd_.string(rd_.field(j, path, "type"), Reader::join(path, "type"));

            Primitive p;
            const auto attach_path = Reader::join(path, "attached_to");
            const json attached = j.contains("attached_to") ? j.at("attached_to") : json("world");
            if (!(attached.is_string() && attached.get<std::string>() == "world")) {
                rd_.object(attached, attach_path);
                rd_.only_keys(attached, attach_path, {"robot", "link"});
                p.robot = robot_ref(rd_.field(attached, attach_path, "robot"), Reader::join(attach_path, "robot"));
                p.link = link_ref(attached, attach_path);
            }
            if (p.robot && j.contains("motion")) {
                rd_.fail(Reader::join(path, "motion"), "only world primitives can move");
            }
            p.motion = motion(j, path);

            PrimitiveRef ref;
            if (type == "point") {
                p.kind = PrimitiveKind::point;
                p.position = j.contains("point") ? position(j.at("point"), Reader::join(path, "point")) : Vector3::Zero();
                add_primitive(id, p, ref);
            } else if (type == "line") {
                p.kind = PrimitiveKind::line;
                p.position = j.contains("point") ? position(j.at("point"), Reader::join(path, "point")) : Vector3::Zero();
                p.direction = rd_.unit3(rd_.field(j, path, "direction"), Reader::join(path, "direction"));
                add_primitive(id, p, ref);
            } else if (type == "plane") {
                if (p.robot) {
                    rd_.fail(attach_path, "planes must be attached to the world");
                }
                p.kind = PrimitiveKind::plane;
                p.direction = rd_.unit3(rd_.field(j, path, "normal"), Reader::join(path, "normal"));
                if (j.contains("point")) {
                    p.offset = position(j.at("point"), Reader::join(path, "point")).dot(p.direction);
                } else {
                    p.offset = rd_.number(rd_.field(j, path, "offset"), Reader::join(path, "offset"));
                }
                add_primitive(id, p, ref);
            } else if (type == "sphere") {
                p.kind = PrimitiveKind::point;
                p.position = position(rd_.field(j, path, "center"), Reader::join(path, "center"));
                ref.radius = rd_.number(rd_.field(j, path, "radius"), Reader::join(path, "radius"));
                if (!(ref.radius > 0.0)) {
                    rd_.fail(Reader::join(path, "radius"), "must be positive");
                }
                add_primitive(id, p, ref);
            } else if (type == "cuboid") {
                if (p.robot) {
                    rd_.fail(attach_path, "cuboids must be attached to the world");
                }
                const Vector3 c = position(rd_.field(j, path, "center"), Reader::join(path, "center"));
                const Quaternion r =
                    j.contains("rotation") ? parse_rotation(rd_, j.at("rotation"), Reader::join(path, "rotation")) : quat::one;
                const Vector3 extents = rd_.vec3(rd_.field(j, path, "extents"), Reader::join(path, "extents"));
                if (!(extents.array() > 0.0).all()) {
                    rd_.fail(Reader::join(path, "extents"), "must be positive");
                }
                static const char* faces[] = {"+x", "-x", "+y", "-y", "+z", "-z"};
                const auto planes = cuboid_planes(pose_from_rt(r, Quaternion::pure(c)), extents);
                ref.cuboid = true;
                for (std::size_t k = 0; k < planes.size(); ++k) {
                    Primitive face = p;
                    face.kind = PrimitiveKind::plane;
                    face.direction = planes[k].n;
                    face.offset = planes[k].offset;
                    add_primitive(id + "." + faces[k], face, ref);
                }
            } else {
                rd_.fail(Reader::join(path, "type"), "unknown primitive type '" + type + "'");
            }
            prim_ids_[id] = ref;
        }
    }

    const PrimitiveRef& prim_ref(const json& j, const std::string& path) const
    {
        const auto id = rd_.string(j, path);
        const auto it = prim_ids_.find(id);
        if (it == prim_ids_.end()) {
            rd_.fail(path, "unknown primitive '" + id + "'");
        }
        return it->second;
    }

    void parse_constraints()
    {
        if (!doc_.contains("constraints")) {
            return;
        }
        const auto& cons = rd_.array(doc_.at("constraints"), "constraints");
        std::set<std::string> names;
        for (std::size_t i = 0; i < cons.size(); ++i) {
            const std::string path = Reader::index("constraints", i);
            const auto& j = rd_.object(cons.at(i), path);
            rd_.only_keys(j, path, {"name", "pair", "zone", "d_safe", "d_safe_rate", "eta_d"});
            const auto ppath = Reader::join(path, "pair");
            const auto& pair = rd_.array(rd_.field(j, path, "pair"), ppath);
            if (pair.size() != 2) {
                rd_.fail(ppath, "expected two primitive ids");
            }
            const auto& a = prim_ref(pair.at(0), Reader::index(ppath, 0));
            const auto& b = prim_ref(pair.at(1), Reader::index(ppath, 1));
            const auto zone = rd_.string(rd_.field(j, path, "zone"), Reader::join(path, "zone"));
            if (zone != "restricted" && zone != "safe") {
                rd_.fail(Reader::join(path, "zone"), "must be \"restricted\" or \"safe\"");
            }
            const std::string name = j.contains("name") ? rd_.string(j.at("name"), Reader::join(path, "name"))
                                                        : pair.at(0).get<std::string>() + "-" + pair.at(1).get<std::string>();
            if (!names.insert(name).second) {
                rd_.fail(Reader::join(path, "name"), "duplicate constraint name '" + name + "'");
            }

            ConstraintSpec spec;
            spec.zone = zone == "restricted" ? Zone::restricted : Zone::safe;
            spec.eta_d = rd_.number_or(j, path, "eta_d", sc_.controller.eta_d);
            spec.d_safe_rate = rd_.number_or(j, path, "d_safe_rate", 0.0);
            const double radius = std::max(a.radius, b.radius);
            spec.d_safe = rd_.number_or(j, path, "d_safe", radius > 0.0 ? radius : 0.0);
            if (spec.d_safe < 0.0 || spec.eta_d < 0.0) {
                rd_.fail(path, "d_safe and eta_d must be non-negative");
            }

            if (a.cuboid || b.cuboid) {
                if (a.cuboid && b.cuboid) {
                    rd_.fail(ppath, "a cuboid can only be paired with a point");
                }
                // Staying inside the box: every inward face keeps a non-negative signed distance.
                if (spec.zone != Zone::safe) {
                    rd_.fail(Reader::join(path, "zone"), "a cuboid constraint must be a safe zone");
                }
                const auto& box = a.cuboid ? a : b;
                const auto& other = a.cuboid ? b : a;
                if (sc_.scene.primitives[other.indices[0]].kind != PrimitiveKind::point) {
                    rd_.fail(ppath, "a cuboid can only be paired with a point");
                }
                ConstraintSpec face = spec;
                face.zone = Zone::restricted;
                for (const std::size_t plane : box.indices) {
                    sc_.scene.constraints.push_back(
                        {name + "." + sc_.scene.primitives[plane].name.substr(sc_.scene.primitives[plane].name.rfind('.') + 1),
                         plane, other.indices[0], face});
                }
                continue;
            }
            const auto ka = sc_.scene.primitives[a.indices[0]].kind;
            const auto kb = sc_.scene.primitives[b.indices[0]].kind;
            if (!distance_supported(ka, kb)) {
                rd_.fail(ppath, "no distance between a " + std::string(to_string(ka)) + " and a " +
                                    std::string(to_string(kb)));
            }
            sc_.scene.constraints.push_back({name, a.indices[0], b.indices[0], spec});
        }
    }

    const json& doc_;
    std::filesystem::path base_;
    Reader rd_;
    Scenario sc_;
    std::map<std::string, std::size_t> robot_ids_;
    std::map<std::string, PrimitiveRef> prim_ids_;
};

}  // namespace

std::size_t Scenario::ticks() const
{
    return static_cast<std::size_t>(std::llround(duration / controller.sampling_time));
}

std::size_t Scenario::robot_index(const std::string& id) const
{
    for (std::size_t i = 0; i < robots.size(); ++i) {
        if (robots[i].id == id) {
            return i;
        }
    }
    throw std::out_of_range("no robot with id '" + id + "'");
}

std::vector<VectorXd> Scenario::initial_q() const
{
    std::vector<VectorXd> q;
    for (const auto& r : robots) {
        q.push_back(r.q0);
    }
    return q;
}

Scenario scenario_from_json(const json& doc, const std::filesystem::path& base_dir, const std::string& file_label)
{
    return ScenarioParser(doc, base_dir, file_label).parse();
}

Scenario load_scenario(const std::string& path)
{
    std::ifstream in(path);
    if (!in) {
        throw ScenarioError(path, "<file>", "cannot open file");
    }
    std::stringstream buffer;
    buffer << in.rdbuf();
    const std::string text = buffer.str();
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        const auto upto = text.substr(0, std::min<std::size_t>(e.byte, text.size()));
        const auto line = 1 + std::count(upto.begin(), upto.end(), '\n');
        throw ScenarioError(path, "line " + std::to_string(line), "JSON syntax error");
    }
    auto sc = scenario_from_json(doc, std::filesystem::path(path).parent_path(), path);
    sc.source_path = path;
    return sc;
}

void set_controller_param(ControllerConfig& cfg, const std::string& name, double value)
{
    ControllerConfig next = cfg;
    if (name == "alpha") {
        next.alpha = value;
    } else if (name == "beta") {
        next.beta = value;
    } else if (name == "eta") {
        next.eta = value;
    } else if (name == "eta_d") {
        next.eta_d = value;
    } else if (name == "eta_q") {
        next.eta_q = value;
    } else if (name == "lambda_r") {
        next.lambda_r = value;
    } else if (name == "lambda_f") {
        next.lambda_f = value;
    } else if (name == "motion_scaling") {
        next.motion_scaling = value;
    } else {
        throw std::invalid_argument("unknown parameter '" + name + "'");
    }
    if (!std::isfinite(value)) {
        throw std::invalid_argument("parameter '" + name + "' must be finite");
    }
    next.validate();
    cfg = next;
}

}  // namespace dqteleop
