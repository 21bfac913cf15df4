#include "bfm/scenario_io.hpp"

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <bit>
#include <cstring>
#include <fstream>
#include <initializer_list>
#include <sstream>

#include "bfm/combat.hpp"
#include "bfm/error.hpp"

namespace bfm {

namespace {

namespace fs = std::filesystem;

std::string read_text(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

YAML::Node parse_yaml(const std::string& text, const std::string& where) {
    try {
        return YAML::Load(text);
    } catch (const YAML::ParserException& e) {
        throw InputError(where + ":" + std::to_string(e.mark.line + 1) + ":" + std::to_string(e.mark.column + 1) +
                         ": " + e.msg);
    }
}

// Field access with diagnostics that name the file position and key path.
class Reader {
public:
    explicit Reader(std::string where) : where_(std::move(where)) {}

    [[noreturn]] void fail(const YAML::Node& at, const std::string& field, const std::string& msg) const {
        const YAML::Mark m = at.Mark();
        std::string pos = where_;
        if (m.line >= 0) pos += ":" + std::to_string(m.line + 1) + ":" + std::to_string(m.column + 1);
        throw InputError(pos + ": " + field + ": " + msg);
    }

    void allow(const YAML::Node& map, const std::string& path, std::initializer_list<const char*> keys) const {
        if (!map.IsMap()) fail(map, path, "expected a mapping");
        for (const auto& kv : map) {
            const std::string k = kv.first.as<std::string>();
            if (std::none_of(keys.begin(), keys.end(), [&](const char* a) { return k == a; })) {
                fail(kv.first, join(path, k), "unknown key");
            }
        }
    }

    YAML::Node need(const YAML::Node& map, const std::string& path, const char* key) const {
        const YAML::Node n = map[key];
        if (!n) fail(map, join(path, key), "missing required key");
        return n;
    }

    double number(const YAML::Node& n, const std::string& field) const {
        if (!n.IsScalar()) fail(n, field, "expected a number");
        try {
            return n.as<double>();
        } catch (const YAML::Exception&) {
            fail(n, field, "expected a number, got '" + n.Scalar() + "'");
        }
    }

    double number(const YAML::Node& map, const std::string& path, const char* key, double fallback) const {
        const YAML::Node n = map[key];
        return n ? number(n, join(path, key)) : fallback;
    }

    double number(const YAML::Node& map, const std::string& path, const char* key) const {
        return number(need(map, path, key), join(path, key));
    }

    int integer(const YAML::Node& n, const std::string& field) const {
        if (!n.IsScalar()) fail(n, field, "expected an integer");
        try {
            return n.as<int>();
        } catch (const YAML::Exception&) {
            fail(n, field, "expected an integer, got '" + n.Scalar() + "'");
        }
    }

    bool boolean(const YAML::Node& map, const std::string& path, const char* key, bool fallback) const {
        const YAML::Node n = map[key];
        if (!n) return fallback;
        try {
            return n.as<bool>();
        } catch (const YAML::Exception&) {
            fail(n, join(path, key), "expected true or false");
        }
    }

    std::string text(const YAML::Node& map, const std::string& path, const char* key,
                     const std::string& fallback) const {
        const YAML::Node n = map[key];
        if (!n) return fallback;
        if (!n.IsScalar()) fail(n, join(path, key), "expected a string");
        return n.Scalar();
    }

    Vec2 point(const YAML::Node& n, const std::string& field) const {
        if (!n.IsSequence() || n.size() != 2) fail(n, field, "expected [x, y]");
        return {number(n[0], field + "[0]"), number(n[1], field + "[1]")};
    }

    std::vector<Vec2> points(const YAML::Node& n, const std::string& field) const {
        if (!n.IsSequence()) fail(n, field, "expected a list of [x, y] points");
        std::vector<Vec2> out;
        for (std::size_t k = 0; k < n.size(); ++k) out.push_back(point(n[k], field + "[" + std::to_string(k) + "]"));
        return out;
    }

    static std::string join(const std::string& path, const std::string& key) {
        return path.empty() ? key : path + "." + key;
    }

private:
    std::string where_;
};

Side parse_side(const Reader& r, const YAML::Node& n, const std::string& field) {
    const std::string s = n.IsScalar() ? n.Scalar() : "";
    if (s == "red" || s == "Red" || s == "confederate") return Side::Red;
    if (s == "blue" || s == "Blue" || s == "union") return Side::Blue;
    r.fail(n, field, "expected red or blue");
}

Order parse_order(const Reader& r, const YAML::Node& n, const std::string& field) {
    if (n.IsScalar()) {
        if (n.Scalar() == "face_nearest_enemy") return FaceNearestEnemy{};
        r.fail(n, field, "unknown order '" + n.Scalar() + "'");
    }
    if (!n.IsMap() || n.size() != 1) r.fail(n, field, "expected a single-key order mapping");
    const std::string kind = n.begin()->first.as<std::string>();
    const YAML::Node v = n.begin()->second;
    const std::string f = field + "." + kind;
    if (kind == "wait_until_enemy_within") return WaitUntilEnemyWithin{r.number(v, f)};
    if (kind == "rotate_to_deg") return RotateTo{deg_to_rad(r.number(v, f))};
    if (kind == "translate_to") return TranslateTo{r.point(v, f)};
    if (kind == "flank") {
        r.allow(v, f, {"to", "bearing_deg"});
        return Flank{r.point(r.need(v, f, "to"), f + ".to"), deg_to_rad(r.number(v, f, "bearing_deg"))};
    }
    r.fail(n, field, "unknown order '" + kind + "'");
}

}  // namespace

Field read_f64_raster(const fs::path& path, int nx, int ny) {
    std::ifstream in(path, std::ios::binary | std::ios::ate);
    if (!in) throw InputError("cannot open elevation file " + path.string());
    const auto bytes = static_cast<std::size_t>(in.tellg());
    const std::size_t want = static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny) * sizeof(double);
    if (bytes != want) {
        throw InputError(path.string() + ": expected " + std::to_string(want) + " bytes for a " + std::to_string(nx) +
                         " x " + std::to_string(ny) + " float64 raster, found " + std::to_string(bytes));
    }
    in.seekg(0);
    Field f(nx, ny);
    in.read(reinterpret_cast<char*>(f.values().data()), static_cast<std::streamsize>(want));
    if constexpr (std::endian::native == std::endian::big) {
        for (double& v : f.values()) {
            std::uint64_t u;
            std::memcpy(&u, &v, 8);
            u = __builtin_bswap64(u);
            std::memcpy(&v, &u, 8);
        }
    }
    return f;
}

void write_f64_raster(const fs::path& path, const Field& f) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    static_assert(std::endian::native == std::endian::little, "raster writer assumes a little-endian host");
    out.write(reinterpret_cast<const char*>(f.values().data()), static_cast<std::streamsize>(f.size() * 8));
}

TerrainSpec parse_terrain_spec(const std::string& text, const fs::path& base_dir, const std::string& where) {
    const Reader r(where);
    const YAML::Node root = parse_yaml(text, where);
    if (!root.IsMap()) throw InputError(where + ": expected a mapping at the top level");
    r.allow(root, "", {"grid", "base_speed", "smoothing_passes", "elevation", "features"});

    TerrainSpec spec;
    const YAML::Node grid = r.need(root, "", "grid");
    r.allow(grid, "grid", {"nx", "ny", "ds", "origin"});
    spec.grid.nx = r.integer(r.need(grid, "grid", "nx"), "grid.nx");
    spec.grid.ny = r.integer(r.need(grid, "grid", "ny"), "grid.ny");
    spec.grid.ds = r.number(grid, "grid", "ds");
    if (grid["origin"]) spec.grid.origin = r.point(grid["origin"], "grid.origin");
    try {
        spec.grid.validate();
    } catch (const std::invalid_argument& e) {
        r.fail(grid, "grid", e.what());
    }

    spec.base_speed = r.number(root, "", "base_speed", 1.0);
    if (!(spec.base_speed > 0.0 && spec.base_speed <= 1.0)) r.fail(root["base_speed"], "base_speed", "must be in (0, 1]");
    if (root["smoothing_passes"]) {
        spec.smoothing_passes = r.integer(root["smoothing_passes"], "smoothing_passes");
        if (spec.smoothing_passes < 0) r.fail(root["smoothing_passes"], "smoothing_passes", "must not be negative");
    }

    const std::size_t cells = spec.grid.size();
    spec.elevation = Field(spec.grid, 0.0);
    if (const YAML::Node e = root["elevation"]) {
        r.allow(e, "elevation", {"file", "values", "constant"});
        if (e["file"]) {
            fs::path p = e["file"].Scalar();
            if (p.is_relative()) p = base_dir / p;
            spec.elevation = read_f64_raster(p, spec.grid.nx, spec.grid.ny);
        } else if (e["values"]) {
            const YAML::Node v = e["values"];
            if (!v.IsSequence() || v.size() != cells) {
                r.fail(v, "elevation.values", "expected " + std::to_string(cells) + " row-major values");
            }
            for (std::size_t k = 0; k < cells; ++k) spec.elevation[k] = r.number(v[k], "elevation.values");
        } else if (e["constant"]) {
            spec.elevation.fill(r.number(e["constant"], "elevation.constant"));
        }
        for (std::size_t k = 0; k < cells; ++k) {
            if (!std::isfinite(spec.elevation[k])) r.fail(e, "elevation", "non-finite value at index " + std::to_string(k));
        }
    }

    if (const YAML::Node fl = root["features"]) {
        if (!fl.IsSequence()) r.fail(fl, "features", "expected a list");
        for (std::size_t k = 0; k < fl.size(); ++k) {
            const YAML::Node n = fl[k];
            const std::string path = "features[" + std::to_string(k) + "]";
            r.allow(n, path, {"preset", "label", "value", "scale", "polygon", "line", "point"});
            TerrainFeature f;
            f.label = r.text(n, path, "label", "");
            const int geoms = (n["polygon"] ? 1 : 0) + (n["line"] ? 1 : 0) + (n["point"] ? 1 : 0);
            if (geoms != 1) r.fail(n, path, "exactly one of polygon, line or point is required");
            if (n["polygon"]) {
                f.kind = FeatureKind::Polygon;
                f.geometry = r.points(n["polygon"], path + ".polygon");
            } else if (n["line"]) {
                f.kind = FeatureKind::Line;
                f.geometry = r.points(n["line"], path + ".line");
            } else {
                f.kind = FeatureKind::Point;
                f.geometry = {r.point(n["point"], path + ".point")};
            }
            if (n["preset"]) {
                const std::string name = n["preset"].Scalar();
                const auto preset = find_preset(name);
                if (!preset) r.fail(n["preset"], path + ".preset", "unknown preset '" + name + "'");
                if (preset->kind != f.kind) r.fail(n, path, "preset '" + name + "' does not match the geometry kind");
                f.value = preset->value;
                f.scale = preset->scale;
                if (f.label.empty()) f.label = name;
            } else if (!n["value"]) {
                r.fail(n, path, "either preset or value is required");
            }
            f.value = r.number(n, path, "value", f.value);
            f.scale = r.number(n, path, "scale", f.scale);
            spec.features.push_back(std::move(f));
        }
    }
    return spec;
}

TerrainSpec load_terrain_spec(const fs::path& path) {
    return parse_terrain_spec(read_text(path), path.parent_path(), path.string());
}

TerrainMap build_terrain(const TerrainSpec& spec) {
    TerrainMap map;
    map.grid = spec.grid;
    map.elevation = spec.elevation;
    map.overlay = rasterize_features(spec.grid, spec.base_speed, spec.features);
    return smooth_overlay(map, spec.smoothing_passes);
}

TerrainMap load_terrain(const fs::path& path) { return build_terrain(load_terrain_spec(path)); }

Scenario parse_scenario(const std::string& text, const fs::path& base_dir, const std::string& where) {
    const Reader r(where);
    const YAML::Node root = parse_yaml(text, where);
    if (!root.IsMap()) throw InputError(where + ": expected a mapping at the top level");
    r.allow(root, "", {"name", "terrain", "time", "terrain_effects", "combat", "params", "units", "artillery"});

    Scenario s;
    s.name = r.text(root, "", "name", "scenario");
    const YAML::Node tn = r.need(root, "", "terrain");
    fs::path tp = tn.Scalar();
    if (tp.is_relative()) tp = base_dir / tp;
    if (!fs::exists(tp)) r.fail(tn, "terrain", "terrain file not found: " + tp.string());
    s.terrain = std::make_shared<const TerrainMap>(load_terrain(tp));

    if (const YAML::Node t = root["time"]) {
        r.allow(t, "time", {"dt", "duration", "snapshot_every"});
        s.dt = r.number(t, "time", "dt", s.dt);
        s.duration = r.number(t, "time", "duration", s.duration);
        s.snapshot_every = r.number(t, "time", "snapshot_every", s.snapshot_every);
    }
    s.terrain_effects = r.boolean(root, "", "terrain_effects", true);
    if (const YAML::Node c = root["combat"]) {
        r.allow(c, "combat", {"closein", "ranged"});
        s.closein_enabled = r.boolean(c, "combat", "closein", true);
        s.ranged_enabled = r.boolean(c, "combat", "ranged", true);
    }

    ModelParams& p = s.params;
    if (const YAML::Node n = root["params"]) {
        const std::string q = "params";
        r.allow(n, q,
                {"max_speed", "max_density", "diffusion", "closein_k", "ranged_k_infantry", "ranged_k_artillery",
                 "range_infantry", "range_artillery", "alpha_r_deg", "theta_r_deg", "reference_speed",
                 "closein_floor", "sector_deg", "ranged_reference_area", "reference_losses", "morale_increment",
                 "rotation_radius", "translate_taper", "rotate_taper_deg", "artillery_peak_fraction",
                 "artillery_scale", "boundary_fraction", "inflow_density", "support_floor"});
        p.max_speed = r.number(n, q, "max_speed", p.max_speed);
        p.max_density = r.number(n, q, "max_density", p.max_density);
        p.diffusion = r.number(n, q, "diffusion", p.diffusion);
        CombatParams& c = p.combat;
        c.closein_k = r.number(n, q, "closein_k", c.closein_k);
        c.ranged_k_infantry = r.number(n, q, "ranged_k_infantry", c.ranged_k_infantry);
        c.ranged_k_artillery = r.number(n, q, "ranged_k_artillery", c.ranged_k_artillery);
        c.range_infantry = r.number(n, q, "range_infantry", c.range_infantry);
        c.range_artillery = r.number(n, q, "range_artillery", c.range_artillery);
        c.alpha_r = deg_to_rad(r.number(n, q, "alpha_r_deg", rad_to_deg(c.alpha_r)));
        c.theta_r = deg_to_rad(r.number(n, q, "theta_r_deg", rad_to_deg(c.theta_r)));
        c.reference_speed = r.number(n, q, "reference_speed", c.reference_speed);
        c.closein_floor = r.number(n, q, "closein_floor", c.closein_floor);
        c.sector = deg_to_rad(r.number(n, q, "sector_deg", rad_to_deg(c.sector)));
        c.ranged_reference_area = r.number(n, q, "ranged_reference_area", c.ranged_reference_area);
        CommandParams& m = p.command;
        m.reference_losses = r.number(n, q, "reference_losses", m.reference_losses);
        m.morale_increment = r.number(n, q, "morale_increment", m.morale_increment);
        m.rotation_radius = r.number(n, q, "rotation_radius", m.rotation_radius);
        m.translate_taper = r.number(n, q, "translate_taper", m.translate_taper);
        m.rotate_taper = deg_to_rad(r.number(n, q, "rotate_taper_deg", rad_to_deg(m.rotate_taper)));
        p.artillery_peak_fraction = r.number(n, q, "artillery_peak_fraction", p.artillery_peak_fraction);
        p.artillery_scale = r.number(n, q, "artillery_scale", p.artillery_scale);
        p.boundary_fraction = r.number(n, q, "boundary_fraction", p.boundary_fraction);
        p.inflow_density = r.number(n, q, "inflow_density", p.inflow_density);
        p.support_floor = r.number(n, q, "support_floor", p.support_floor);
    }
    p.combat.max_density = p.max_density;
    p.command.sector = p.combat.sector;

    const YAML::Node units = r.need(root, "", "units");
    if (!units.IsSequence() || units.size() == 0) r.fail(units, "units", "expected a non-empty list of flow units");
    for (std::size_t k = 0; k < units.size(); ++k) {
        const YAML::Node n = units[k];
        const std::string q = "units[" + std::to_string(k) + "]";
        r.allow(n, q, {"id", "side", "label", "strength", "morale", "march_speed", "formation", "orders"});
        UnitSeed u;
        u.id = r.integer(r.need(n, q, "id"), q + ".id");
        u.side = parse_side(r, r.need(n, q, "side"), q + ".side");
        u.label = r.text(n, q, "label", "unit " + std::to_string(u.id));
        u.morale = r.number(n, q, "morale", 1.0);
        u.march_speed = r.number(n, q, "march_speed", u.march_speed);
        const YAML::Node f = r.need(n, q, "formation");
        const std::string fq = q + ".formation";
        r.allow(f, fq, {"center", "width", "depth", "bearing_deg"});
        u.formation.center = r.point(r.need(f, fq, "center"), fq + ".center");
        u.formation.width = r.number(f, fq, "width");
        u.formation.depth = r.number(f, fq, "depth");
        u.formation.bearing = deg_to_rad(r.number(f, fq, "bearing_deg", 0.0));
        u.formation.strength = r.number(n, q, "strength");
        if (!(u.formation.width > 0.0 && u.formation.depth > 0.0)) r.fail(f, fq, "width and depth must be positive");
        if (!(u.formation.strength > 0.0)) r.fail(n["strength"], q + ".strength", "must be positive");
        if (const YAML::Node o = n["orders"]) {
            if (!o.IsSequence()) r.fail(o, q + ".orders", "expected a list");
            for (std::size_t m = 0; m < o.size(); ++m) {
                u.orders.push_back(parse_order(r, o[m], q + ".orders[" + std::to_string(m) + "]"));
            }
        }
        s.units.push_back(std::move(u));
    }
    if (const YAML::Node arts = root["artillery"]) {
        if (!arts.IsSequence()) r.fail(arts, "artillery", "expected a list");
        for (std::size_t k = 0; k < arts.size(); ++k) {
            const YAML::Node n = arts[k];
            const std::string q = "artillery[" + std::to_string(k) + "]";
            r.allow(n, q, {"id", "side", "label", "guns", "position"});
            ArtilleryUnit a;
            a.id = r.integer(r.need(n, q, "id"), q + ".id");
            a.side = parse_side(r, r.need(n, q, "side"), q + ".side");
            a.label = r.text(n, q, "label", "battery " + std::to_string(a.id));
            a.guns = r.integer(r.need(n, q, "guns"), q + ".guns");
            a.position = r.point(r.need(n, q, "position"), q + ".position");
            s.artillery.push_back(std::move(a));
        }
    }
    s.validate();
    return s;
}

Scenario load_scenario(const fs::path& path) {
    return parse_scenario(read_text(path), path.parent_path(), path.string());
}

}  // namespace bfm
