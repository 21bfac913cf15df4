#include <doctest.h>

#include <unistd.h>

#include <filesystem>
#include <fstream>
#include <functional>

#include "bfm/error.hpp"
#include "bfm/output.hpp"
#include "bfm/report.hpp"
#include "bfm/scenario_io.hpp"

using namespace bfm;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& tag) {
        path = fs::temp_directory_path() / ("bfm-test-" + tag + "-" + std::to_string(::getpid()));
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    void write(const std::string& name, const std::string& text) const { std::ofstream(path / name) << text; }
};

const char* kTerrain = R"(grid: {nx: 40, ny: 30, ds: 8.0}
elevation: {constant: 100.0}
features:
  - {preset: woods, polygon: [[0, 0], [80, 0], [80, 80], [0, 80]]}
  - {preset: stone_wall, line: [[160, 0], [160, 240]]}
)";

std::string scenario_text(const std::string& extra_params = "", const std::string& time = "{dt: 1.0, duration: 60.0}") {
    return "name: tiny\nterrain: terrain.yaml\ntime: " + time + "\nparams:\n  closein_k: 0.05\n" + extra_params +
           R"(units:
  - id: 1
    side: blue
    strength: 400
    formation: {center: [240, 120], width: 80, depth: 40, bearing_deg: 180}
    orders: [{wait_until_enemy_within: 300}, {rotate_to_deg: 180}, face_nearest_enemy]
  - id: 2
    side: red
    strength: 600
    morale: 0.8
    formation: {center: [80, 120], width: 100, depth: 40}
    orders: [{translate_to: [120, 120]}]
artillery:
  - {id: 3, side: blue, guns: 4, position: [280, 120]}
)";
}

std::string error_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const InputError& e) {
        return e.what();
    }
    return "";
}

}  // namespace

TEST_CASE("scenario round trip from YAML") {
    TempDir d("io");
    d.write("terrain.yaml", kTerrain);
    d.write("s.yaml", scenario_text());
    const Scenario s = load_scenario(d.path / "s.yaml");
    CHECK(s.name == "tiny");
    CHECK(s.grid().nx == 40);
    CHECK(s.units.size() == 2);
    CHECK(s.units[1].side == Side::Red);
    CHECK(s.units[1].morale == 0.8);
    CHECK(s.units[0].orders.size() == 3);
    CHECK(s.artillery.at(0).guns == 4);
    CHECK(s.terrain->elevation(5, 5) == 100.0);
    CHECK(s.terrain->overlay(1, 1) == doctest::Approx(0.5));
    CHECK(s.steps() == 60);
    const std::string report = validation_report(s);
    CHECK(report.find("Blue infantry 400") != std::string::npos);
    CHECK(report.find("Red infantry 600") != std::string::npos);
}

TEST_CASE("schema errors carry position and field") {
    TempDir d("err");
    d.write("terrain.yaml", kTerrain);
    const std::string typo = error_of([&] { parse_scenario(scenario_text("  max_sped: 1.0\n"), d.path, "s.yaml"); });
    CHECK(typo.find("s.yaml:") == 0);
    CHECK(typo.find("max_sped") != std::string::npos);

    const std::string cfl =
        error_of([&] { parse_scenario(scenario_text("", "{dt: 4.0, duration: 60.0}"), d.path, "s.yaml"); });
    CHECK(cfl.find("dt * 2 Vm / ds") != std::string::npos);

    CHECK(error_of([&] { parse_scenario(scenario_text("  support_floor: 0.5\n"), d.path, "s"); })
              .find("support_floor") != std::string::npos);

    CHECK(error_of([&] { parse_scenario("terrain: terrain.yaml\nunits: []\n", d.path, "s"); }).find("units") !=
          std::string::npos);
    CHECK(error_of([&] { parse_scenario("terrain: nowhere.yaml\nunits: []\n", d.path, "s"); }).find("not found") !=
          std::string::npos);
    CHECK(error_of([&] { parse_scenario("units: [\n", d.path, "s"); }).find("s:") == 0);

    const std::string bad_preset = error_of([&] {
        parse_terrain_spec("grid: {nx: 16, ny: 16, ds: 8}\nfeatures:\n  - {preset: castle, point: [1, 1]}\n", d.path, "t");
    });
    CHECK(bad_preset.find("features[0].preset") != std::string::npos);
    CHECK(bad_preset.find("t:3:") == 0);

    CHECK_FALSE(error_of([&] { parse_terrain_spec("grid: {nx: 4, ny: 16, ds: 8}\n", d.path, "t"); }).empty());
    CHECK_FALSE(error_of([&] { load_terrain(d.path / "absent.yaml"); }).empty());
}

TEST_CASE("raw rasters and layered snapshots round trip") {
    TempDir d("bfm");
    const Grid g{9, 8, 2.5, {10.0, -4.0}};
    Field a(g), b(g);
    for (std::size_t k = 0; k < a.size(); ++k) {
        a[k] = 0.125 * k;
        b[k] = -1.0 / (k + 1);
    }
    write_bfm(d.path / "x.bfm", g, {&a, &b});
    const BfmRaster r = read_bfm(d.path / "x.bfm");
    CHECK(r.grid == g);
    REQUIRE(r.layers.size() == 2);
    CHECK(r.layers[0] == a);
    CHECK(r.layers[1] == b);
    CHECK(fs::file_size(d.path / "x.bfm") == 4 + 3 * 4 + 3 * 8 + 2 * 72 * 8);

    write_f64_raster(d.path / "e.f64", a);
    CHECK(read_f64_raster(d.path / "e.f64", 9, 8) == a);
    CHECK_THROWS_AS(read_f64_raster(d.path / "e.f64", 8, 8), InputError);
}
