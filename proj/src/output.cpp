#include "bfm/output.hpp"

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <iomanip>
#include <stdexcept>

#include "bfm/error.hpp"

namespace bfm {

namespace fs = std::filesystem;

void write_bfm(const fs::path& path, const Grid& grid, const std::vector<const Field*>& layers) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    const std::uint32_t dims[3] = {static_cast<std::uint32_t>(grid.nx), static_cast<std::uint32_t>(grid.ny),
                                   static_cast<std::uint32_t>(layers.size())};
    const double geo[3] = {grid.ds, grid.origin.x, grid.origin.y};
    out.write("BFM1", 4);
    out.write(reinterpret_cast<const char*>(dims), sizeof dims);
    out.write(reinterpret_cast<const char*>(geo), sizeof geo);
    for (const Field* f : layers) {
        if (!f->matches(grid)) throw std::invalid_argument("layer does not match the grid");
        out.write(reinterpret_cast<const char*>(f->values().data()), static_cast<std::streamsize>(f->size() * 8));
    }
}

BfmRaster read_bfm(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open " + path.string());
    char magic[4];
    std::uint32_t dims[3];
    double geo[3];
    in.read(magic, 4);
    in.read(reinterpret_cast<char*>(dims), sizeof dims);
    in.read(reinterpret_cast<char*>(geo), sizeof geo);
    if (!in || std::memcmp(magic, "BFM1", 4) != 0) throw InputError(path.string() + ": not a BFM1 raster");
    BfmRaster r;
    r.grid = Grid{static_cast<int>(dims[0]), static_cast<int>(dims[1]), geo[0], {geo[1], geo[2]}};
    for (std::uint32_t l = 0; l < dims[2]; ++l) {
        Field f(r.grid);
        in.read(reinterpret_cast<char*>(f.values().data()), static_cast<std::streamsize>(f.size() * 8));
        if (!in) throw InputError(path.string() + ": truncated layer " + std::to_string(l));
        r.layers.push_back(std::move(f));
    }
    return r;
}

fs::path run_directory(const fs::path& root, const std::string& scenario, long seed) {
    return root / (scenario + "-seed" + std::to_string(seed));
}

fs::path output_root(const fs::path& fallback) {
    if (const char* env = std::getenv("BFM_OUT"); env && *env) return env;
    return fallback;
}

nlohmann::json run_summary(const RunResult& r, const Scenario& s, long seed) {
    using nlohmann::json;
    json j;
    j["scenario"] = r.scenario;
    j["seed"] = seed;
    j["dt"] = s.dt;
    j["duration"] = s.duration;
    j["terrain_effects"] = s.terrain_effects;
    j["closein"] = s.closein_enabled;
    j["ranged"] = s.ranged_enabled;
    for (Side side : {Side::Blue, Side::Red}) {
        json t;
        t["initial"] = r.side_initial(side);
        t["final"] = r.side_final(side);
        t["casualties"] = r.side_casualties(side);
        t["units"] = r.side_units(side);
        t["retreating_units"] = r.side_retreating(side);
        double retreating = 0.0;
        for (const auto& u : r.units) {
            if (u.side == side && u.status == UnitStatus::Retreating) retreating += u.final_strength;
        }
        t["retreating_strength"] = retreating;
        j["sides"][side_name(side)] = t;
    }
    json units = json::array();
    for (const auto& u : r.units) {
        units.push_back({{"id", u.id},
                         {"side", side_name(u.side)},
                         {"label", u.label},
                         {"initial", u.initial_strength},
                         {"final", u.final_strength},
                         {"closein_casualties", u.closein_casualties},
                         {"ranged_casualties", u.ranged_casualties},
                         {"dispersed", u.dispersed},
                         {"clamped_mass", u.clamped_mass},
                         {"status", status_name(u.status)},
                         {"status_time", u.status_time},
                         {"morale", u.morale}});
    }
    j["units"] = units;
    return j;
}

void write_series_csv(const fs::path& path, const RunResult& r, const std::vector<std::vector<double>>& series,
                      double every) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << "time";
    for (const auto& u : r.units) out << "," << u.id;
    out << "\n" << std::setprecision(12);
    const long stride = every > 0.0 ? std::max(1L, std::lround(every / r.dt)) : 1L;
    const std::size_t n = r.times.size();
    for (std::size_t k = 0; k < n; ++k) {
        if (k % static_cast<std::size_t>(stride) != 0 && k + 1 != n) continue;
        out << r.times[k];
        for (double v : series[k]) out << "," << v;
        out << "\n";
    }
}

void write_events_csv(const fs::path& path, const RunResult& r) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << "time,unit,kind,detail\n";
    for (const auto& e : r.events) out << e.time << "," << e.unit << "," << e.kind << "," << e.detail << "\n";
}

RunWriter::RunWriter(fs::path dir, const Scenario& scenario, long seed, bool snapshots)
    : dir_(std::move(dir)), scenario_(scenario), seed_(seed), snapshots_(snapshots) {
    fs::create_directories(dir_);
    const TerrainMap& map = *scenario_.terrain;
    write_bfm(dir_ / "terrain.bfm", map.grid, {&map.elevation, &map.overlay});
    std::ofstream art(dir_ / "artillery.csv");
    art << "id,side,label,x,y,guns\n";
    for (const auto& a : scenario_.artillery) {
        art << a.id << "," << side_name(a.side) << ",\"" << a.label << "\"," << a.position.x << "," << a.position.y
            << "," << a.guns << "\n";
    }
    std::ofstream units(dir_ / "units.csv");
    units << "id,side,label,strength,morale\n";
    for (const auto& u : scenario_.units) {
        units << u.id << "," << side_name(u.side) << ",\"" << u.label << "\"," << u.formation.strength << ","
              << u.morale << "\n";
    }
    if (snapshots_) {
        fs::create_directories(dir_ / "snapshots");
        index_.open(dir_ / "snapshots" / "index.txt");
        index_ << "# time_s file layers=red,blue\n";
    }
}

void RunWriter::snapshot(const Simulation& sim) {
    if (!snapshots_) return;
    char name[32];
    std::snprintf(name, sizeof name, "t%06ld.bfm", std::lround(sim.time()));
    const Field red = sim.side_density(Side::Red);
    const Field blue = sim.side_density(Side::Blue);
    write_bfm(dir_ / "snapshots" / name, scenario_.grid(), {&red, &blue});
    index_ << sim.time() << " " << name << "\n";
    index_.flush();
}

void RunWriter::finish(const RunResult& r) {
    write_series_csv(dir_ / "strength.csv", r, r.strength, scenario_.snapshot_every);
    write_series_csv(dir_ / "casualties.csv", r, r.casualties, scenario_.snapshot_every);
    write_events_csv(dir_ / "events.csv", r);
    std::ofstream out(dir_ / "summary.json");
    out << std::setw(2) << run_summary(r, scenario_, seed_) << "\n";
}

}  // namespace bfm
