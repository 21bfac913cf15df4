#pragma once

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "bfm/solver.hpp"

namespace bfm {

/// Layered raster file: "BFM1", uint32 nx, ny, layers, float64 ds, origin x,
/// origin y, then layers * ny * nx float64 values, row-major, little-endian.
struct BfmRaster {
    Grid grid;
    std::vector<Field> layers;
};
void write_bfm(const std::filesystem::path& path, const Grid& grid, const std::vector<const Field*>& layers);
BfmRaster read_bfm(const std::filesystem::path& path);

/// <root>/<scenario>-seed<k>
std::filesystem::path run_directory(const std::filesystem::path& root, const std::string& scenario, long seed);

/// Output root: $BFM_OUT if set, else `fallback`.
std::filesystem::path output_root(const std::filesystem::path& fallback = "runs");

nlohmann::json run_summary(const RunResult& r, const Scenario& s, long seed);

/// Per-unit columns at the snapshot cadence (plus the final step).
void write_series_csv(const std::filesystem::path& path, const RunResult& r,
                      const std::vector<std::vector<double>>& series, double every);
void write_events_csv(const std::filesystem::path& path, const RunResult& r);

/// Writes a run directory. Use `snapshot` as the run observer to get
/// density snapshots (red and blue layers) and snapshots/index.txt;
/// `finish` writes the series, events and summary.json.
class RunWriter {
public:
    RunWriter(std::filesystem::path dir, const Scenario& scenario, long seed, bool snapshots);

    void snapshot(const Simulation& sim);
    void finish(const RunResult& r);
    const std::filesystem::path& directory() const { return dir_; }

private:
    std::filesystem::path dir_;
    const Scenario& scenario_;
    long seed_;
    bool snapshots_;
    std::ofstream index_;
};

}  // namespace bfm
