#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "bfm/scenario.hpp"
#include "bfm/terrain.hpp"

namespace bfm {

/// Terrain description as read from disk, before rasterisation.
struct TerrainSpec {
    Grid grid;
    double base_speed = 1.0;
    int smoothing_passes = 3;
    Field elevation;
    std::vector<TerrainFeature> features;
};

/// Parses terrain YAML. Relative elevation file paths resolve against
/// `base_dir`. Schema errors throw InputError as "<where>:<line>:<col>: <field>: <message>".
TerrainSpec parse_terrain_spec(const std::string& text, const std::filesystem::path& base_dir,
                               const std::string& where = "terrain");
TerrainSpec load_terrain_spec(const std::filesystem::path& path);

/// Rasterises the features, smooths the overlay and checks its range.
TerrainMap build_terrain(const TerrainSpec& spec);
TerrainMap load_terrain(const std::filesystem::path& path);

/// Parses scenario YAML; the terrain file named inside it resolves against
/// `base_dir` and is loaded and built.
Scenario parse_scenario(const std::string& text, const std::filesystem::path& base_dir,
                        const std::string& where = "scenario");
Scenario load_scenario(const std::filesystem::path& path);

/// Flat little-endian float64 rasters, row-major.
Field read_f64_raster(const std::filesystem::path& path, int nx, int ny);
void write_f64_raster(const std::filesystem::path& path, const Field& f);

}  // namespace bfm
