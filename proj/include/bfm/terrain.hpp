#pragma once

#include <optional>
#include <string>
#include <vector>

#include "bfm/grid.hpp"

namespace bfm {

enum class FeatureKind { Polygon, Line, Point };

/// One overlay feature. Polygons hold a constant multiplier inside; line and
/// point features dip from the base multiplier toward `value` following
/// T(d) = value + (base - value) * erf(d / scale).
struct TerrainFeature {
    FeatureKind kind = FeatureKind::Polygon;
    std::string label;
    double value = 1.0;
    double scale = 0.0;          // unused for polygons
    std::vector<Vec2> geometry;  // polygon vertices, polyline vertices, or the single point
};

/// Named overlay presets (speed multiplier and decay scale in metres).
struct FeaturePreset {
    const char* name;
    FeatureKind kind;
    double value;
    double scale;
};
std::optional<FeaturePreset> find_preset(const std::string& name);

struct TerrainMap {
    Grid grid;
    Field elevation;  // metres
    Field overlay;    // dimensionless speed multiplier in [0, 1]
};

/// Builds the overlay raster. Overlapping features combine by taking the most
/// restrictive (smallest) multiplier; open field is `base_speed`.
/// Throws InputError naming the feature index for invalid features.
Field rasterize_features(const Grid& grid, double base_speed, const std::vector<TerrainFeature>& features);

/// Applies `passes` rounds of uniform 3x3 averaging with replicated edges.
Field smooth_field(const Field& field, int passes);
TerrainMap smooth_overlay(const TerrainMap& map, int passes);

/// Central-difference elevation gradient, one-sided on the map border.
Vec2 elevation_gradient(const TerrainMap& map, int i, int j);

/// Directional derivative of elevation along `direction` (unit vector).
double slope_along(const TerrainMap& map, int i, int j, Vec2 direction);

/// Bilinear elevation at a world point; clamps to the map.
double sample_elevation(const TerrainMap& map, Vec2 p);

/// Precomputed gradient rasters used by the solver.
struct ElevationGradient {
    Field dx;
    Field dy;
};
ElevationGradient elevation_gradient_field(const TerrainMap& map);

/// Distance from p to the segment [a, b].
double segment_distance(Vec2 p, Vec2 a, Vec2 b);
bool point_in_polygon(Vec2 p, const std::vector<Vec2>& poly);
double polygon_area(const std::vector<Vec2>& poly);

}  // namespace bfm
