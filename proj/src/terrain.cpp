#include "bfm/terrain.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "bfm/error.hpp"

namespace bfm {

namespace {

constexpr std::array<FeaturePreset, 9> kPresets{{
    {"woods", FeatureKind::Polygon, 0.50, 0.0},
    {"orchard", FeatureKind::Polygon, 0.55, 0.0},
    {"corn", FeatureKind::Polygon, 0.60, 0.0},
    {"grain", FeatureKind::Polygon, 0.65, 0.0},
    {"building", FeatureKind::Point, 0.05, 20.0},
    {"post_and_rail_fence", FeatureKind::Line, 0.05, 10.0},
    {"worm_fence", FeatureKind::Line, 0.10, 10.0},
    {"stone_wall", FeatureKind::Line, 0.30, 10.0},
    {"road", FeatureKind::Line, 1.00, 10.0},
}};

[[noreturn]] void bad_feature(std::size_t index, const std::string& why) {
    throw InputError("terrain feature " + std::to_string(index) + ": " + why);
}

void check_feature(std::size_t index, const TerrainFeature& f) {
    if (!(f.value >= 0.0 && f.value <= 1.0)) bad_feature(index, "value must lie in [0, 1]");
    switch (f.kind) {
        case FeatureKind::Polygon:
            if (f.geometry.size() < 3) bad_feature(index, "polygon needs at least 3 vertices");
            if (std::abs(polygon_area(f.geometry)) < 1e-9) bad_feature(index, "degenerate polygon (zero area)");
            break;
        case FeatureKind::Line:
            if (f.geometry.size() < 2) bad_feature(index, "line feature needs at least 2 vertices");
            if (!(f.scale > 0.0)) bad_feature(index, "line feature needs a positive scale");
            break;
        case FeatureKind::Point:
            if (f.geometry.size() != 1) bad_feature(index, "point feature needs exactly one location");
            if (!(f.scale > 0.0)) bad_feature(index, "point feature needs a positive scale");
            break;
    }
}

double feature_distance(const TerrainFeature& f, Vec2 p) {
    if (f.kind == FeatureKind::Point) return norm(p - f.geometry.front());
    double d = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k + 1 < f.geometry.size(); ++k) {
        d = std::min(d, segment_distance(p, f.geometry[k], f.geometry[k + 1]));
    }
    return d;
}

}  // namespace

std::optional<FeaturePreset> find_preset(const std::string& name) {
    for (const auto& p : kPresets) {
        if (name == p.name) return p;
    }
    return std::nullopt;
}

double segment_distance(Vec2 p, Vec2 a, Vec2 b) {
    const Vec2 ab = b - a;
    const double len2 = dot(ab, ab);
    double t = len2 > 0.0 ? dot(p - a, ab) / len2 : 0.0;
    t = std::clamp(t, 0.0, 1.0);
    return norm(p - (a + ab * t));
}

bool point_in_polygon(Vec2 p, const std::vector<Vec2>& poly) {
    bool inside = false;
    const std::size_t n = poly.size();
    for (std::size_t k = 0, m = n - 1; k < n; m = k++) {
        const Vec2 a = poly[k];
        const Vec2 b = poly[m];
        if ((a.y > p.y) != (b.y > p.y)) {
            const double xc = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
            if (p.x < xc) inside = !inside;
        }
    }
    return inside;
}

double polygon_area(const std::vector<Vec2>& poly) {
    double twice = 0.0;
    for (std::size_t k = 0, n = poly.size(); k < n; ++k) {
        const Vec2 a = poly[k];
        const Vec2 b = poly[(k + 1) % n];
        twice += a.x * b.y - b.x * a.y;
    }
    return 0.5 * twice;
}

Field rasterize_features(const Grid& grid, double base_speed, const std::vector<TerrainFeature>& features) {
    grid.validate();
    if (!(base_speed > 0.0 && base_speed <= 1.0)) throw InputError("base overlay speed must lie in (0, 1]");
    for (std::size_t k = 0; k < features.size(); ++k) check_feature(k, features[k]);

    Field overlay(grid, base_speed);
    for (const auto& f : features) {
        // A feature never raises the multiplier, so anything at or above base is a no-op.
        if (f.value >= base_speed) continue;
        if (f.kind == FeatureKind::Polygon) {
            double xmin = f.geometry[0].x, xmax = xmin, ymin = f.geometry[0].y, ymax = ymin;
            for (const auto& v : f.geometry) {
                xmin = std::min(xmin, v.x); xmax = std::max(xmax, v.x);
                ymin = std::min(ymin, v.y); ymax = std::max(ymax, v.y);
            }
            const int i0 = std::max(0, static_cast<int>(std::floor((xmin - grid.origin.x) / grid.ds)));
            const int i1 = std::min(grid.nx, static_cast<int>(std::ceil((xmax - grid.origin.x) / grid.ds)) + 1);
            const int j0 = std::max(0, static_cast<int>(std::floor((ymin - grid.origin.y) / grid.ds)));
            const int j1 = std::min(grid.ny, static_cast<int>(std::ceil((ymax - grid.origin.y) / grid.ds)) + 1);
            for (int j = j0; j < j1; ++j) {
                for (int i = i0; i < i1; ++i) {
                    if (point_in_polygon(grid.center(i, j), f.geometry)) {
                        overlay(i, j) = std::min(overlay(i, j), f.value);
                    }
                }
            }
            continue;
        }
        // erf(d/scale) is 1 to double precision beyond ~6 scales.
        const double reach = 6.5 * f.scale;
        double xmin = f.geometry[0].x, xmax = xmin, ymin = f.geometry[0].y, ymax = ymin;
        for (const auto& v : f.geometry) {
            xmin = std::min(xmin, v.x); xmax = std::max(xmax, v.x);
            ymin = std::min(ymin, v.y); ymax = std::max(ymax, v.y);
        }
        const int i0 = std::max(0, static_cast<int>(std::floor((xmin - reach - grid.origin.x) / grid.ds)));
        const int i1 = std::min(grid.nx, static_cast<int>(std::ceil((xmax + reach - grid.origin.x) / grid.ds)) + 1);
        const int j0 = std::max(0, static_cast<int>(std::floor((ymin - reach - grid.origin.y) / grid.ds)));
        const int j1 = std::min(grid.ny, static_cast<int>(std::ceil((ymax + reach - grid.origin.y) / grid.ds)) + 1);
        for (int j = j0; j < j1; ++j) {
            for (int i = i0; i < i1; ++i) {
                const double d = feature_distance(f, grid.center(i, j));
                const double t = f.value + (base_speed - f.value) * std::erf(d / f.scale);
                overlay(i, j) = std::min(overlay(i, j), t);
            }
        }
    }
    return overlay;
}

Field smooth_field(const Field& field, int passes) {
    Field cur = field;
    Field next(field.nx(), field.ny());
    const int nx = field.nx();
    const int ny = field.ny();
    for (int p = 0; p < passes; ++p) {
        for (int j = 0; j < ny; ++j) {
            const int jm = std::max(j - 1, 0);
            const int jp = std::min(j + 1, ny - 1);
            for (int i = 0; i < nx; ++i) {
                const int im = std::max(i - 1, 0);
                const int ip = std::min(i + 1, nx - 1);
                const double s = cur(im, jm) + cur(i, jm) + cur(ip, jm) + cur(im, j) + cur(i, j) + cur(ip, j) +
                                 cur(im, jp) + cur(i, jp) + cur(ip, jp);
                next(i, j) = s / 9.0;
            }
        }
        std::swap(cur, next);
    }
    return cur;
}

TerrainMap smooth_overlay(const TerrainMap& map, int passes) {
    TerrainMap out = map;
    out.overlay = smooth_field(map.overlay, passes);
    return out;
}

Vec2 elevation_gradient(const TerrainMap& map, int i, int j) {
    const Field& h = map.elevation;
    const double ds = map.grid.ds;
    const int nx = map.grid.nx;
    const int ny = map.grid.ny;
    double gx;
    double gy;
    if (i == 0) gx = (h(1, j) - h(0, j)) / ds;
    else if (i == nx - 1) gx = (h(nx - 1, j) - h(nx - 2, j)) / ds;
    else gx = (h(i + 1, j) - h(i - 1, j)) / (2.0 * ds);
    if (j == 0) gy = (h(i, 1) - h(i, 0)) / ds;
    else if (j == ny - 1) gy = (h(i, ny - 1) - h(i, ny - 2)) / ds;
    else gy = (h(i, j + 1) - h(i, j - 1)) / (2.0 * ds);
    return {gx, gy};
}

double slope_along(const TerrainMap& map, int i, int j, Vec2 direction) {
    return dot(elevation_gradient(map, i, j), direction);
}

double sample_elevation(const TerrainMap& map, Vec2 p) {
    const Grid& g = map.grid;
    const double fx = std::clamp((p.x - g.origin.x) / g.ds - 0.5, 0.0, static_cast<double>(g.nx - 1));
    const double fy = std::clamp((p.y - g.origin.y) / g.ds - 0.5, 0.0, static_cast<double>(g.ny - 1));
    const int i0 = std::min(static_cast<int>(fx), g.nx - 2);
    const int j0 = std::min(static_cast<int>(fy), g.ny - 2);
    const double tx = fx - i0;
    const double ty = fy - j0;
    const Field& h = map.elevation;
    return (1 - tx) * (1 - ty) * h(i0, j0) + tx * (1 - ty) * h(i0 + 1, j0) + (1 - tx) * ty * h(i0, j0 + 1) +
           tx * ty * h(i0 + 1, j0 + 1);
}

ElevationGradient elevation_gradient_field(const TerrainMap& map) {
    ElevationGradient g{Field(map.grid), Field(map.grid)};
    for (int j = 0; j < map.grid.ny; ++j) {
        for (int i = 0; i < map.grid.nx; ++i) {
            const Vec2 v = elevation_gradient(map, i, j);
            g.dx(i, j) = v.x;
            g.dy(i, j) = v.y;
        }
    }
    return g;
}

}  // namespace bfm
