#include "bfm/units.hpp"

#include <algorithm>
#include <cmath>

#include "bfm/error.hpp"

namespace bfm {

const char* side_name(Side s) { return s == Side::Red ? "red" : "blue"; }

const char* status_name(UnitStatus s) {
    switch (s) {
        case UnitStatus::Active: return "active";
        case UnitStatus::Retreating: return "retreating";
        case UnitStatus::Pressing: return "pressing";
        case UnitStatus::Destroyed: return "destroyed";
    }
    return "?";
}

Field formation_coverage(const FormationSpec& spec, const Grid& grid) {
    constexpr int kSub = 8;
    Field cover(grid, 0.0);
    const Vec2 facing{std::cos(spec.bearing), std::sin(spec.bearing)};
    const Vec2 across{-facing.y, facing.x};
    const double hw = 0.5 * spec.width;
    const double hd = 0.5 * spec.depth;
    const double reach = std::hypot(hw, hd) + grid.ds;
    const int i0 = std::max(0, static_cast<int>(std::floor((spec.center.x - reach - grid.origin.x) / grid.ds)));
    const int i1 = std::min(grid.nx, static_cast<int>(std::ceil((spec.center.x + reach - grid.origin.x) / grid.ds)));
    const int j0 = std::max(0, static_cast<int>(std::floor((spec.center.y - reach - grid.origin.y) / grid.ds)));
    const int j1 = std::min(grid.ny, static_cast<int>(std::ceil((spec.center.y + reach - grid.origin.y) / grid.ds)));
    for (int j = j0; j < j1; ++j) {
        for (int i = i0; i < i1; ++i) {
            int hits = 0;
            for (int sj = 0; sj < kSub; ++sj) {
                for (int si = 0; si < kSub; ++si) {
                    const Vec2 p{grid.origin.x + (i + (si + 0.5) / kSub) * grid.ds,
                                 grid.origin.y + (j + (sj + 0.5) / kSub) * grid.ds};
                    const Vec2 rel = p - spec.center;
                    if (std::abs(dot(rel, across)) <= hw && std::abs(dot(rel, facing)) <= hd) ++hits;
                }
            }
            cover(i, j) = static_cast<double>(hits) / (kSub * kSub);
        }
    }
    return cover;
}

UnitState init_unit(const UnitSeed& seed, const Grid& grid, double max_density) {
    const FormationSpec& f = seed.formation;
    if (!(f.width > 0.0 && f.depth > 0.0)) {
        throw InputError("unit " + std::to_string(seed.id) + ": formation width and depth must be positive");
    }
    if (!(f.strength > 0.0)) throw InputError("unit " + std::to_string(seed.id) + ": strength must be positive");
    const double implied = f.strength / (f.width * f.depth);
    if (implied > max_density) {
        throw InputError("unit " + std::to_string(seed.id) + ": implied density " + std::to_string(implied) +
                         " exceeds the maximum crowd density " + std::to_string(max_density));
    }

    UnitState u;
    u.id = seed.id;
    u.side = seed.side;
    u.label = seed.label;
    u.density = formation_coverage(f, grid);
    const double covered = u.density.sum() * grid.cell_area();
    if (covered <= 0.0) {
        throw InputError("unit " + std::to_string(seed.id) + ": formation does not intersect the map");
    }
    // Rescale so the raster integrates to the strength exactly.
    const double scale = f.strength / covered;
    for (double& v : u.density.values()) v *= scale;
    if (u.density.max() > max_density) {
        throw InputError("unit " + std::to_string(seed.id) + ": formation clipped by the map edge packs above " +
                         "the maximum crowd density");
    }

    u.xi_x = Field(grid);
    u.xi_y = Field(grid);
    for (int j = 0; j < grid.ny; ++j) {
        for (int i = 0; i < grid.nx; ++i) {
            const Vec2 c = grid.center(i, j);
            u.xi_x(i, j) = c.x;
            u.xi_y(i, j) = c.y;
        }
    }
    u.initial_bearing = f.bearing;
    u.goal = GoalTransform{f.center, f.center, 0.0, 1.0, 1.0};
    u.march_speed = seed.march_speed;
    u.initial_morale = seed.morale;
    u.morale = seed.morale;
    u.initial_strength = f.strength;
    u.orders = seed.orders;
    return u;
}

DensityMoments density_moments(const Field& density, const Grid& grid, const CellBox& box) {
    DensityMoments m;
    for (int j = box.j0; j < box.j1; ++j) {
        double row = 0.0, row_x = 0.0;
        const double y = grid.origin.y + (j + 0.5) * grid.ds;
        for (int i = box.i0; i < box.i1; ++i) {
            const double r = density(i, j);
            row += r;
            row_x += r * (grid.origin.x + (i + 0.5) * grid.ds);
        }
        m.mass += row;
        m.mass_x += row_x;
        m.mass_y += row * y;
    }
    return m;
}

UnitSummary unit_summary(const UnitState& u, const Grid& grid, double mean_speed) {
    UnitSummary s;
    s.id = u.id;
    s.side = u.side;
    s.bearing = u.bearing();
    s.mean_speed = mean_speed;
    s.retreating = u.status == UnitStatus::Retreating;
    const DensityMoments m = density_moments(u.density, grid, CellBox{0, grid.nx, 0, grid.ny});
    s.strength = m.mass * grid.cell_area();
    if (m.mass > 0.0) s.centroid = {m.mass_x / m.mass, m.mass_y / m.mass};
    s.destroyed = u.status == UnitStatus::Destroyed || s.strength < kDestroyedStrength;
    return s;
}

double mean_speed(const Field& density, const Field& ux, const Field& uy) {
    double w = 0.0, ws = 0.0;
    for (std::size_t k = 0; k < density.size(); ++k) {
        w += density[k];
        ws += density[k] * std::hypot(ux[k], uy[k]);
    }
    return w > 0.0 ? ws / w : 0.0;
}

Field artillery_density(const ArtilleryUnit& a, const Grid& grid, double max_density, double peak_fraction,
                        double scale) {
    Field f(grid, 0.0);
    const double peak = peak_fraction * max_density;
    for (int j = 0; j < grid.ny; ++j) {
        for (int i = 0; i < grid.nx; ++i) {
            const double r = norm(grid.center(i, j) - a.position) / scale;
            f(i, j) = peak * std::exp(-r * r);
        }
    }
    return f;
}

}  // namespace bfm
