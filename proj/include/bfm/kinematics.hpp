#pragma once

#include "bfm/grid.hpp"
#include "bfm/terrain.hpp"

namespace bfm {

/// Formation goal: slot z = A (xi - y1) + y2 with
/// A = [[a cos t, -b sin t], [a sin t, b cos t]].
struct GoalTransform {
    Vec2 y1{};
    Vec2 y2{};
    double theta = 0.0;
    double a = 1.0;
    double b = 1.0;
};

struct KinematicsParams {
    double max_speed = 1.4;    // V_m, m/s
    double max_density = 5.6;  // rho_m, persons/m^2
    double diffusion = 0.0;    // D, m^2/s
    double ds = 8.0;           // grid spacing the goal-proximity scales refer to
    bool terrain_effects = true;
};

/// Quintic crowd-density slowdown, 1 at rho = 0 and 0 at rho >= rho_m.
double density_factor(double rho_total, double rho_m);

/// Uphill slowdown 1 / (1 + 3.5 s); downhill and flat ground do not slow.
double slope_factor(double s);

/// erf(r / 1.5ds) + (1 + erf((r - 40ds) / 10ds)) / 2: taper near the slot,
/// double time when far behind it.
double goal_proximity_factor(double r, double ds);

Vec2 goal_position(Vec2 xi, const GoalTransform& g);

/// Unit vector toward the goal; zero when already there (|z - x| < 1e-9 m).
Vec2 walking_direction(Vec2 x, Vec2 z);

struct VelocityField {
    Field vx, vy;  // directed velocity V
    Field ux, uy;  // total velocity u = V - (D / rho) grad rho
};

/// Reference whole-map velocity evaluation for one unit. `density` is the
/// unit's own density (diffusion term only); `rho_total` includes every flow
/// unit and the artillery obstacle densities.
VelocityField velocity_field(const Field& density, const Field& xi_x, const Field& xi_y, const Field& rho_total,
                             const TerrainMap& map, const GoalTransform& goal, const KinematicsParams& p);

/// Directed velocity at one cell given f(rho_total). Shared by the reference
/// field evaluator and the windowed solver so both follow one formula.
inline Vec2 directed_velocity(Vec2 x, Vec2 xi, double crowd_factor, Vec2 grad_h, double overlay,
                              const GoalTransform& g, const KinematicsParams& p, double cos_t, double sin_t) {
    const Vec2 rel = xi - g.y1;
    const Vec2 z{g.a * cos_t * rel.x - g.b * sin_t * rel.y + g.y2.x, g.a * sin_t * rel.x + g.b * cos_t * rel.y + g.y2.y};
    const Vec2 diff = z - x;
    const double r = norm(diff);
    if (r < 1e-9) return {};
    const Vec2 d = diff * (1.0 / r);
    double speed = p.max_speed * crowd_factor * goal_proximity_factor(r, p.ds);
    if (p.terrain_effects) speed *= slope_factor(dot(d, grad_h)) * overlay;
    return d * speed;
}

}  // namespace bfm
