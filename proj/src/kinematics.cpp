#include "bfm/kinematics.hpp"

#include <algorithm>
#include <cmath>

namespace bfm {

double density_factor(double rho_total, double rho_m) {
    const double q = rho_total / rho_m;
    if (q <= 0.0) return 1.0;
    if (q >= 1.0) return 0.0;
    const double q3 = q * q * q;
    return ((-6.0 * q + 15.0) * q - 10.0) * q3 + 1.0;
}

double slope_factor(double s) {
    if (s <= 0.0) return 1.0;
    return 1.0 / (1.0 + 3.5 * s);
}

double goal_proximity_factor(double r, double ds) {
    return std::erf(r / (1.5 * ds)) + 0.5 * (1.0 + std::erf((r - 40.0 * ds) / (10.0 * ds)));
}

Vec2 goal_position(Vec2 xi, const GoalTransform& g) {
    const double c = std::cos(g.theta);
    const double s = std::sin(g.theta);
    const Vec2 rel = xi - g.y1;
    return {g.a * c * rel.x - g.b * s * rel.y + g.y2.x, g.a * s * rel.x + g.b * c * rel.y + g.y2.y};
}

Vec2 walking_direction(Vec2 x, Vec2 z) {
    const Vec2 diff = z - x;
    const double r = norm(diff);
    if (r < 1e-9) return {};
    return diff * (1.0 / r);
}

VelocityField velocity_field(const Field& density, const Field& xi_x, const Field& xi_y, const Field& rho_total,
                             const TerrainMap& map, const GoalTransform& goal, const KinematicsParams& p) {
    const Grid& g = map.grid;
    VelocityField out{Field(g), Field(g), Field(g), Field(g)};
    const double c = std::cos(goal.theta);
    const double s = std::sin(goal.theta);
    constexpr double kRhoFloor = 1e-12;
    for (int j = 0; j < g.ny; ++j) {
        for (int i = 0; i < g.nx; ++i) {
            const Vec2 v = directed_velocity(g.center(i, j), {xi_x(i, j), xi_y(i, j)},
                                             density_factor(rho_total(i, j), p.max_density),
                                             elevation_gradient(map, i, j), map.overlay(i, j), goal, p, c, s);
            out.vx(i, j) = v.x;
            out.vy(i, j) = v.y;
            Vec2 u = v;
            const double rho = density(i, j);
            if (p.diffusion > 0.0 && rho > kRhoFloor) {
                const int im = std::max(i - 1, 0), ip = std::min(i + 1, g.nx - 1);
                const int jm = std::max(j - 1, 0), jp = std::min(j + 1, g.ny - 1);
                const double gx = (density(ip, j) - density(im, j)) / ((ip - im) * g.ds);
                const double gy = (density(i, jp) - density(i, jm)) / ((jp - jm) * g.ds);
                u = u - Vec2{gx, gy} * (p.diffusion / rho);
            }
            out.ux(i, j) = u.x;
            out.uy(i, j) = u.y;
        }
    }
    return out;
}

}  // namespace bfm
