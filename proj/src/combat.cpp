#include "bfm/combat.hpp"

#include <algorithm>
#include <cmath>

namespace bfm {

double wrap_angle(double a) {
    a = std::fmod(a, 2.0 * kPi);
    if (a <= -kPi) a += 2.0 * kPi;
    else if (a > kPi) a -= 2.0 * kPi;
    return a;
}

RangedFactors ranged_factors(double r, double alpha, double beta, double theta_fire, double speed,
                             double characteristic_range, const CombatParams& p) {
    RangedFactors f;
    f.range = r < characteristic_range ? 1.0 : (characteristic_range / r) * (characteristic_range / r);
    f.direction = std::exp(-2.0 * alpha * alpha / (p.alpha_r * p.alpha_r));
    f.orientation = (3.0 + std::cos(beta)) / 2.0;
    f.elevation = std::exp(-2.0 * theta_fire * theta_fire / (p.theta_r * p.theta_r));
    f.motion = std::exp(-50.0 * speed / p.reference_speed);
    return f;
}

double fire_elevation_angle(Vec2 attacker, double attacker_h, Vec2 defender, double defender_h) {
    const double horizontal = norm(defender - attacker);
    const double dh = defender_h - attacker_h;
    if (horizontal == 0.0 && dh == 0.0) return 0.0;
    if (horizontal == 0.0) return 0.0;
    return std::atan2(dh, horizontal);
}

double closein_taper(double rho, const CombatParams& p) {
    return std::clamp(rho / (p.closein_floor * p.max_density), 0.0, 1.0);
}

Field closein_rate(const Field& density, const Field& weighted_enemy_density, const CombatParams& p) {
    Field out(density.nx(), density.ny());
    for (std::size_t k = 0; k < density.size(); ++k) {
        const double rho = density[k];
        out[k] = closein_taper(rho, p) * rho * weighted_enemy_density[k];
    }
    return out;
}

Field closein_rate(const Field& density, std::span<const Field* const> enemy_densities, const CombatParams& p) {
    Field weighted(density.nx(), density.ny());
    for (const Field* e : enemy_densities) {
        for (std::size_t k = 0; k < weighted.size(); ++k) weighted[k] += p.closein_k * (*e)[k];
    }
    return closein_rate(density, weighted, p);
}

TargetAssignment select_target(const Shooter& attacker, std::span<const UnitSummary> candidates,
                               const CombatParams& p) {
    TargetAssignment t;
    t.attacker = attacker.id;
    double best = 0.0;
    for (const auto& c : candidates) {
        if (c.side == attacker.side || c.destroyed || c.id == attacker.id) continue;
        const Vec2 d = c.centroid - attacker.position;
        const double dist = norm(d);
        const double alpha = dist > 0.0 ? wrap_angle(std::atan2(d.y, d.x) - attacker.bearing) : 0.0;
        if (std::abs(alpha) > p.sector) continue;
        if (!t.defender || dist < best || (dist == best && c.id < *t.defender)) {
            t.defender = c.id;
            best = dist;
            t.range = dist;
            t.alpha = alpha;
        }
    }
    return t;
}

RangedAttack ranged_attack(const Shooter& attacker, const Target& defender, const CombatParams& p) {
    const Vec2 d = defender.position - attacker.position;
    const double r = norm(d);
    const double alpha = r > 0.0 ? wrap_angle(std::atan2(d.y, d.x) - attacker.bearing) : 0.0;
    const double beta = wrap_angle(defender.bearing - attacker.bearing);
    const double theta = fire_elevation_angle(attacker.position, attacker.elevation, defender.position,
                                              defender.elevation);
    const double r0 = attacker.artillery ? p.range_artillery : p.range_infantry;
    const double k = attacker.artillery ? p.ranged_k_artillery : p.ranged_k_infantry;
    RangedAttack a;
    a.factors = ranged_factors(r, alpha, beta, theta, attacker.artillery ? 0.0 : attacker.speed, r0, p);
    a.coefficient = k * a.factors.product() * attacker.count / (p.max_density * p.ranged_reference_area);
    return a;
}

Field ranged_rate(const Field& density, double coefficient_sum) {
    Field out(density.nx(), density.ny());
    for (std::size_t k = 0; k < density.size(); ++k) out[k] = density[k] * coefficient_sum;
    return out;
}

}  // namespace bfm
