#pragma once

#include <optional>
#include <span>
#include <vector>

#include "bfm/grid.hpp"
#include "bfm/units.hpp"

namespace bfm {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double deg_to_rad(double d) { return d * kPi / 180.0; }
inline constexpr double rad_to_deg(double r) { return r * 180.0 / kPi; }

/// Wraps an angle to (-pi, pi].
double wrap_angle(double a);

struct CombatParams {
    double closein_k = 5.0e-2;        // m^2/s, between enemy flow units only
    double ranged_k_infantry = 8.0;   // 1/s
    double ranged_k_artillery = 16.0; // 1/s
    double range_infantry = 100.0;    // R_0, m
    double range_artillery = 1200.0;  // m
    double alpha_r = deg_to_rad(90.0);
    double theta_r = deg_to_rad(30.0);
    double reference_speed = 1.4;     // V_r
    double max_density = 5.6;         // rho_m
    double closein_floor = 1e-4;      // taper onset as a fraction of rho_m
    double sector = deg_to_rad(45.0); // half-width of the targeting window
    /// Ranged losses are R_i-proportional through rho_i and R_j-proportional
    /// through the attacker count; the product is normalised by rho_m times
    /// this area (m^2) so the rate has units of persons / (m^2 s).
    double ranged_reference_area = 2.0e6;
};

struct RangedFactors {
    double range = 1.0;        // f1
    double direction = 1.0;    // f2
    double orientation = 1.0;  // f3
    double elevation = 1.0;    // f4
    double motion = 1.0;       // f5

    double product() const { return range * direction * orientation * elevation * motion; }
};

RangedFactors ranged_factors(double r, double alpha, double beta, double theta_fire, double speed,
                             double characteristic_range, const CombatParams& p);

/// Angle of fire relative to horizontal from attacker to defender; 0 for
/// coincident positions.
double fire_elevation_angle(Vec2 attacker, double attacker_h, Vec2 defender, double defender_h);

/// Linear taper from 0 at rho = 0 to 1 at closein_floor * rho_m.
double closein_taper(double rho, const CombatParams& p);

/// Close-in area-fire loss rate of one unit given the k-weighted sum of the
/// enemy densities (sum_j k_ij rho_j) at each cell.
Field closein_rate(const Field& density, const Field& weighted_enemy_density, const CombatParams& p);

/// Same, summing over a list of enemy densities with the baseline k.
Field closein_rate(const Field& density, std::span<const Field* const> enemy_densities, const CombatParams& p);

/// Anything that can deliver aggregated ranged fire.
struct Shooter {
    int id = 0;
    Side side = Side::Red;
    Vec2 position{};
    double elevation = 0.0;
    double bearing = 0.0;
    double count = 0.0;  // persons for infantry, guns for artillery
    double speed = 0.0;
    bool artillery = false;
};

struct Target {
    int id = 0;
    Vec2 position{};
    double elevation = 0.0;
    double bearing = 0.0;
};

struct TargetAssignment {
    int attacker = 0;
    std::optional<int> defender;
    double range = 0.0;
    double alpha = 0.0;
};

/// Nearest enemy centroid inside +-sector of the attacker bearing; ties go to
/// the lowest id. Destroyed and friendly candidates are skipped.
TargetAssignment select_target(const Shooter& attacker, std::span<const UnitSummary> candidates,
                               const CombatParams& p);

struct RangedAttack {
    RangedFactors factors;
    double coefficient = 0.0;  // multiplies rho_i to give the loss rate
};

RangedAttack ranged_attack(const Shooter& attacker, const Target& defender, const CombatParams& p);

/// omega'' = rho_i * sum of attack coefficients onto the unit.
Field ranged_rate(const Field& density, double coefficient_sum);

}  // namespace bfm
