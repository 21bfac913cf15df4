#pragma once

#include <set>
#include <string>
#include <vector>

#include "bfm/grid.hpp"
#include "bfm/kinematics.hpp"
#include "bfm/orders.hpp"

namespace bfm {

enum class Side { Red, Blue };
enum class UnitStatus { Active, Retreating, Pressing, Destroyed };

inline Side enemy_of(Side s) { return s == Side::Red ? Side::Blue : Side::Red; }
const char* side_name(Side s);
const char* status_name(UnitStatus s);

/// Rectangle of `width` across the facing direction and `depth` along it,
/// centred at `center` and facing `bearing`.
struct FormationSpec {
    Vec2 center{};
    double width = 0.0;
    double depth = 0.0;
    double bearing = 0.0;
    double strength = 0.0;
};

/// Scenario description of one flow unit before initialisation.
struct UnitSeed {
    int id = 0;
    Side side = Side::Red;
    std::string label;
    double morale = 1.0;
    FormationSpec formation;
    OrderList orders;
    double march_speed = 0.6;  // m/s, ordered goal translation speed
};

/// Command-phase bookkeeping carried by each unit.
struct CommandState {
    std::size_t next_order = 0;
    double morale_bonus = 0.0;          // accumulated sighting increments
    std::set<int> sighted_retreats;     // enemies that already granted a bonus
    int pursuit_target = -1;            // enemy id while pressing
    double status_time = -1.0;          // time the current non-active status began
};

struct UnitState {
    int id = 0;
    Side side = Side::Red;
    std::string label;

    Field density;  // persons / m^2
    Field xi_x;     // identity: x of the initial-formation slot
    Field xi_y;

    double initial_bearing = 0.0;
    GoalTransform goal;
    double march_speed = 0.6;

    double initial_morale = 1.0;
    double morale = 1.0;
    double initial_strength = 0.0;
    OrderList orders;
    UnitStatus status = UnitStatus::Active;
    CommandState command;

    double bearing() const { return initial_bearing + goal.theta; }
    bool alive() const { return status != UnitStatus::Destroyed; }
};

/// Immobile discrete battery; contributes an obstacle density but is never
/// advected and never takes losses.
struct ArtilleryUnit {
    int id = 0;
    Side side = Side::Red;
    std::string label;
    Vec2 position{};
    int guns = 1;
    double bearing = 0.0;  // fixed at scenario start toward the enemy line
};

struct UnitSummary {
    int id = 0;
    Side side = Side::Red;
    double strength = 0.0;  // R = sum rho ds^2
    Vec2 centroid{};
    double mean_speed = 0.0;  // density-weighted |u|
    double bearing = 0.0;
    bool destroyed = false;
    bool retreating = false;
};

/// Units with fewer than this many persons are destroyed.
inline constexpr double kDestroyedStrength = 1.0;

/// Builds density and identity rasters for a formation. Throws InputError if
/// the implied density exceeds `max_density` or the footprint misses the map.
UnitState init_unit(const UnitSeed& seed, const Grid& grid, double max_density);

/// Area-weighted coverage of the formation rectangle per cell (0..1).
Field formation_coverage(const FormationSpec& spec, const Grid& grid);

/// Density-weighted strength and centroid of a raster, summed row by row so
/// the result does not depend on how rows were partitioned among workers.
struct DensityMoments {
    double mass = 0.0;    // sum rho (not yet multiplied by cell area)
    double mass_x = 0.0;  // sum rho x
    double mass_y = 0.0;
};
DensityMoments density_moments(const Field& density, const Grid& grid, const CellBox& box);

UnitSummary unit_summary(const UnitState& u, const Grid& grid, double mean_speed = 0.0);

/// Density-weighted mean speed from a total-velocity field.
double mean_speed(const Field& density, const Field& ux, const Field& uy);

/// Effective obstacle density of a battery: peak_fraction * rho_m * exp(-(r/scale)^2).
Field artillery_density(const ArtilleryUnit& a, const Grid& grid, double max_density, double peak_fraction = 0.1,
                        double scale = 20.0);

}  // namespace bfm
