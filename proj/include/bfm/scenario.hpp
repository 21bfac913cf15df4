#pragma once

#include <memory>
#include <string>
#include <vector>

#include "bfm/combat.hpp"
#include "bfm/terrain.hpp"
#include "bfm/units.hpp"

namespace bfm {

struct CommandParams {
    double rotation_radius = 50.0;          // m; rotation rate = march speed / radius
    double translate_taper = 10.0;          // m
    double rotate_taper = deg_to_rad(10.0);
    double arrive_tolerance = 0.5;          // m
    double rotate_tolerance = deg_to_rad(0.5);
    double reference_losses = 0.35;         // F_m
    double morale_increment = 0.5;
    double sector = deg_to_rad(45.0);
    Side pressing_side = Side::Red;
};

struct ModelParams {
    double max_speed = 1.4;
    double max_density = 5.6;
    double diffusion = 0.0;
    CombatParams combat;
    CommandParams command;
    double artillery_peak_fraction = 0.1;
    double artillery_scale = 20.0;
    double boundary_fraction = 0.02;
    double inflow_density = 1e-12;  // ghost density on inflow faces
    // Corrected densities below support_floor * max_density are set to zero so
    // the upwind tails do not spread the unit windows over the whole map.
    double support_floor = 1e-9;
};

struct Scenario {
    std::string name = "scenario";
    std::shared_ptr<const TerrainMap> terrain;
    std::vector<UnitSeed> units;
    std::vector<ArtilleryUnit> artillery;
    ModelParams params;
    double dt = 1.0;
    double duration = 3600.0;
    double snapshot_every = 60.0;
    bool terrain_effects = true;
    bool closein_enabled = true;
    bool ranged_enabled = true;

    const Grid& grid() const { return terrain->grid; }
    long steps() const;
    /// dt * 2 V_m / ds; must stay below 1.
    double cfl_number() const;
    /// Throws InputError describing the first violated invariant.
    void validate() const;
};

}  // namespace bfm
