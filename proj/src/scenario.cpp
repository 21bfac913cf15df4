#include "bfm/scenario.hpp"

#include <cmath>
#include <set>
#include <stdexcept>

#include "bfm/error.hpp"

namespace bfm {

long Scenario::steps() const { return std::lround(duration / dt); }

double Scenario::cfl_number() const { return dt * 2.0 * params.max_speed / grid().ds; }

void Scenario::validate() const {
    if (!terrain) throw InputError("scenario '" + name + "' has no terrain");
    try {
        grid().validate();
    } catch (const std::invalid_argument& e) {
        throw InputError(e.what());
    }
    if (!terrain->elevation.matches(grid()) || !terrain->overlay.matches(grid())) {
        throw InputError("terrain layers do not match the grid");
    }
    if (!(dt > 0.0)) throw InputError("time step must be positive");
    if (!(duration >= 0.0)) throw InputError("duration must not be negative");
    const double n = duration / dt;
    if (std::abs(n - std::round(n)) > 1e-9 * std::max(1.0, n)) {
        throw InputError("duration must be a whole number of time steps");
    }
    if (!(cfl_number() < 1.0)) {
        throw InputError("time step too large for the grid: dt * 2 Vm / ds = " + std::to_string(cfl_number()) +
                         " must stay below 1");
    }
    if (snapshot_every < 0.0) throw InputError("snapshot cadence must not be negative");
    if (!(params.max_speed > 0.0) || !(params.max_density > 0.0)) {
        throw InputError("maximum speed and density must be positive");
    }
    if (params.diffusion < 0.0) throw InputError("diffusion must not be negative");
    if (!(params.support_floor >= 0.0 && params.support_floor < 1e-3)) {
        throw InputError("support_floor must be in [0, 1e-3)");
    }
    if (!(params.combat.ranged_reference_area > 0.0)) throw InputError("ranged reference area must be positive");

    std::set<int> ids;
    for (const UnitSeed& u : units) {
        if (!ids.insert(u.id).second) throw InputError("duplicate unit id " + std::to_string(u.id));
        if (!std::isfinite(u.morale)) throw InputError("unit " + std::to_string(u.id) + ": morale is not finite");
        if (!(u.march_speed > 0.0)) {
            throw InputError("unit " + std::to_string(u.id) + ": march speed must be positive");
        }
        if (!(u.formation.strength > 0.0)) {
            throw InputError("unit " + std::to_string(u.id) + ": strength must be positive");
        }
    }
    const Grid& g = grid();
    for (const ArtilleryUnit& a : artillery) {
        if (!ids.insert(a.id).second) throw InputError("duplicate unit id " + std::to_string(a.id));
        if (a.guns <= 0) throw InputError("battery " + std::to_string(a.id) + ": gun count must be positive");
        if (a.position.x < g.origin.x || a.position.y < g.origin.y || a.position.x > g.origin.x + g.width() ||
            a.position.y > g.origin.y + g.height()) {
            throw InputError("battery " + std::to_string(a.id) + " is off the map");
        }
    }
}

}  // namespace bfm
