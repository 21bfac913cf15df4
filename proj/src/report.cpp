#include "bfm/report.hpp"

#include <cmath>
#include <iomanip>
#include <sstream>

namespace bfm {

ScenarioTotals scenario_totals(const Scenario& s) {
    ScenarioTotals t;
    for (const auto& u : s.units) {
        if (u.side == Side::Blue) {
            t.blue_infantry += u.formation.strength;
            ++t.blue_units;
        } else {
            t.red_infantry += u.formation.strength;
            ++t.red_units;
        }
    }
    for (const auto& a : s.artillery) (a.side == Side::Blue ? t.blue_guns : t.red_guns) += a.guns;
    return t;
}

std::string validation_report(const Scenario& s) {
    s.validate();
    const Grid& g = s.grid();
    for (const auto& u : s.units) init_unit(u, g, s.params.max_density);

    const ScenarioTotals t = scenario_totals(s);
    const TerrainMap& map = *s.terrain;
    const double max_dt = g.ds / (2.0 * s.params.max_speed);
    std::ostringstream o;
    o << std::fixed;
    o << "scenario " << s.name << "\n";
    o << "grid " << g.nx << " x " << g.ny << " cells, ds " << std::setprecision(2) << g.ds << " m, extent "
      << g.width() << " x " << g.height() << " m, origin (" << g.origin.x << ", " << g.origin.y << ")\n";
    o << "elevation " << map.elevation.min() << " .. " << map.elevation.max() << " m\n";
    o << "overlay " << std::setprecision(3) << map.overlay.min() << " .. " << map.overlay.max() << "\n";
    o << std::setprecision(0);
    o << "Blue infantry " << t.blue_infantry << " in " << t.blue_units << " units, " << t.blue_guns << " guns\n";
    o << "Red infantry " << t.red_infantry << " in " << t.red_units << " units, " << t.red_guns << " guns\n";
    o << std::setprecision(3);
    o << "time step " << s.dt << " s x " << s.steps() << " steps; CFL number " << s.cfl_number()
      << " (dt limit " << max_dt << " s)\n";
    o << "terrain effects " << (s.terrain_effects ? "on" : "off") << ", close-in "
      << (s.closein_enabled ? "on" : "off") << ", ranged " << (s.ranged_enabled ? "on" : "off") << "\n";
    const ModelParams& p = s.params;
    const CombatParams& c = p.combat;
    o << std::defaultfloat << std::setprecision(6);
    o << "params Vm=" << p.max_speed << " rho_m=" << p.max_density << " D=" << p.diffusion << " k=" << c.closein_k
      << " k'inf=" << c.ranged_k_infantry << " k'art=" << c.ranged_k_artillery << " R0inf=" << c.range_infantry
      << " R0art=" << c.range_artillery << " alpha_r=" << rad_to_deg(c.alpha_r) << " theta_r="
      << rad_to_deg(c.theta_r) << " Vr=" << c.reference_speed << " Fm=" << p.command.reference_losses
      << " A_ref=" << c.ranged_reference_area << "\n";
    return o.str();
}

}  // namespace bfm
