#pragma once

#include <span>

#include "bfm/scenario.hpp"
#include "bfm/units.hpp"

namespace bfm {

/// Nearest alive enemy flow unit inside the +-sector window about the unit's
/// bearing, or nullptr.
const UnitSummary* nearest_visible_enemy(const UnitSummary& self, std::span<const UnitSummary> all,
                                         double sector);
/// Nearest alive enemy flow unit in any direction, or nullptr.
const UnitSummary* nearest_enemy(const UnitSummary& self, std::span<const UnitSummary> all);

/// Moves y2 toward `target` at `speed`, slowing as tanh(distance / taper).
/// Returns the remaining distance; snaps onto the target inside the tolerance.
double translate_goal(GoalTransform& g, Vec2 target, double speed, double taper, double tolerance, double dt);

/// Rotates the goal so the formation bearing approaches `bearing`. Returns the
/// remaining absolute angle; snaps inside the tolerance.
double rotate_goal(GoalTransform& g, double initial_bearing, double bearing, double rate, double taper,
                   double tolerance, double dt);

/// Executes the unit's orders (or its retreat / pursuit goal) for one step.
void advance_orders(UnitState& u, const UnitSummary& self, std::span<const UnitSummary> all, double dt,
                    const CommandParams& p);

/// Recomputes F and M = M0 - F / F_m + bonus, grants sighting bonuses and
/// applies the retreat / press-attack checks. `all` is the frozen summary set
/// of the current serial phase.
void update_morale(UnitState& u, const UnitSummary& self, std::span<const UnitSummary> all, double time,
                   const CommandParams& p);

enum class OrderRole { Assault, Defend, Flank };

/// Parameters for the standard order lists.
struct OrderPlan {
    OrderRole role = OrderRole::Assault;
    double march_bearing = 0.0;     // assault: facing for the march
    std::vector<Vec2> waypoints;    // assault: translate targets in sequence
    double trigger_range = 500.0;   // defend / flank: wait-until range
    double bearing = 0.0;           // defend: rotate target; flank: final bearing
    Vec2 position{};                // defend / flank: destination
};

/// Red assault: rotate to the march bearing, translate through the waypoints,
/// face the nearest enemy. Blue defence: wait, rotate, translate, face enemy.
/// Blue flank: wait, one combined translate+rotate, face enemy.
OrderList standard_order_list(const OrderPlan& plan);

}  // namespace bfm
