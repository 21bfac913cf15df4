#include "bfm/command.hpp"

#include <algorithm>
#include <cmath>
#include <type_traits>

namespace bfm {

const char* order_name(const Order& o) {
    return std::visit(
        [](const auto& v) -> const char* {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, WaitUntilEnemyWithin>) return "wait";
            else if constexpr (std::is_same_v<T, RotateTo>) return "rotate";
            else if constexpr (std::is_same_v<T, TranslateTo>) return "translate";
            else if constexpr (std::is_same_v<T, FaceNearestEnemy>) return "face_enemy";
            else return "flank";
        },
        o);
}

const UnitSummary* nearest_visible_enemy(const UnitSummary& self, std::span<const UnitSummary> all,
                                         double sector) {
    const UnitSummary* best = nullptr;
    double best_d = 0.0;
    for (const auto& c : all) {
        if (c.side == self.side || c.destroyed) continue;
        const Vec2 d = c.centroid - self.centroid;
        const double dist = norm(d);
        if (dist > 0.0 && std::abs(wrap_angle(std::atan2(d.y, d.x) - self.bearing)) > sector) continue;
        if (!best || dist < best_d || (dist == best_d && c.id < best->id)) {
            best = &c;
            best_d = dist;
        }
    }
    return best;
}

const UnitSummary* nearest_enemy(const UnitSummary& self, std::span<const UnitSummary> all) {
    return nearest_visible_enemy(self, all, kPi + 1.0);
}

double translate_goal(GoalTransform& g, Vec2 target, double speed, double taper, double tolerance, double dt) {
    const Vec2 diff = target - g.y2;
    const double dist = norm(diff);
    if (dist < tolerance) {
        g.y2 = target;
        return 0.0;
    }
    const double step = std::min(dist, speed * std::tanh(dist / taper) * dt);
    g.y2 += diff * (step / dist);
    const double left = dist - step;
    if (left < tolerance) {
        g.y2 = target;
        return 0.0;
    }
    return left;
}

double rotate_goal(GoalTransform& g, double initial_bearing, double bearing, double rate, double taper,
                   double tolerance, double dt) {
    const double delta = wrap_angle(bearing - (initial_bearing + g.theta));
    const double mag = std::abs(delta);
    if (mag < tolerance) {
        g.theta += delta;
        return 0.0;
    }
    const double step = std::min(mag, rate * std::tanh(mag / taper) * dt);
    g.theta += std::copysign(step, delta);
    const double left = mag - step;
    if (left < tolerance) {
        g.theta += std::copysign(left, delta);
        return 0.0;
    }
    return left;
}

namespace {

double bearing_to(Vec2 from, Vec2 to) {
    const Vec2 d = to - from;
    return std::atan2(d.y, d.x);
}

const UnitSummary* find_summary(std::span<const UnitSummary> all, int id) {
    for (const auto& s : all) {
        if (s.id == id) return &s;
    }
    return nullptr;
}

}  // namespace

void advance_orders(UnitState& u, const UnitSummary& self, std::span<const UnitSummary> all, double dt,
                    const CommandParams& p) {
    if (!u.alive()) return;
    const double rate = u.march_speed / p.rotation_radius;
    GoalTransform& g = u.goal;

    if (u.status == UnitStatus::Retreating) {
        translate_goal(g, g.y1, u.march_speed, p.translate_taper, p.arrive_tolerance, dt);
        rotate_goal(g, u.initial_bearing, u.initial_bearing, rate, p.rotate_taper, p.rotate_tolerance, dt);
        return;
    }
    if (u.status == UnitStatus::Pressing) {
        const UnitSummary* target = find_summary(all, u.command.pursuit_target);
        if (!target || target->destroyed) return;
        translate_goal(g, target->centroid, u.march_speed, p.translate_taper, p.arrive_tolerance, dt);
        rotate_goal(g, u.initial_bearing, bearing_to(self.centroid, target->centroid), rate, p.rotate_taper,
                    p.rotate_tolerance, dt);
        return;
    }

    while (u.command.next_order < u.orders.size()) {
        const Order& order = u.orders[u.command.next_order];
        bool done = false;
        if (const auto* w = std::get_if<WaitUntilEnemyWithin>(&order)) {
            const UnitSummary* e = nearest_enemy(self, all);
            done = e && norm(e->centroid - self.centroid) <= w->range;
        } else if (const auto* r = std::get_if<RotateTo>(&order)) {
            done = rotate_goal(g, u.initial_bearing, r->bearing, rate, p.rotate_taper, p.rotate_tolerance, dt) == 0.0;
        } else if (const auto* t = std::get_if<TranslateTo>(&order)) {
            done = translate_goal(g, t->point, u.march_speed, p.translate_taper, p.arrive_tolerance, dt) == 0.0;
        } else if (std::holds_alternative<FaceNearestEnemy>(order)) {
            const UnitSummary* e = nearest_enemy(self, all);
            if (!e) {
                done = true;
            } else {
                done = rotate_goal(g, u.initial_bearing, bearing_to(self.centroid, e->centroid), rate,
                                   p.rotate_taper, p.rotate_tolerance, dt) == 0.0;
            }
        } else if (const auto* f = std::get_if<Flank>(&order)) {
            const double left = translate_goal(g, f->point, u.march_speed, p.translate_taper, p.arrive_tolerance, dt);
            const double turn = rotate_goal(g, u.initial_bearing, f->bearing, rate, p.rotate_taper,
                                            p.rotate_tolerance, dt);
            done = left == 0.0 && turn == 0.0;
        }
        if (!done) return;
        ++u.command.next_order;
        // A completed wait hands the same step to the next order; motion
        // orders consume the step in which they finish.
        if (!std::holds_alternative<WaitUntilEnemyWithin>(order)) return;
    }
}

void update_morale(UnitState& u, const UnitSummary& self, std::span<const UnitSummary> all, double time,
                   const CommandParams& p) {
    if (!u.alive()) return;
    if (self.strength < kDestroyedStrength) {
        u.status = UnitStatus::Destroyed;
        u.command.status_time = time;
        return;
    }
    const double losses = std::max(0.0, 1.0 - self.strength / u.initial_strength);

    const UnitSummary* seen = nearest_visible_enemy(self, all, p.sector);
    if (seen && seen->retreating && u.command.sighted_retreats.insert(seen->id).second) {
        u.command.morale_bonus += p.morale_increment;
    }
    u.morale = u.initial_morale - losses / p.reference_losses + u.command.morale_bonus;

    if (u.status == UnitStatus::Retreating) return;
    if (u.morale < 0.0) {
        u.status = UnitStatus::Retreating;
        u.command.status_time = time;
        u.command.pursuit_target = -1;
        return;
    }
    if (u.status == UnitStatus::Active && u.side == p.pressing_side && u.morale > 0.0 && seen &&
        seen->retreating) {
        u.status = UnitStatus::Pressing;
        u.command.status_time = time;
        u.command.pursuit_target = seen->id;
    }
}

OrderList standard_order_list(const OrderPlan& plan) {
    OrderList list;
    switch (plan.role) {
        case OrderRole::Assault:
            list.emplace_back(RotateTo{plan.march_bearing});
            for (const Vec2& w : plan.waypoints) list.emplace_back(TranslateTo{w});
            list.emplace_back(FaceNearestEnemy{});
            break;
        case OrderRole::Defend:
            list.emplace_back(WaitUntilEnemyWithin{plan.trigger_range});
            list.emplace_back(RotateTo{plan.bearing});
            list.emplace_back(TranslateTo{plan.position});
            list.emplace_back(FaceNearestEnemy{});
            break;
        case OrderRole::Flank:
            list.emplace_back(WaitUntilEnemyWithin{plan.trigger_range});
            list.emplace_back(Flank{plan.position, plan.bearing});
            list.emplace_back(FaceNearestEnemy{});
            break;
    }
    return list;
}

}  // namespace bfm
