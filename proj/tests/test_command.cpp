#include <doctest.h>

#include <cmath>

#include "bfm/command.hpp"
#include "bfm/scenario.hpp"

using namespace bfm;

namespace {

UnitSummary summary(int id, Side side, Vec2 at, double bearing = 0.0, double strength = 1000.0) {
    UnitSummary s;
    s.id = id;
    s.side = side;
    s.centroid = at;
    s.bearing = bearing;
    s.strength = strength;
    return s;
}

UnitState unit(int id, Side side, double morale0, double strength0 = 1000.0) {
    UnitState u;
    u.id = id;
    u.side = side;
    u.initial_morale = u.morale = morale0;
    u.initial_strength = strength0;
    u.goal.y1 = u.goal.y2 = {0, 0};
    return u;
}

}  // namespace

TEST_CASE("morale arithmetic and retreat threshold") {
    CommandParams p;
    UnitState a = unit(1, Side::Red, 1.0);
    update_morale(a, summary(1, Side::Red, {0, 0}, 0.0, 650.0), {}, 10.0, p);
    CHECK(a.morale == doctest::Approx(0.0).epsilon(1e-12));

    UnitState b = unit(2, Side::Red, 0.7);
    update_morale(b, summary(2, Side::Red, {0, 0}, 0.0, 1000.0), {}, 10.0, p);
    CHECK(b.morale == 0.7);
    CHECK(b.status == UnitStatus::Active);

    UnitState c = unit(3, Side::Red, 0.7);
    update_morale(c, summary(3, Side::Red, {0, 0}, 0.0, 720.0), {}, 10.0, p);
    CHECK(c.morale == doctest::Approx(-0.1).epsilon(1e-12));
    CHECK(c.status == UnitStatus::Retreating);
    CHECK(c.command.status_time == 10.0);

    UnitState d = unit(4, Side::Blue, 1.0);
    update_morale(d, summary(4, Side::Blue, {0, 0}, 0.0, 0.5), {}, 3.0, p);
    CHECK(d.status == UnitStatus::Destroyed);
}

TEST_CASE("sighting bonus is granted once per retreating enemy") {
    CommandParams p;
    UnitState u = unit(1, Side::Blue, 0.5);
    const UnitSummary self = summary(1, Side::Blue, {0, 0}, 0.0, 1000.0);
    std::vector<UnitSummary> all{self, summary(7, Side::Red, {200, 0})};
    all[1].retreating = true;
    for (int k = 0; k < 5; ++k) update_morale(u, self, all, k, p);
    CHECK(u.morale == doctest::Approx(1.0));
    CHECK(u.status == UnitStatus::Active);  // only Red presses

    // a retreating enemy behind the unit is not seen
    UnitState v = unit(2, Side::Blue, 0.5);
    const UnitSummary vs = summary(2, Side::Blue, {0, 0}, kPi, 1000.0);
    update_morale(v, vs, all, 0.0, p);
    CHECK(v.morale == 0.5);
}

TEST_CASE("red presses a visible retreating enemy") {
    CommandParams p;
    UnitState u = unit(1, Side::Red, 0.4);
    const UnitSummary self = summary(1, Side::Red, {0, 0}, 0.0, 1000.0);
    std::vector<UnitSummary> all{self, summary(9, Side::Blue, {300, 20})};
    update_morale(u, self, all, 1.0, p);
    CHECK(u.status == UnitStatus::Active);
    all[1].retreating = true;
    update_morale(u, self, all, 2.0, p);
    CHECK(u.status == UnitStatus::Pressing);
    CHECK(u.command.pursuit_target == 9);

    u.march_speed = 0.6;
    advance_orders(u, self, all, 1.0, p);
    CHECK(u.goal.y2.x > 0.0);
}

TEST_CASE("retreat is sticky and walks the goal home") {
    CommandParams p;
    UnitState u = unit(1, Side::Red, 0.1);
    u.goal.y1 = {0, 0};
    u.goal.y2 = {30, 0};
    u.march_speed = 0.6;
    const UnitSummary hurt = summary(1, Side::Red, {30, 0}, 0.0, 800.0);
    update_morale(u, hurt, {}, 0.0, p);
    REQUIRE(u.status == UnitStatus::Retreating);
    std::vector<UnitSummary> all{hurt, summary(5, Side::Blue, {300, 0})};
    all[1].retreating = true;
    update_morale(u, hurt, all, 1.0, p);  // bonus lifts morale above 0 ...
    CHECK(u.morale > 0.0);
    CHECK(u.status == UnitStatus::Retreating);  // ... but the unit keeps going
    for (int k = 0; k < 200; ++k) advance_orders(u, hurt, all, 1.0, p);
    CHECK(u.goal.y2 == Vec2{0, 0});
}

TEST_CASE("translate 600 m at march speed") {
    CommandParams p;
    GoalTransform g;
    int steps = 0;
    while (translate_goal(g, {600, 0}, 0.6, p.translate_taper, p.arrive_tolerance, 1.0) > 0.0) ++steps;
    ++steps;
    // Continuous-time oracle: dd/dt = -0.6 tanh(d / 10) from 600 m to 0.5 m.
    const double oracle = (10.0 / 0.6) * std::log(std::sinh(60.0) / std::sinh(0.05));
    MESSAGE("steps " << steps << " oracle " << oracle);
    CHECK(std::abs(steps - oracle) < 3.0);
    CHECK(g.y2 == Vec2{600, 0});
}

TEST_CASE("wait and face-nearest-enemy orders") {
    CommandParams p;
    UnitState u = unit(1, Side::Blue, 1.0);
    u.march_speed = 0.6;
    u.initial_bearing = kPi / 2;  // north
    u.orders = {WaitUntilEnemyWithin{500.0}, FaceNearestEnemy{}};
    UnitSummary self = summary(1, Side::Blue, {0, 0}, kPi / 2);
    std::vector<UnitSummary> far{self, summary(2, Side::Red, {800, 0})};
    advance_orders(u, self, far, 1.0, p);
    CHECK(u.command.next_order == 0);
    CHECK(u.goal.theta == 0.0);

    std::vector<UnitSummary> near{self, summary(2, Side::Red, {400, 0})};
    int steps = 0;
    while (u.command.next_order < u.orders.size() && steps < 1000) {
        advance_orders(u, self, near, 1.0, p);
        ++steps;
    }
    CHECK(u.command.next_order == 2);
    CHECK(std::abs(wrap_angle(u.bearing())) < deg_to_rad(0.5));
}

TEST_CASE("standard order lists") {
    OrderPlan red;
    red.role = OrderRole::Assault;
    red.waypoints = {{1, 1}, {2, 2}};
    const OrderList a = standard_order_list(red);
    REQUIRE(a.size() == 4);
    CHECK(std::string(order_name(a[0])) == "rotate");
    CHECK(std::string(order_name(a[1])) == "translate");
    CHECK(std::string(order_name(a[3])) == "face_enemy");

    OrderPlan blue;
    blue.role = OrderRole::Defend;
    const OrderList b = standard_order_list(blue);
    REQUIRE(std::holds_alternative<WaitUntilEnemyWithin>(b[0]));
    CHECK(std::get<WaitUntilEnemyWithin>(b[0]).range == 500.0);

    OrderPlan flank;
    flank.role = OrderRole::Flank;
    const OrderList f = standard_order_list(flank);
    REQUIRE(f.size() == 3);
    CHECK(std::holds_alternative<Flank>(f[1]));
}
