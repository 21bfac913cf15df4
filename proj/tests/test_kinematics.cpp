#include <doctest.h>

#include <cmath>

#include "bfm/kinematics.hpp"
#include "bfm/terrain.hpp"
#include "support.hpp"

using namespace bfm;

TEST_CASE("crowd factor") {
    const double rm = 5.6;
    CHECK(density_factor(0.0, rm) == 1.0);
    CHECK(density_factor(rm, rm) == 0.0);
    CHECK(density_factor(2.0 * rm, rm) == 0.0);
    CHECK(density_factor(rm / 2, rm) == 0.5);
    double prev = 1.0;
    for (int k = 0; k <= 100; ++k) {
        const double f = density_factor(rm * k / 100.0, rm);
        CHECK(f <= prev);
        CHECK(f >= 0.0);
        prev = f;
    }
}

TEST_CASE("slope factor") {
    CHECK(slope_factor(0.0) == 1.0);
    CHECK(slope_factor(-0.2) == 1.0);
    CHECK(slope_factor(0.1) == doctest::Approx(1.0 / 1.35).epsilon(1e-15));
}

TEST_CASE("goal proximity factor") {
    const double ds = 8.0;
    CHECK(goal_proximity_factor(0.0, ds) <= 1e-4);
    CHECK(goal_proximity_factor(0.0, ds) >= 0.0);
    CHECK(goal_proximity_factor(1e6, ds) == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(goal_proximity_factor(40.0 * ds, ds) == doctest::Approx(1.5).epsilon(1e-12));
    CHECK(goal_proximity_factor(15.0 * ds, ds) == doctest::Approx(1.0).epsilon(1e-3));
    for (int k = 0; k < 200; ++k) CHECK(goal_proximity_factor(k * 5.0, ds) <= 2.0);
}

TEST_CASE("goal transform") {
    GoalTransform g;
    g.y1 = {3.0, -2.0};
    g.y2 = g.y1;
    const Vec2 same = goal_position({7.5, 1.25}, g);
    CHECK(same.x == doctest::Approx(7.5));
    CHECK(same.y == doctest::Approx(1.25));

    GoalTransform q;
    q.theta = kPi / 2;
    const Vec2 r = goal_position({1.0, 0.0}, q);
    CHECK(r.x == doctest::Approx(0.0));
    CHECK(r.y == doctest::Approx(1.0));

    GoalTransform s;
    s.a = 2.0;
    s.y2 = {5.0, 0.0};
    const Vec2 t = goal_position({1.0, 1.0}, s);
    CHECK(t.x == doctest::Approx(7.0));
    CHECK(t.y == doctest::Approx(1.0));
}

TEST_CASE("walking direction") {
    const Vec2 e = walking_direction({0, 0}, {10, 0});
    CHECK(e.x == 1.0);
    CHECK(e.y == 0.0);
    CHECK(walking_direction({2, 2}, {2, 2}) == Vec2{});
    const Vec2 d = walking_direction({0, 0}, {3, 4});
    CHECK(d.x == doctest::Approx(0.6));
    CHECK(d.y == doctest::Approx(0.8));
}

namespace {

struct Walker {
    std::shared_ptr<TerrainMap> map;
    Field rho, xi_x, xi_y, total;
    Walker(double overlay) {
        auto base = bfm::testing::flat_terrain(16, 16, 8.0);
        map = std::make_shared<TerrainMap>(*base);
        map->overlay.fill(overlay);
        rho = Field(map->grid, 0.0);
        total = Field(map->grid, 0.0);
        xi_x = Field(map->grid);
        xi_y = Field(map->grid);
        for (int j = 0; j < 16; ++j)
            for (int i = 0; i < 16; ++i) {
                xi_x(i, j) = map->grid.center(i, j).x;
                xi_y(i, j) = map->grid.center(i, j).y;
            }
    }
};

}  // namespace

TEST_CASE("velocity field speeds") {
    KinematicsParams p;
    GoalTransform far;
    far.y2 = {5000.0, 0.0};  // every slot far east
    Walker open(1.0);
    const VelocityField v = velocity_field(open.rho, open.xi_x, open.xi_y, open.total, *open.map, far, p);
    CHECK(v.ux(5, 5) == doctest::Approx(2.8).epsilon(1e-12));
    CHECK(v.uy(5, 5) == doctest::Approx(0.0));

    GoalTransform mid;
    mid.y2 = {120.0, 0.0};  // 15 cells: h = 1 to within 1e-3
    Walker woods(0.5);
    const VelocityField w = velocity_field(woods.rho, woods.xi_x, woods.xi_y, woods.total, *woods.map, mid, p);
    CHECK(norm({w.ux(5, 5), w.uy(5, 5)}) == doctest::Approx(0.7).epsilon(1e-3));
    KinematicsParams off = p;
    off.terrain_effects = false;
    const VelocityField wo = velocity_field(woods.rho, woods.xi_x, woods.xi_y, woods.total, *woods.map, mid, off);
    CHECK(norm({wo.ux(5, 5), wo.uy(5, 5)}) == doctest::Approx(1.4).epsilon(1e-3));

    Walker jam(1.0);
    jam.total(7, 7) = p.max_density;
    const VelocityField j = velocity_field(jam.rho, jam.xi_x, jam.xi_y, jam.total, *jam.map, far, p);
    CHECK(j.ux(7, 7) == 0.0);
    CHECK(j.uy(7, 7) == 0.0);
    for (std::size_t k = 0; k < j.ux.size(); ++k) CHECK(norm({j.ux[k], j.uy[k]}) <= 2.0 * p.max_speed + 1e-12);
}

TEST_CASE("uphill walking is slowed, downhill is not") {
    KinematicsParams p;
    Walker hill(1.0);
    for (int j = 0; j < 16; ++j)
        for (int i = 0; i < 16; ++i) hill.map->elevation(i, j) = 0.1 * hill.map->grid.center(i, j).x;
    GoalTransform east, west;
    east.y2 = {5000.0, 0.0};
    west.y2 = {-5000.0, 0.0};
    const VelocityField up = velocity_field(hill.rho, hill.xi_x, hill.xi_y, hill.total, *hill.map, east, p);
    const VelocityField down = velocity_field(hill.rho, hill.xi_x, hill.xi_y, hill.total, *hill.map, west, p);
    CHECK(up.ux(8, 8) == doctest::Approx(2.8 / 1.35).epsilon(1e-12));
    CHECK(down.ux(8, 8) == doctest::Approx(-2.8).epsilon(1e-12));
}

TEST_CASE("velocity field rotates with the frame") {
    KinematicsParams p;
    Walker a(1.0);
    // Rotate the whole set-up a quarter turn about the map centre: the
    // identity field is again the cell centres and both goal anchors turn.
    const Vec2 c{64.0, 64.0};
    auto turn = [&](Vec2 q) { return Vec2{c.x - (q.y - c.y), c.y + (q.x - c.x)}; };
    GoalTransform g;
    g.y1 = {50.0, 70.0};
    g.y2 = {30.0, 95.0};
    g.theta = 0.3;
    GoalTransform gr = g;
    gr.y1 = turn(g.y1);
    gr.y2 = turn(g.y2);
    const VelocityField v = velocity_field(a.rho, a.xi_x, a.xi_y, a.total, *a.map, g, p);
    const VelocityField w = velocity_field(a.rho, a.xi_x, a.xi_y, a.total, *a.map, gr, p);
    for (int j = 0; j < 16; ++j)
        for (int i = 0; i < 16; ++i) {
            // (i, j) maps to (15 - j, i) under a quarter turn about the centre.
            const int ri = 15 - j, rj = i;
            CHECK(w.ux(ri, rj) == doctest::Approx(-v.uy(i, j)).epsilon(1e-9));
            CHECK(w.uy(ri, rj) == doctest::Approx(v.ux(i, j)).epsilon(1e-9));
        }
}
