#include <doctest.h>

#include <cmath>

#include "bfm/error.hpp"
#include "bfm/units.hpp"
#include "support.hpp"

using namespace bfm;
using bfm::testing::block_unit;

TEST_CASE("formation fill") {
    const Grid g{64, 32, 8.0, {0, 0}};
    const UnitState u = init_unit(block_unit(1, Side::Red, {256, 128}, 200, 48, 1000), g, 5.6);
    CHECK(u.density.sum() * g.cell_area() == doctest::Approx(1000.0).epsilon(1e-3));
    CHECK(u.density(32, 16) == doctest::Approx(1000.0 / (200 * 48)).epsilon(1e-9));
    for (auto [i, j] : {std::pair{0, 0}, {5, 7}, {31, 16}, {63, 31}, {40, 2}}) {
        CHECK(u.xi_x(i, j) == g.center(i, j).x);
        CHECK(u.xi_y(i, j) == g.center(i, j).y);
    }
    const UnitSummary s = unit_summary(u, g);
    CHECK(s.strength == doctest::Approx(1000.0).epsilon(1e-12));
    CHECK(s.centroid.x == doctest::Approx(256.0).epsilon(1e-9));
    CHECK(s.centroid.y == doctest::Approx(128.0).epsilon(1e-9));
}

TEST_CASE("formation errors") {
    const Grid g{64, 32, 8.0, {0, 0}};
    CHECK_THROWS_AS(init_unit(block_unit(1, Side::Red, {256, 128}, 10, 10, 1000), g, 5.6), InputError);
    CHECK_THROWS_AS(init_unit(block_unit(1, Side::Red, {5000, 128}, 100, 40, 1000), g, 5.6), InputError);
    CHECK_THROWS_AS(init_unit(block_unit(1, Side::Red, {256, 128}, 0, 40, 1000), g, 5.6), InputError);
}

TEST_CASE("moments of point masses") {
    const Grid g{16, 16, 10.0, {-5, -5}};
    Field f(g, 0.0);
    f(0, 0) = 1.0;   // centre (0, 0)
    f(10, 0) = 1.0;  // centre (100, 0)
    const DensityMoments m = density_moments(f, g, {0, 16, 0, 16});
    CHECK(m.mass_x / m.mass == doctest::Approx(50.0));
    CHECK(m.mass_y / m.mass == doctest::Approx(0.0));
}

TEST_CASE("artillery obstacle density") {
    const Grid g{64, 64, 10.0, {-320, -320}};
    ArtilleryUnit a;
    a.position = {5, 5};  // centre of cell (32, 32)
    const Field f = artillery_density(a, g, 5.6);
    CHECK(f(32, 32) == doctest::Approx(0.56).epsilon(1e-15));
    CHECK(f(34, 32) == doctest::Approx(0.56 * std::exp(-1.0)).epsilon(1e-15));
    CHECK(f(52, 32) < 1e-40 * 5.6);
}
