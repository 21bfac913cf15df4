#include <doctest.h>

#include <cmath>

#include "bfm/advection.hpp"
#include "bfm/error.hpp"

using namespace bfm;

namespace {

constexpr int kRows = 4;

Field row_field(int nx, double (*profile)(double), double ds) {
    Field q(nx, kRows);
    for (int j = 0; j < kRows; ++j)
        for (int i = 0; i < nx; ++i) q(i, j) = profile((i + 0.5) * ds);
    return q;
}

double square(double x) { return x > 100.0 && x < 180.0 ? 1.0 : 0.0; }
double bump(double x) { return std::exp(-0.5 * std::pow((x - 150.0) / 20.0, 2)); }

double centroid(const Field& q, double ds) {
    double m = 0, mx = 0;
    for (int i = 0; i < q.nx(); ++i) {
        m += q(i, 0);
        mx += q(i, 0) * (i + 0.5) * ds;
    }
    return mx / m;
}

// L1 error against the exact translated bump after `t` seconds at speed v.
double bump_error(int nx, double ds, double v, double t, double cfl) {
    Field q = row_field(nx, bump, ds);
    const Field vx(nx, kRows, v), vy(nx, kRows, 0.0);
    const double dt = cfl * ds / v;
    const int steps = static_cast<int>(std::lround(t / dt));
    for (int n = 0; n < steps; ++n) q = advect(q, vx, vy, dt, ds, AdvectionForm::Conservative);
    double err = 0.0;
    for (int i = 0; i < nx; ++i) err += std::abs(q(i, 1) - bump((i + 0.5) * ds - v * steps * dt)) * ds;
    return err;
}

}  // namespace

TEST_CASE("uniform field is a fixed point of both forms") {
    const Field q(32, 16, 0.3);
    Field vx(32, 16), vy(32, 16);
    for (std::size_t k = 0; k < vx.size(); ++k) {
        vx[k] = 0.5 * std::sin(0.1 * k);
        vy[k] = -0.4 * std::cos(0.07 * k);
    }
    CHECK(advect(q, vx, vy, 1.0, 8.0, AdvectionForm::Advective) == q);
    const Field c = advect(q, Field(32, 16, 1.0), Field(32, 16, -0.5), 1.0, 8.0, AdvectionForm::Conservative);
    // the closed map edges pile mass up; away from them nothing moves
    for (int j = 3; j < 13; ++j)
        for (int i = 3; i < 29; ++i) CHECK(c(i, j) == doctest::Approx(0.3).epsilon(1e-14));
}

TEST_CASE("square pulse translates, stays monotone and keeps its mass") {
    const double ds = 8.0, v = 1.4, dt = 1.0;
    Field q = row_field(100, square, ds);
    const Field vx(100, kRows, v), vy(100, kRows, 0.0);
    const double m0 = q.sum();
    const double c0 = centroid(q, ds);
    for (int n = 1; n <= 200; ++n) {
        const double before = q.sum();
        q = advect(q, vx, vy, dt, ds, AdvectionForm::Conservative);
        REQUIRE(std::abs(q.sum() - before) <= 1e-10 * before);
        REQUIRE(q.min() >= -1e-14);
        REQUIRE(q.max() <= 1.0 + 1e-14);
    }
    CHECK(q.sum() == doctest::Approx(m0).epsilon(1e-10));
    CHECK(centroid(q, ds) - c0 == doctest::Approx(200 * v * dt).epsilon(1e-3));
    // one rising and one falling side: no new extrema on a 1-D slice
    int turns = 0;
    for (int i = 1; i + 1 < q.nx(); ++i) {
        const double a = q(i, 0) - q(i - 1, 0), b = q(i + 1, 0) - q(i, 0);
        if (a > 1e-15 && b < -1e-15) ++turns;
    }
    CHECK(turns <= 1);
}

TEST_CASE("monotone ramp stays monotone") {
    Field q(64, kRows);
    for (int j = 0; j < kRows; ++j)
        for (int i = 0; i < 64; ++i) q(i, j) = i < 20 ? 0.0 : (i < 30 ? (i - 20) / 10.0 : 1.0);
    const Field vx(64, kRows, -2.0), vy(64, kRows, 0.0);
    for (int n = 0; n < 10; ++n) q = advect(q, vx, vy, 1.0, 8.0, AdvectionForm::Advective);
    for (int i = 1; i < 64; ++i) CHECK(q(i, 2) >= q(i - 1, 2));
}

TEST_CASE("smooth profile converges at second order") {
    // 10 and 20 cells per standard deviation of the bump
    const double e1 = bump_error(200, 2.0, 1.0, 100.0, 0.4);
    const double e2 = bump_error(400, 1.0, 1.0, 100.0, 0.4);
    const double order = std::log2(e1 / e2);
    MESSAGE("L1 errors " << e1 << " " << e2 << " order " << order);
    CHECK(order >= 1.8);
}

TEST_CASE("CFL violation is reported with its location") {
    Field vx(16, 16, 0.0), vy(16, 16, 0.0);
    vy(3, 5) = 9.0;
    try {
        advect(Field(16, 16, 1.0), vx, vy, 1.0, 8.0, AdvectionForm::Conservative);
        FAIL("expected CflError");
    } catch (const CflError& e) {
        CHECK(std::string(e.what()).find("(3, 5)") != std::string::npos);
    }
}

TEST_CASE("boundary taper") {
    CHECK(boundary_ramp(0.0, 10.0) == 0.0);
    CHECK(boundary_ramp(5.0, 10.0) == doctest::Approx(0.5));
    CHECK(boundary_ramp(10.0, 10.0) == 1.0);
    CHECK(boundary_ramp(30.0, 10.0) == 1.0);

    const Grid g{100, 100, 8.0, {0, 0}};
    Field vx(g, 1.0), vy(g, 1.0);
    boundary_taper(vx, vy, g, 0.02);  // band = 16 m = two cells
    CHECK(vx(0, 50) == 0.0);
    CHECK(vx(99, 50) == 0.0);
    CHECK(vy(50, 0) == 0.0);
    CHECK(vx(1, 50) == doctest::Approx(0.5));
    CHECK(vx(3, 50) == 1.0);
    // tangential components are left alone
    CHECK(vy(0, 50) == 1.0);
    CHECK(vx(50, 0) == 1.0);
}
