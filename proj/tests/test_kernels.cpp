#include <doctest.h>

#include <cstring>
#include <random>
#include <vector>

#include "bfm/kernels.hpp"

using namespace bfm;

namespace {

std::vector<double> noisy(std::mt19937_64& gen, std::size_t n, double lo, double hi) {
    std::uniform_real_distribution<double> d(lo, hi);
    std::vector<double> v(n);
    for (auto& x : v) x = d(gen);
    // sprinkle exact zeros, ties and sign changes the limiter branches on
    for (std::size_t k = 0; k < n; k += 7) v[k] = 0.0;
    for (std::size_t k = 3; k + 1 < n; k += 11) v[k + 1] = v[k];
    return v;
}

bool same_bits(const std::vector<double>& a, const std::vector<double>& b) {
    return a.size() == b.size() && std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

}  // namespace

TEST_CASE("simd kernels reproduce the scalar reference bit for bit") {
    const kernels::KernelTable* simd = kernels::avx2();
    if (!simd) {
        MESSAGE("AVX2 kernels unavailable on this machine; nothing to compare");
        return;
    }
    const kernels::KernelTable& ref = kernels::scalar();
    std::mt19937_64 gen(2024);
    for (std::size_t n : {1u, 3u, 4u, 5u, 8u, 13u, 64u, 257u}) {
        CAPTURE(n);
        const auto q = noisy(gen, n + 3, -1.0, 2.0);
        std::vector<double> l0(n), r0(n), l1(n), r1(n);
        ref.reconstruct(q.data(), q.data() + 1, q.data() + 2, q.data() + 3, l0.data(), r0.data(), n);
        simd->reconstruct(q.data(), q.data() + 1, q.data() + 2, q.data() + 3, l1.data(), r1.data(), n);
        CHECK(same_bits(l0, l1));
        CHECK(same_bits(r0, r1));

        const auto u = noisy(gen, n, -3.0, 3.0);
        std::vector<double> f0(n), f1(n);
        ref.upwind_flux(u.data(), l0.data(), r0.data(), f0.data(), n);
        simd->upwind_flux(u.data(), l0.data(), r0.data(), f1.data(), n);
        CHECK(same_bits(f0, f1));

        const auto a = noisy(gen, n, -1, 1), b = noisy(gen, n, -1, 1), c = noisy(gen, n, -1, 1),
                   d = noisy(gen, n, -1, 1);
        std::vector<double> o0(n), o1(n);
        ref.upwind_difference(u.data(), a.data(), b.data(), c.data(), d.data(), o0.data(), n);
        simd->upwind_difference(u.data(), a.data(), b.data(), c.data(), d.data(), o1.data(), n);
        CHECK(same_bits(o0, o1));

        const auto rho = noisy(gen, n, -0.5, 7.0);
        std::vector<double> g0(n), g1(n);
        ref.density_factor(rho.data(), 5.6, g0.data(), n);
        simd->density_factor(rho.data(), 5.6, g1.data(), n);
        CHECK(same_bits(g0, g1));

        const auto e = noisy(gen, n, 0.0, 0.5);
        const auto small = noisy(gen, n, 0.0, 1e-3);
        std::vector<double> c0(n), c1(n);
        ref.closein_rate(small.data(), e.data(), 5.6e-4, c0.data(), n);
        simd->closein_rate(small.data(), e.data(), 5.6e-4, c1.data(), n);
        CHECK(same_bits(c0, c1));
    }
}

TEST_CASE("scalar limiter values") {
    const auto& k = kernels::scalar();
    // cells 0, 1, 3, 4: slopes 1 and 2 around cell 1 -> harmonic mean 4/3
    const double qm1 = 0.0, q0 = 1.0, qp1 = 3.0, qp2 = 4.0;
    double left = 0, right = 0;
    k.reconstruct(&qm1, &q0, &qp1, &qp2, &left, &right, 1);
    CHECK(left == doctest::Approx(1.0 + 0.5 * 4.0 / 3.0));
    CHECK(right == doctest::Approx(3.0 - 0.5 * 4.0 / 3.0));
    // an extremum clips the slope to zero
    const double e0 = 0.0, e1 = 2.0, e2 = 1.0, e3 = 1.0;
    k.reconstruct(&e0, &e1, &e2, &e3, &left, &right, 1);
    CHECK(left == 2.0);
    CHECK(right == 1.0);

    CHECK(kernels::by_name("scalar") == &kernels::scalar());
    CHECK(kernels::by_name("nope") == nullptr);
}
