// Built with -mavx2 (no -mfma) so every lane matches the scalar reference.
#include "bfm/kernels.hpp"

#if defined(__AVX2__)
#include <immintrin.h>

namespace bfm::kernels {

namespace {

inline __m256d harmonic4(__m256d a, __m256d b) {
    const __m256d zero = _mm256_setzero_pd();
    const __m256d p = _mm256_mul_pd(_mm256_mul_pd(_mm256_set1_pd(2.0), a), b);
    const __m256d mask = _mm256_cmp_pd(p, zero, _CMP_GT_OQ);
    const __m256d q = _mm256_div_pd(p, _mm256_add_pd(a, b));
    return _mm256_blendv_pd(zero, q, mask);
}

inline double harmonic1(double a, double b) {
    const double p = 2.0 * a * b;
    return p > 0.0 ? p / (a + b) : 0.0;
}

void reconstruct(const double* qm1, const double* q0, const double* qp1, const double* qp2, double* left,
                 double* right, std::size_t n) {
    const __m256d half = _mm256_set1_pd(0.5);
    std::size_t k = 0;
    for (; k + 4 <= n; k += 4) {
        const __m256d vm1 = _mm256_loadu_pd(qm1 + k);
        const __m256d v0 = _mm256_loadu_pd(q0 + k);
        const __m256d vp1 = _mm256_loadu_pd(qp1 + k);
        const __m256d vp2 = _mm256_loadu_pd(qp2 + k);
        const __m256d a = _mm256_sub_pd(v0, vm1);
        const __m256d b = _mm256_sub_pd(vp1, v0);
        const __m256d c = _mm256_sub_pd(vp2, vp1);
        _mm256_storeu_pd(left + k, _mm256_add_pd(v0, _mm256_mul_pd(half, harmonic4(a, b))));
        _mm256_storeu_pd(right + k, _mm256_sub_pd(vp1, _mm256_mul_pd(half, harmonic4(b, c))));
    }
    for (; k < n; ++k) {
        const double a = q0[k] - qm1[k];
        const double b = qp1[k] - q0[k];
        const double c = qp2[k] - qp1[k];
        left[k] = q0[k] + 0.5 * harmonic1(a, b);
        right[k] = qp1[k] - 0.5 * harmonic1(b, c);
    }
}

void upwind_flux(const double* u, const double* left, const double* right, double* flux, std::size_t n) {
    const __m256d zero = _mm256_setzero_pd();
    std::size_t k = 0;
    for (; k + 4 <= n; k += 4) {
        const __m256d vu = _mm256_loadu_pd(u + k);
        const __m256d mask = _mm256_cmp_pd(vu, zero, _CMP_GT_OQ);
        const __m256d face = _mm256_blendv_pd(_mm256_loadu_pd(right + k), _mm256_loadu_pd(left + k), mask);
        _mm256_storeu_pd(flux + k, _mm256_mul_pd(vu, face));
    }
    for (; k < n; ++k) flux[k] = u[k] * (u[k] > 0.0 ? left[k] : right[k]);
}

void upwind_difference(const double* u, const double* left_lo, const double* left_hi, const double* right_lo,
                       const double* right_hi, double* out, std::size_t n) {
    const __m256d zero = _mm256_setzero_pd();
    std::size_t k = 0;
    for (; k + 4 <= n; k += 4) {
        const __m256d mask = _mm256_cmp_pd(_mm256_loadu_pd(u + k), zero, _CMP_GT_OQ);
        const __m256d dl = _mm256_sub_pd(_mm256_loadu_pd(left_hi + k), _mm256_loadu_pd(left_lo + k));
        const __m256d dr = _mm256_sub_pd(_mm256_loadu_pd(right_hi + k), _mm256_loadu_pd(right_lo + k));
        _mm256_storeu_pd(out + k, _mm256_blendv_pd(dr, dl, mask));
    }
    for (; k < n; ++k) out[k] = u[k] > 0.0 ? left_hi[k] - left_lo[k] : right_hi[k] - right_lo[k];
}

void density_factor(const double* rho, double rho_m, double* out, std::size_t n) {
    const __m256d vm = _mm256_set1_pd(rho_m);
    const __m256d zero = _mm256_setzero_pd();
    const __m256d one = _mm256_set1_pd(1.0);
    const __m256d c6 = _mm256_set1_pd(-6.0);
    const __m256d c15 = _mm256_set1_pd(15.0);
    const __m256d c10 = _mm256_set1_pd(10.0);
    std::size_t k = 0;
    for (; k + 4 <= n; k += 4) {
        __m256d q = _mm256_div_pd(_mm256_loadu_pd(rho + k), vm);
        q = _mm256_min_pd(_mm256_max_pd(q, zero), one);
        const __m256d q3 = _mm256_mul_pd(_mm256_mul_pd(q, q), q);
        __m256d poly = _mm256_add_pd(_mm256_mul_pd(c6, q), c15);
        poly = _mm256_sub_pd(_mm256_mul_pd(poly, q), c10);
        _mm256_storeu_pd(out + k, _mm256_add_pd(_mm256_mul_pd(poly, q3), one));
    }
    for (; k < n; ++k) {
        double q = rho[k] / rho_m;
        q = q < 0.0 ? 0.0 : (q > 1.0 ? 1.0 : q);
        const double q3 = q * q * q;
        out[k] = ((-6.0 * q + 15.0) * q - 10.0) * q3 + 1.0;
    }
}

void closein_rate(const double* rho, const double* weighted_enemy, double floor, double* out, std::size_t n) {
    const __m256d vf = _mm256_set1_pd(floor);
    const __m256d zero = _mm256_setzero_pd();
    const __m256d one = _mm256_set1_pd(1.0);
    std::size_t k = 0;
    for (; k + 4 <= n; k += 4) {
        const __m256d r = _mm256_loadu_pd(rho + k);
        __m256d t = _mm256_div_pd(r, vf);
        t = _mm256_min_pd(_mm256_max_pd(t, zero), one);
        _mm256_storeu_pd(out + k, _mm256_mul_pd(_mm256_mul_pd(t, r), _mm256_loadu_pd(weighted_enemy + k)));
    }
    for (; k < n; ++k) {
        double t = rho[k] / floor;
        t = t < 0.0 ? 0.0 : (t > 1.0 ? 1.0 : t);
        out[k] = t * rho[k] * weighted_enemy[k];
    }
}

}  // namespace

const KernelTable* avx2_table() {
    static const KernelTable table{"avx2", reconstruct, upwind_flux, upwind_difference, density_factor,
                                   closein_rate};
    return &table;
}

}  // namespace bfm::kernels

#else

namespace bfm::kernels {
const KernelTable* avx2_table() { return nullptr; }
}  // namespace bfm::kernels

#endif
