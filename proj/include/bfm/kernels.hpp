#pragma once

#include <cstddef>
#include <string_view>

namespace bfm::kernels {

/// Row kernels for the field phase. Every variant must reproduce the scalar
/// reference bit for bit: no FMA contraction, identical operation order.
struct KernelTable {
    const char* name;

    /// Limited face values between cell k and k+1 from four consecutive
    /// cells (k-1, k, k+1, k+2). `left` is the reconstruction from cell k,
    /// `right` from cell k+1. Harmonic limiter: 2ab/(a+b) if ab > 0, else 0.
    void (*reconstruct)(const double* qm1, const double* q0, const double* qp1, const double* qp2,
                        double* left, double* right, std::size_t n);

    /// flux[k] = u[k] * (u[k] > 0 ? left[k] : right[k]).
    void (*upwind_flux)(const double* u, const double* left, const double* right, double* flux, std::size_t n);

    /// Non-conservative upwind difference from the face values on the low
    /// and high side of each cell: out[k] = u[k] > 0 ? left_hi[k] - left_lo[k]
    /// : right_hi[k] - right_lo[k].
    void (*upwind_difference)(const double* u, const double* left_lo, const double* left_hi,
                              const double* right_lo, const double* right_hi, double* out, std::size_t n);

    /// Quintic crowd-density factor for q = rho / rho_m.
    void (*density_factor)(const double* rho, double rho_m, double* out, std::size_t n);

    /// Close-in loss rate clamp(rho / floor, 0, 1) * rho * weighted_enemy.
    void (*closein_rate)(const double* rho, const double* weighted_enemy, double floor, double* out,
                         std::size_t n);
};

const KernelTable& scalar();
/// nullptr when the AVX2 variant was not built or the CPU lacks AVX2.
const KernelTable* avx2();
/// Best available table; BFM_KERNELS=scalar in the environment forces the
/// reference path.
const KernelTable& active();
const KernelTable* by_name(std::string_view name);

}  // namespace bfm::kernels
