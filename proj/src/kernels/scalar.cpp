#include "bfm/kernels.hpp"

namespace bfm::kernels {

namespace {

inline double harmonic(double a, double b) {
    const double p = 2.0 * a * b;
    return p > 0.0 ? p / (a + b) : 0.0;
}

void reconstruct(const double* qm1, const double* q0, const double* qp1, const double* qp2, double* left,
                 double* right, std::size_t n) {
    for (std::size_t k = 0; k < n; ++k) {
        const double a = q0[k] - qm1[k];
        const double b = qp1[k] - q0[k];
        const double c = qp2[k] - qp1[k];
        left[k] = q0[k] + 0.5 * harmonic(a, b);
        right[k] = qp1[k] - 0.5 * harmonic(b, c);
    }
}

void upwind_flux(const double* u, const double* left, const double* right, double* flux, std::size_t n) {
    for (std::size_t k = 0; k < n; ++k) flux[k] = u[k] * (u[k] > 0.0 ? left[k] : right[k]);
}

void upwind_difference(const double* u, const double* left_lo, const double* left_hi, const double* right_lo,
                       const double* right_hi, double* out, std::size_t n) {
    for (std::size_t k = 0; k < n; ++k) {
        out[k] = u[k] > 0.0 ? left_hi[k] - left_lo[k] : right_hi[k] - right_lo[k];
    }
}

void density_factor(const double* rho, double rho_m, double* out, std::size_t n) {
    for (std::size_t k = 0; k < n; ++k) {
        double q = rho[k] / rho_m;
        q = q < 0.0 ? 0.0 : (q > 1.0 ? 1.0 : q);
        const double q3 = q * q * q;
        out[k] = ((-6.0 * q + 15.0) * q - 10.0) * q3 + 1.0;
    }
}

void closein_rate(const double* rho, const double* weighted_enemy, double floor, double* out, std::size_t n) {
    for (std::size_t k = 0; k < n; ++k) {
        double t = rho[k] / floor;
        t = t < 0.0 ? 0.0 : (t > 1.0 ? 1.0 : t);
        out[k] = t * rho[k] * weighted_enemy[k];
    }
}

}  // namespace

const KernelTable& scalar() {
    static const KernelTable table{"scalar", reconstruct, upwind_flux, upwind_difference, density_factor,
                                   closein_rate};
    return table;
}

}  // namespace bfm::kernels
