#include "bfm/advection.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "bfm/error.hpp"

namespace bfm {

void TransportScratch::reserve(int w, int h) {
    const std::size_t nx = static_cast<std::size_t>(w) + 1;
    const std::size_t ny = (static_cast<std::size_t>(h) + 1) * static_cast<std::size_t>(w);
    if (left.size() < nx) {
        left.resize(nx);
        right.resize(nx);
        flux.resize(nx);
    }
    if (left_y.size() < ny) {
        left_y.resize(ny);
        right_y.resize(ny);
        flux_y.resize(ny);
    }
    if (dx.size() < static_cast<std::size_t>(w)) {
        dx.resize(w);
        dy.resize(w);
    }
}

namespace {

// Face values on the h + 1 rows of y-faces; face row g sits between block
// rows g - 1 and g.
void reconstruct_y(const kernels::KernelTable& k, const Block& q, TransportScratch& s) {
    const std::size_t w = static_cast<std::size_t>(q.w);
    for (int g = 0; g <= q.h; ++g) {
        k.reconstruct(q.ptr(0, g - 2), q.ptr(0, g - 1), q.ptr(0, g), q.ptr(0, g + 1), s.left_y.data() + g * w,
                      s.right_y.data() + g * w, w);
    }
}

}  // namespace

void conservative_rate(const kernels::KernelTable& k, const Block& q, const double* face_u, const double* face_v,
                       double inv_ds, double* out, TransportScratch& s) {
    const int w = q.w;
    const int h = q.h;
    s.reserve(w, h);
    const std::size_t nf = static_cast<std::size_t>(w) + 1;
    for (int r = 0; r < h; ++r) {
        // x-face f lies between block cells f - 1 and f
        const double* base = q.ptr(-2, r);
        k.reconstruct(base, base + 1, base + 2, base + 3, s.left.data(), s.right.data(), nf);
        k.upwind_flux(face_u + r * nf, s.left.data(), s.right.data(), s.flux.data(), nf);
        double* o = out + static_cast<std::size_t>(r) * w;
        for (int i = 0; i < w; ++i) o[i] = s.flux[i + 1] - s.flux[i];
    }
    reconstruct_y(k, q, s);
    const std::size_t uw = static_cast<std::size_t>(w);
    for (int g = 0; g <= h; ++g) {
        k.upwind_flux(face_v + g * uw, s.left_y.data() + g * uw, s.right_y.data() + g * uw, s.flux_y.data() + g * uw,
                      uw);
    }
    for (int r = 0; r < h; ++r) {
        double* o = out + r * uw;
        const double* lo = s.flux_y.data() + r * uw;
        const double* hi = lo + uw;
        for (int i = 0; i < w; ++i) o[i] = -(o[i] + (hi[i] - lo[i])) * inv_ds;
    }
}

void advective_rate(const kernels::KernelTable& k, const Block& q, const double* cell_u, const double* cell_v,
                    double inv_ds, double* out, TransportScratch& s) {
    const int w = q.w;
    const int h = q.h;
    s.reserve(w, h);
    const std::size_t uw = static_cast<std::size_t>(w);
    reconstruct_y(k, q, s);
    for (int r = 0; r < h; ++r) {
        const double* base = q.ptr(-2, r);
        k.reconstruct(base, base + 1, base + 2, base + 3, s.left.data(), s.right.data(), uw + 1);
        const double* u = cell_u + r * uw;
        const double* v = cell_v + r * uw;
        k.upwind_difference(u, s.left.data(), s.left.data() + 1, s.right.data(), s.right.data() + 1, s.dx.data(), uw);
        const double* ly = s.left_y.data() + r * uw;
        const double* ry = s.right_y.data() + r * uw;
        k.upwind_difference(v, ly, ly + uw, ry, ry + uw, s.dy.data(), uw);
        double* o = out + r * uw;
        for (int i = 0; i < w; ++i) o[i] = -(u[i] * s.dx[i] + v[i] * s.dy[i]) * inv_ds;
    }
}

namespace {

void fill_replicated(Block& b, const Field& q) {
    const int nx = q.nx();
    const int ny = q.ny();
    for (int j = -Block::kGhost; j < ny + Block::kGhost; ++j) {
        const int jj = std::clamp(j, 0, ny - 1);
        for (int i = -Block::kGhost; i < nx + Block::kGhost; ++i) b.at(i, j) = q(std::clamp(i, 0, nx - 1), jj);
    }
}

std::vector<double> rate(const kernels::KernelTable& k, const Field& q, const Field& vx, const Field& vy, double ds,
                         AdvectionForm form, TransportScratch& s) {
    const int nx = q.nx();
    const int ny = q.ny();
    Block b;
    b.resize(nx, ny);
    fill_replicated(b, q);
    std::vector<double> out(q.size());
    if (form == AdvectionForm::Advective) {
        advective_rate(k, b, vx.values().data(), vy.values().data(), 1.0 / ds, out.data(), s);
        return out;
    }
    std::vector<double> fu(static_cast<std::size_t>(ny) * (nx + 1), 0.0);
    std::vector<double> fv(static_cast<std::size_t>(ny + 1) * nx, 0.0);
    for (int j = 0; j < ny; ++j) {
        for (int f = 1; f < nx; ++f) fu[j * (nx + 1) + f] = 0.5 * (vx(f - 1, j) + vx(f, j));
    }
    for (int g = 1; g < ny; ++g) {
        for (int i = 0; i < nx; ++i) fv[g * nx + i] = 0.5 * (vy(i, g - 1) + vy(i, g));
    }
    conservative_rate(k, b, fu.data(), fv.data(), 1.0 / ds, out.data(), s);
    return out;
}

}  // namespace

Field advect(const Field& q, const Field& vx, const Field& vy, double dt, double ds, AdvectionForm form,
             const kernels::KernelTable& k) {
    double vmax = 0.0;
    int ci = 0, cj = 0;
    for (int j = 0; j < q.ny(); ++j) {
        for (int i = 0; i < q.nx(); ++i) {
            const double v = std::max(std::abs(vx(i, j)), std::abs(vy(i, j)));
            if (v > vmax) {
                vmax = v;
                ci = i;
                cj = j;
            }
        }
    }
    if (vmax * dt / ds >= 1.0) {
        std::ostringstream msg;
        msg << "CFL limit exceeded: |v| = " << vmax << " m/s at cell (" << ci << ", " << cj << ")";
        throw CflError(msg.str(), vmax, ci, cj);
    }
    TransportScratch s;
    const std::vector<double> r1 = rate(k, q, vx, vy, ds, form, s);
    Field mid = q;
    for (std::size_t n = 0; n < q.size(); ++n) mid[n] = q[n] + 0.5 * dt * r1[n];
    const std::vector<double> r2 = rate(k, mid, vx, vy, ds, form, s);
    Field out = q;
    for (std::size_t n = 0; n < q.size(); ++n) out[n] = q[n] + dt * r2[n];
    return out;
}

double boundary_ramp(double d, double band) {
    if (band <= 0.0 || d >= band) return 1.0;
    if (d <= 0.0) return 0.0;
    return 0.5 - 0.5 * std::cos(3.14159265358979323846 * d / band);
}

BoundaryTaper boundary_taper(const Grid& g, double fraction) {
    BoundaryTaper t;
    t.x.resize(g.nx);
    t.y.resize(g.ny);
    for (int i = 0; i < g.nx; ++i) t.x[i] = boundary_ramp(std::min(i, g.nx - 1 - i) * g.ds, fraction * g.width());
    for (int j = 0; j < g.ny; ++j) t.y[j] = boundary_ramp(std::min(j, g.ny - 1 - j) * g.ds, fraction * g.height());
    return t;
}

void boundary_taper(Field& vx, Field& vy, const Grid& g, double fraction) {
    const BoundaryTaper t = boundary_taper(g, fraction);
    for (int j = 0; j < g.ny; ++j) {
        for (int i = 0; i < g.nx; ++i) {
            vx(i, j) *= t.x[i];
            vy(i, j) *= t.y[j];
        }
    }
}

}  // namespace bfm
