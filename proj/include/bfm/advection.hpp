#pragma once

#include <vector>

#include "bfm/grid.hpp"
#include "bfm/kernels.hpp"

namespace bfm {

/// A w x h region of a raster with two ghost cells on every side, which is
/// what the limited reconstruction needs for the outermost faces.
struct Block {
    static constexpr int kGhost = 2;

    int w = 0;
    int h = 0;
    std::vector<double> data;

    void resize(int width, int height) {
        w = width;
        h = height;
        data.resize(static_cast<std::size_t>(w + 2 * kGhost) * static_cast<std::size_t>(h + 2 * kGhost));
    }
    int stride() const { return w + 2 * kGhost; }
    // i in [-2, w + 2), j in [-2, h + 2)
    double& at(int i, int j) { return data[static_cast<std::size_t>(j + kGhost) * stride() + (i + kGhost)]; }
    double at(int i, int j) const { return data[static_cast<std::size_t>(j + kGhost) * stride() + (i + kGhost)]; }
    const double* ptr(int i, int j) const { return &data[static_cast<std::size_t>(j + kGhost) * stride() + (i + kGhost)]; }
};

/// Reusable buffers for the transport rates. One per worker.
struct TransportScratch {
    std::vector<double> left, right, flux;
    std::vector<double> left_y, right_y, flux_y;
    std::vector<double> dx, dy;

    void reserve(int w, int h);
};

/// -div(q v) over the block interior from face-normal velocities.
/// face_u is h rows of w + 1 x-faces, face_v is h + 1 rows of w y-faces.
/// Result is written row-major to out (h x w).
void conservative_rate(const kernels::KernelTable& k, const Block& q, const double* face_u, const double* face_v,
                       double inv_ds, double* out, TransportScratch& s);

/// -(u . grad q) over the block interior from cell-centred velocities
/// (row-major h x w each).
void advective_rate(const kernels::KernelTable& k, const Block& q, const double* cell_u, const double* cell_v,
                    double inv_ds, double* out, TransportScratch& s);

enum class AdvectionForm { Conservative, Advective };

/// One midpoint step of pure transport on a whole raster with a frozen
/// cell-centred velocity. Map edges replicate the field outward and carry no
/// normal flux in the conservative form. Throws CflError when
/// max |v| dt / ds >= 1.
Field advect(const Field& q, const Field& vx, const Field& vy, double dt, double ds, AdvectionForm form,
             const kernels::KernelTable& k = kernels::active());

/// Ramp for the normal velocity: 0 at the border cell, 1 once the cell centre
/// is `band` metres in from it, raised-cosine in between. `d` is the distance
/// of the cell centre from the border cell centre.
double boundary_ramp(double d, double band);

/// Per-column and per-row factors applied to vx and vy respectively.
struct BoundaryTaper {
    std::vector<double> x;  // nx entries
    std::vector<double> y;  // ny entries
};
BoundaryTaper boundary_taper(const Grid& g, double fraction);

/// Tapers the normal velocity component near the map border in place.
void boundary_taper(Field& vx, Field& vy, const Grid& g, double fraction);

}  // namespace bfm
