#include "bfm/grid.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <string>

namespace bfm {

void Grid::validate() const {
    if (nx < 8 || ny < 8) {
        throw std::invalid_argument("grid must be at least 8x8 cells, got " + std::to_string(nx) + "x" +
                                    std::to_string(ny));
    }
    if (!(ds > 0.0) || !std::isfinite(ds)) throw std::invalid_argument("grid cell size must be positive");
}

double Field::min() const { return data_.empty() ? 0.0 : *std::min_element(data_.begin(), data_.end()); }
double Field::max() const { return data_.empty() ? 0.0 : *std::max_element(data_.begin(), data_.end()); }
double Field::sum() const { return std::accumulate(data_.begin(), data_.end(), 0.0); }

CellBox CellBox::clipped(const Grid& g) const {
    CellBox b{std::max(i0, 0), std::min(i1, g.nx), std::max(j0, 0), std::min(j1, g.ny)};
    if (b.empty()) return {};
    return b;
}

CellBox CellBox::rows(int r0, int r1) const {
    CellBox b{i0, i1, std::max(j0, r0), std::min(j1, r1)};
    if (b.empty()) return {};
    return b;
}

}  // namespace bfm
