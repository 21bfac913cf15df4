#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

namespace bfm {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    constexpr Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
    constexpr Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
    constexpr Vec2 operator*(double s) const { return {x * s, y * s}; }
    constexpr Vec2 operator-() const { return {-x, -y}; }
    constexpr Vec2& operator+=(Vec2 o) { x += o.x; y += o.y; return *this; }
    constexpr bool operator==(const Vec2&) const = default;
};

inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }

/// Uniform cell-centred grid. Cell (i, j) has its centre at
/// origin + ((i + 0.5) ds, (j + 0.5) ds); x runs east, y north.
struct Grid {
    int nx = 0;
    int ny = 0;
    double ds = 1.0;
    Vec2 origin{};

    std::size_t size() const { return static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny); }
    std::size_t index(int i, int j) const {
        return static_cast<std::size_t>(j) * static_cast<std::size_t>(nx) + static_cast<std::size_t>(i);
    }
    Vec2 center(int i, int j) const {
        return {origin.x + (i + 0.5) * ds, origin.y + (j + 0.5) * ds};
    }
    double width() const { return nx * ds; }
    double height() const { return ny * ds; }
    double cell_area() const { return ds * ds; }
    bool contains(int i, int j) const { return i >= 0 && j >= 0 && i < nx && j < ny; }

    /// Throws std::invalid_argument when the grid violates nx, ny >= 8 or ds > 0.
    void validate() const;

    bool operator==(const Grid&) const = default;
};

/// Row-major (j-major) scalar raster matching a Grid.
class Field {
public:
    Field() = default;
    Field(int nx, int ny, double value = 0.0)
        : nx_(nx), ny_(ny), data_(static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny), value) {}
    explicit Field(const Grid& g, double value = 0.0) : Field(g.nx, g.ny, value) {}

    int nx() const { return nx_; }
    int ny() const { return ny_; }
    std::size_t size() const { return data_.size(); }

    double& operator()(int i, int j) { return data_[static_cast<std::size_t>(j) * nx_ + i]; }
    double operator()(int i, int j) const { return data_[static_cast<std::size_t>(j) * nx_ + i]; }
    double& operator[](std::size_t k) { return data_[k]; }
    double operator[](std::size_t k) const { return data_[k]; }

    double* row(int j) { return data_.data() + static_cast<std::size_t>(j) * nx_; }
    const double* row(int j) const { return data_.data() + static_cast<std::size_t>(j) * nx_; }

    std::span<double> values() { return data_; }
    std::span<const double> values() const { return data_; }

    void fill(double v) { std::fill(data_.begin(), data_.end(), v); }
    bool matches(const Grid& g) const { return nx_ == g.nx && ny_ == g.ny; }

    double min() const;
    double max() const;
    double sum() const;

    bool operator==(const Field&) const = default;

private:
    int nx_ = 0;
    int ny_ = 0;
    std::vector<double> data_;
};

/// Inclusive-exclusive cell box [i0, i1) x [j0, j1).
struct CellBox {
    int i0 = 0, i1 = 0, j0 = 0, j1 = 0;

    bool empty() const { return i1 <= i0 || j1 <= j0; }
    int width() const { return i1 - i0; }
    int height() const { return j1 - j0; }
    CellBox dilated(int m) const { return {i0 - m, i1 + m, j0 - m, j1 + m}; }
    CellBox clipped(const Grid& g) const;
    CellBox rows(int r0, int r1) const;
    bool operator==(const CellBox&) const = default;
};

}  // namespace bfm
