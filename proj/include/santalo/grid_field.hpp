#pragma once

#include "santalo/linalg.hpp"

#include <cstddef>
#include <functional>
#include <limits>
#include <span>
#include <vector>

namespace santalo {

/// +∞ sentinel for extended-real fields. IEEE +Inf obeys ∞ + finite = ∞;
/// NaN and -∞ are rejected when a field is built.
inline constexpr double kInf = std::numeric_limits<double>::infinity();

inline bool is_inf(double v) { return v == kInf; }

enum class ConvexFlag { Unknown, KnownConvex, KnownNonconvex };

/// Axis-aligned tensor grid over a box. Node i on axis k sits at
/// lo[k] + i * (hi[k] - lo[k]) / (shape[k] - 1).
struct GridSpec {
    std::vector<double> lo;
    std::vector<double> hi;
    std::vector<int> shape;

    GridSpec() = default;
    GridSpec(std::vector<double> lo_, std::vector<double> hi_, std::vector<int> shape_);

    /// Same box [lo, hi]^dim and `per_axis` nodes on every axis.
    static GridSpec cube(int dim, double lo, double hi, int per_axis);

    int dim() const { return static_cast<int>(shape.size()); }
    std::size_t size() const;
    double step(int axis) const { return (hi[axis] - lo[axis]) / (shape[axis] - 1); }
    double coord(int axis, int i) const { return lo[axis] + i * step(axis); }
    double cell_volume() const;
    std::vector<std::size_t> strides() const;

    /// Coordinates of the node with the given flat (row-major) index.
    void node(std::size_t flat, std::span<double> out) const;
    Vec node(std::size_t flat) const;

    /// Radius of the largest ball centered at c inside the box.
    double inscribed_radius(const Vec& c) const;

    void validate() const;
    bool operator==(const GridSpec&) const = default;
};

/// Extended-real scalar field sampled on a tensor grid; +∞ outside the box.
class GridField {
public:
    GridField() = default;
    GridField(GridSpec grid, std::vector<double> values, ConvexFlag flag = ConvexFlag::Unknown);

    template <class F>
    static GridField sample(const GridSpec& grid, F&& f, ConvexFlag flag = ConvexFlag::Unknown)
    {
        std::vector<double> values(grid.size());
        std::vector<double> x(grid.dim());
        for (std::size_t i = 0; i < values.size(); ++i) {
            grid.node(i, x);
            values[i] = f(std::span<const double>(x));
        }
        return GridField(grid, std::move(values), flag);
    }

    const GridSpec& grid() const { return grid_; }
    int dim() const { return grid_.dim(); }
    std::size_t size() const { return values_.size(); }
    const std::vector<double>& values() const { return values_; }
    double operator[](std::size_t i) const { return values_[i]; }
    ConvexFlag convex_flag() const { return flag_; }
    void set_convex_flag(ConvexFlag f) { flag_ = f; }

    /// Multilinear interpolation. Returns +∞ outside the box and in any cell
    /// where a node carrying positive weight is +∞.
    double eval(std::span<const double> x) const;
    double eval(const Vec& x) const { return eval(std::span<const double>(x.data(), x.size())); }

    /// Pointwise map of the values onto a new field on the same grid.
    GridField map(const std::function<double(double)>& g) const;

    /// Discrete midpoint convexity along axis and pairwise-diagonal stencils.
    /// Returns the worst violation (>= 0); stencils touching +∞ endpoints are vacuous.
    double convexity_violation() const;

    double min_finite() const;

private:
    GridSpec grid_;
    std::vector<double> values_;
    ConvexFlag flag_ = ConvexFlag::Unknown;
};

/// Builds a field and, when flagged convex, verifies the flag to 1e-9.
GridField make_field(GridSpec grid, std::vector<double> values, ConvexFlag flag);

}  // namespace santalo
