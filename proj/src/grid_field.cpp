#include "santalo/grid_field.hpp"

#include "santalo/error.hpp"

#include <algorithm>
#include <cmath>

namespace santalo {

GridSpec::GridSpec(std::vector<double> lo_, std::vector<double> hi_, std::vector<int> shape_)
    : lo(std::move(lo_)), hi(std::move(hi_)), shape(std::move(shape_))
{
    validate();
}

GridSpec GridSpec::cube(int dim, double lo, double hi, int per_axis)
{
    return GridSpec(std::vector<double>(dim, lo), std::vector<double>(dim, hi), std::vector<int>(dim, per_axis));
}

void GridSpec::validate() const
{
    require(!shape.empty() && shape.size() <= static_cast<std::size_t>(kMaxDim), "grid dimension must be in [1,4]");
    require(lo.size() == shape.size() && hi.size() == shape.size(), "grid box and shape disagree in dimension");
    for (std::size_t k = 0; k < shape.size(); ++k) {
        require(std::isfinite(lo[k]) && std::isfinite(hi[k]) && lo[k] < hi[k], "grid box requires min < max on every axis");
        require(shape[k] >= 4, "grid shape requires at least 4 samples per axis");
    }
}

std::size_t GridSpec::size() const
{
    std::size_t n = 1;
    for (int s : shape) n *= static_cast<std::size_t>(s);
    return n;
}

double GridSpec::cell_volume() const
{
    double v = 1.0;
    for (int k = 0; k < dim(); ++k) v *= step(k);
    return v;
}

std::vector<std::size_t> GridSpec::strides() const
{
    std::vector<std::size_t> st(shape.size());
    std::size_t s = 1;
    for (int k = dim() - 1; k >= 0; --k) {
        st[k] = s;
        s *= static_cast<std::size_t>(shape[k]);
    }
    return st;
}

void GridSpec::node(std::size_t flat, std::span<double> out) const
{
    for (int k = dim() - 1; k >= 0; --k) {
        const auto n = static_cast<std::size_t>(shape[k]);
        out[k] = coord(k, static_cast<int>(flat % n));
        flat /= n;
    }
}

Vec GridSpec::node(std::size_t flat) const
{
    Vec x(dim());
    node(flat, std::span<double>(x.data(), x.size()));
    return x;
}

double GridSpec::inscribed_radius(const Vec& c) const
{
    double r = kInf;
    for (int k = 0; k < dim(); ++k) r = std::min({r, c[k] - lo[k], hi[k] - c[k]});
    return std::max(r, 0.0);
}

GridField::GridField(GridSpec grid, std::vector<double> values, ConvexFlag flag)
    : grid_(std::move(grid)), values_(std::move(values)), flag_(flag)
{
    grid_.validate();
    require(values_.size() == grid_.size(), "field value count does not match grid shape");
    bool any_finite = false;
    for (double v : values_) {
        if (std::isnan(v)) throw DomainError("NaN is not a valid field value");
        if (v == -kInf) throw DomainError("-inf is not a valid field value");
        any_finite = any_finite || std::isfinite(v);
    }
    require(any_finite, "empty effective domain");
}

GridField make_field(GridSpec grid, std::vector<double> values, ConvexFlag flag)
{
    GridField f(std::move(grid), std::move(values), flag);
    if (flag == ConvexFlag::KnownConvex) {
        require(f.convexity_violation() <= 1e-9, "field flagged convex fails discrete midpoint convexity");
    }
    return f;
}

double GridField::eval(std::span<const double> x) const
{
    const int d = dim();
    int base[kMaxDim];
    double frac[kMaxDim];
    for (int k = 0; k < d; ++k) {
        const double h = grid_.step(k);
        const double t = (x[k] - grid_.lo[k]) / h;
        const double slack = 1e-12;
        if (t < -slack || t > grid_.shape[k] - 1 + slack) return kInf;
        int i = static_cast<int>(std::floor(t));
        i = std::clamp(i, 0, grid_.shape[k] - 2);
        base[k] = i;
        frac[k] = std::clamp(t - i, 0.0, 1.0);
    }
    const auto st = grid_.strides();
    double acc = 0.0;
    for (int corner = 0; corner < (1 << d); ++corner) {
        double w = 1.0;
        std::size_t idx = 0;
        for (int k = 0; k < d; ++k) {
            const bool up = (corner >> k) & 1;
            w *= up ? frac[k] : 1.0 - frac[k];
            idx += static_cast<std::size_t>(base[k] + (up ? 1 : 0)) * st[k];
        }
        if (w == 0.0) continue;
        const double v = values_[idx];
        if (is_inf(v)) return kInf;
        acc += w * v;
    }
    return acc;
}

GridField GridField::map(const std::function<double(double)>& g) const
{
    std::vector<double> out(values_.size());
    std::transform(values_.begin(), values_.end(), out.begin(), g);
    return GridField(grid_, std::move(out));
}

double GridField::convexity_violation() const
{
    const int d = dim();
    const auto st = grid_.strides();
    // Stencil directions: unit axes and (e_a ± e_b) diagonals.
    std::vector<std::vector<int>> dirs;
    for (int a = 0; a < d; ++a) {
        std::vector<int> e(d, 0);
        e[a] = 1;
        dirs.push_back(e);
        for (int b = a + 1; b < d; ++b) {
            std::vector<int> p(d, 0), m(d, 0);
            p[a] = 1, p[b] = 1;
            m[a] = 1, m[b] = -1;
            dirs.push_back(p);
            dirs.push_back(m);
        }
    }
    double worst = 0.0;
    std::vector<int> idx(d);
    for (std::size_t flat = 0; flat < values_.size(); ++flat) {
        std::size_t rem = flat;
        for (int k = d - 1; k >= 0; --k) {
            idx[k] = static_cast<int>(rem % grid_.shape[k]);
            rem /= grid_.shape[k];
        }
        const double mid = values_[flat];
        for (const auto& e : dirs) {
            bool inside = true;
            std::ptrdiff_t off = 0;
            for (int k = 0; k < d && inside; ++k) {
                const int lo_i = idx[k] - e[k], hi_i = idx[k] + e[k];
                inside = lo_i >= 0 && hi_i >= 0 && lo_i < grid_.shape[k] && hi_i < grid_.shape[k];
                off += static_cast<std::ptrdiff_t>(e[k]) * static_cast<std::ptrdiff_t>(st[k]);
            }
            if (!inside) continue;
            const double left = values_[flat - off], right = values_[flat + off];
            if (is_inf(left) || is_inf(right)) continue;
            const double scale = 1.0 + std::abs(left) + std::abs(right);
            const double viol = is_inf(mid) ? kInf : (mid - 0.5 * (left + right)) / scale;
            worst = std::max(worst, viol);
        }
    }
    return worst;
}

double GridField::min_finite() const
{
    double m = kInf;
    for (double v : values_)
        if (std::isfinite(v)) m = std::min(m, v);
    return m;
}

}  // namespace santalo
