#include "santalo/transform.hpp"

#include "santalo/error.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace santalo {

void conjugate_1d(std::span<const double> u, std::span<const double> F, std::span<const double> v,
                  std::span<double> out, std::span<int> argmax)
{
    const std::size_t n = u.size();
    std::vector<int> hull;
    hull.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (is_inf(F[i])) continue;
        while (hull.size() >= 2) {
            const int a = hull[hull.size() - 2], b = hull.back();
            const double cross = (u[b] - u[a]) * (F[i] - F[a]) - (F[b] - F[a]) * (u[i] - u[a]);
            if (cross > 0.0) break;
            hull.pop_back();
        }
        hull.push_back(static_cast<int>(i));
    }
    if (hull.empty()) {
        std::fill(out.begin(), out.end(), -kInf);
        if (!argmax.empty()) std::fill(argmax.begin(), argmax.end(), -1);
        return;
    }
    std::size_t k = 0;
    for (std::size_t j = 0; j < v.size(); ++j) {
        double best = u[hull[k]] * v[j] - F[hull[k]];
        while (k + 1 < hull.size()) {
            const double next = u[hull[k + 1]] * v[j] - F[hull[k + 1]];
            if (next < best) break;
            best = next;
            ++k;
        }
        out[j] = best;
        if (!argmax.empty()) argmax[j] = hull[k];
    }
}

GridSpec dual_grid(const GridField& field, const Vec& z)
{
    const GridSpec& g = field.grid();
    const int d = g.dim();
    const auto st = g.strides();
    std::vector<double> slope(d, 0.0);
    std::vector<double> lo(d), hi(d);
    for (std::size_t flat = 0; flat < field.size(); ++flat) {
        const double a = field[flat];
        if (is_inf(a)) continue;
        std::size_t rem = flat;
        for (int k = d - 1; k >= 0; --k) {
            const int i = static_cast<int>(rem % g.shape[k]);
            rem /= g.shape[k];
            if (i + 1 >= g.shape[k]) continue;
            const double b = field[flat + st[k]];
            if (is_inf(b)) continue;
            slope[k] = std::max(slope[k], std::abs(b - a) / g.step(k));
        }
    }
    for (int k = 0; k < d; ++k) {
        double s = slope[k];
        if (!(s > 1e-12)) s = 0.5 * (g.hi[k] - g.lo[k]);
        lo[k] = z[k] - s;
        hi[k] = z[k] + s;
    }
    return GridSpec(lo, hi, g.shape);
}

LegendreResult legendre_report(const GridField& field, const Vec& z, const std::optional<GridSpec>& out,
                               LegendreMode mode)
{
    const GridSpec& in = field.grid();
    const int d = in.dim();
    require(z.size() == d, "center dimension does not match field dimension");
    const GridSpec og = out ? *out : dual_grid(field, z);
    require(og.dim() == d, "output grid dimension does not match field dimension");

    // Running array A: starts as -φ; after the pass on axis k its axes >= k
    // carry output indices. Each pass is a 1D conjugate of -A along axis k.
    std::vector<int> shape = in.shape;
    std::vector<double> cur(field.size());
    for (std::size_t i = 0; i < cur.size(); ++i) cur[i] = -field[i];
    std::vector<std::vector<int>> argmaxes(d);
    std::vector<std::vector<int>> shapes_after(d);

    for (int k = d - 1; k >= 0; --k) {
        const int nin = in.shape[k], nout = og.shape[k];
        std::vector<double> u(nin), v(nout);
        for (int i = 0; i < nin; ++i) u[i] = in.coord(k, i) - z[k];
        for (int j = 0; j < nout; ++j) v[j] = og.coord(k, j) - z[k];

        std::size_t pre = 1, post = 1;
        for (int a = 0; a < k; ++a) pre *= shape[a];
        for (int a = k + 1; a < d; ++a) post *= shape[a];
        std::vector<int> next_shape = shape;
        next_shape[k] = nout;
        std::vector<double> next(pre * nout * post);
        std::vector<int> arg(next.size());
        std::vector<double> F(nin), res(nout);
        std::vector<int> am(nout);
        for (std::size_t p = 0; p < pre; ++p) {
            for (std::size_t q = 0; q < post; ++q) {
                for (int i = 0; i < nin; ++i) F[i] = -cur[(p * nin + i) * post + q];
                conjugate_1d(u, F, v, res, am);
                if (mode == LegendreMode::Refined) {
                    for (int j = 0; j < nout; ++j) {
                        const int i = am[j];
                        if (i <= 0 || i >= nin - 1 || is_inf(F[i - 1]) || is_inf(F[i + 1])) continue;
                        const double a = u[i - 1] * v[j] - F[i - 1], b = res[j], c = u[i + 1] * v[j] - F[i + 1];
                        const double curv = a - 2.0 * b + c;
                        if (curv < 0.0) res[j] = b - (a - c) * (a - c) / (8.0 * curv);
                    }
                }
                for (int j = 0; j < nout; ++j) {
                    next[(p * nout + j) * post + q] = res[j];
                    arg[(p * nout + j) * post + q] = am[j];
                }
            }
        }
        cur = std::move(next);
        argmaxes[k] = std::move(arg);
        shape = next_shape;
        shapes_after[k] = shape;
    }
    for (double& c : cur) require(!std::isinf(c) || c > 0, "empty effective domain");

    // Backtrack maximizers to measure the boundary effect.
    double radius = kInf, farthest = 0.0;
    std::vector<int> idx(d);
    for (std::size_t flat = 0; flat < cur.size(); ++flat) {
        std::size_t rem = flat;
        for (int k = d - 1; k >= 0; --k) {
            idx[k] = static_cast<int>(rem % og.shape[k]);
            rem /= og.shape[k];
        }
        double r2 = 0.0;
        for (int k = 0; k < d; ++k) {
            const double dy = og.coord(k, idx[k]) - z[k];
            r2 += dy * dy;
        }
        const double r = std::sqrt(r2);
        farthest = std::max(farthest, r);
        if (r >= radius) continue;
        // idx holds output indices; replace axis by axis with input maximizers.
        bool on_boundary = false;
        for (int k = 0; k < d; ++k) {
            const auto& sh = shapes_after[k];
            std::size_t pos = 0;
            for (int a = 0; a < d; ++a) pos = pos * sh[a] + idx[a];
            const int i = argmaxes[k][pos];
            idx[k] = i;
            if (i == 0 || i == in.shape[k] - 1) on_boundary = true;
        }
        if (on_boundary) radius = r;
    }
    LegendreResult result{GridField(og, std::move(cur), ConvexFlag::KnownConvex), std::isinf(radius) ? farthest : radius};
    return result;
}

GridField legendre(const GridField& field, const Vec& z, const std::optional<GridSpec>& out)
{
    return legendre_report(field, z, out).field;
}

GridField biconjugate(const GridField& field, const Vec& z)
{
    GridField psi = legendre(field, z);
    return legendre(psi, z, field.grid());
}

double fenchel_young_gap(const GridField& phi, const GridField& psi, const Vec& z)
{
    require(phi.dim() == psi.dim(), "fields have different dimensions");
    GridField back = legendre(psi, z, phi.grid());
    double gap = kInf;
    for (std::size_t i = 0; i < phi.size(); ++i) {
        if (is_inf(phi[i])) continue;
        gap = std::min(gap, phi[i] - back[i]);
    }
    require(!is_inf(gap), "vacuous");
    return gap;
}

}  // namespace santalo
