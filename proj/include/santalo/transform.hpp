#pragma once

#include "santalo/grid_field.hpp"
#include "santalo/linalg.hpp"

#include <optional>
#include <span>

namespace santalo {

/// Discrete 1D conjugate out[j] = max_i (u[i] * v[j] - F[i]) over the finite
/// entries of F, in O(|u| + |v|): lower hull of (u, F), then a monotone walk
/// over ascending slopes v. u and v must be ascending. Rows with no finite
/// entry produce -∞. If `argmax` is non-empty it receives the maximizing i.
void conjugate_1d(std::span<const double> u, std::span<const double> F, std::span<const double> v,
                  std::span<double> out, std::span<int> argmax = {});

/// Dual grid for ℒ_zφ: per axis [z - s, z + s], s the largest finite
/// difference quotient of the field along that axis (half the box width when
/// every quotient vanishes), same shape as the primal grid.
GridSpec dual_grid(const GridField& field, const Vec& z);

struct LegendreResult {
    GridField field;
    /// Smallest |y - z| over output nodes whose maximizer sits on the primal
    /// box boundary. Inside this radius the box truncation has no effect.
    double boundary_effect_radius = 0.0;
};

/// Grid: the exact sup over the grid nodes. Refined: each 1D pass replaces the
/// node maximum by the vertex of the parabola through the maximizer and its
/// two finite neighbors, which recovers sub-cell maximizer shifts for smooth φ
/// (the value never drops below the grid sup).
enum class LegendreMode { Grid, Refined };

/// ℒ_zφ(y) = sup_x <x - z, y - z> - φ(x) for φ extended by +∞ outside its box,
/// computed by dimension-wise factorization.
LegendreResult legendre_report(const GridField& field, const Vec& z, const std::optional<GridSpec>& out = std::nullopt,
                               LegendreMode mode = LegendreMode::Grid);

GridField legendre(const GridField& field, const Vec& z, const std::optional<GridSpec>& out = std::nullopt);

/// Lower convex hull φ_* = ℒ_zℒ_zφ sampled on the field's own grid.
GridField biconjugate(const GridField& field, const Vec& z);

/// min over grid pairs of φ(x) + ψ(y) - <x - z, y - z>, +∞ entries skipped.
double fenchel_young_gap(const GridField& phi, const GridField& psi, const Vec& z);

}  // namespace santalo
