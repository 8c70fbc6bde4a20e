#pragma once

// Slow reference implementations used only to cross-check the fast paths.

#include "santalo/grid_field.hpp"

#include <span>

namespace santalo::oracle {

/// out[j] = max_i (u[i] * v[j] - F[i]) by direct enumeration.
void conjugate_1d_brute(std::span<const double> u, std::span<const double> F, std::span<const double> v,
                        std::span<double> out);

/// ℒ_zφ on `out` by enumerating every primal node.
GridField legendre_brute(const GridField& field, const Vec& z, const GridSpec& out);

/// min over all grid pairs of φ(x) + ψ(y) - <x - z, y - z>.
double fenchel_young_gap_brute(const GridField& phi, const GridField& psi, const Vec& z);

}  // namespace santalo::oracle
