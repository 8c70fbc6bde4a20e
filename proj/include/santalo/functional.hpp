#pragma once

#include "santalo/geometry.hpp"
#include "santalo/grid_field.hpp"
#include "santalo/quad.hpp"
#include "santalo/weights.hpp"

#include <optional>
#include <string>

namespace santalo {

/// Half-square: f = ϱ∘φ, g = ϱ∘ℒ_zφ against (∫ϱ(|x|²/2))²; pairs satisfy
/// f(x)g(y) <= ϱ²(<x-z, y-z>/2).
/// Square: f = ϱ∘(2φ), g = ϱ∘(2ℒ_zφ) against (∫ϱ(|x|²))²; pairs satisfy
/// f(x)g(y) <= ϱ²(<x-z, y-z>).
enum class Convention { HalfSquare, Square };

std::string convention_name(Convention c);
Convention parse_convention(const std::string& s);

struct SantaloReport {
    Convention convention = Convention::HalfSquare;
    Vec z;
    double int_f = 0.0;
    double int_g = 0.0;
    double product = 0.0;
    double reference = 0.0;
    double deficit_minus = 0.0;  // 1 - product / reference, unclamped
    double deficit_plus = 0.0;   // reference / product - 1
    double boundary_effect_radius = 0.0;
};

/// ∫_{R^n} ϱ(|x|²/2) dx or ∫ ϱ(|x|²) dx, squared.
double reference_product(const NormalizedWeight& w, int n, Convention c);

struct FunctionalPair {
    GridField f;
    GridField g;
    GridField psi;
    double boundary_effect_radius = 0.0;
};

/// f and g on the primal and dual grids (g on `dual` when given). The
/// transform uses the refined mode so smooth perturbations of the extremal
/// keep their second-order product change.
FunctionalPair functional_pair(const NormalizedWeight& w, const GridField& phi, const Vec& z, Convention c,
                               const std::optional<GridSpec>& dual = std::nullopt);

SantaloReport functional_product(const NormalizedWeight& w, const GridField& phi, const Vec& z, Convention c,
                                 const std::optional<GridSpec>& dual = std::nullopt);

/// min over grid pairs with <x-z, y-z> > 0 and f(x), g(y) > 0 of
/// 2 log ϱ(s) - log f(x) - log g(y), s = <x-z, y-z> (square) or half of it.
/// +∞ when no pair qualifies.
double product_hypothesis_check(const NormalizedWeight& w, const GridField& f, const GridField& g, const Vec& z,
                                Convention c = Convention::Square);

struct RayOptions {
    int sphere_size = 0;  // 0: default grid for the dimension
    double tol = 1e-9;    // relative tolerance per ray
};

/// K_{f,z}: radial body about the origin with ρ(u) = (∫_0^∞ r^{n-1} f(z + r u) dr)^{1/n}.
/// Grid fields are interpolated multilinearly and truncated at their box.
ConvexBody ball_body(const GridField& f, const Vec& z, const RayOptions& opt = {});
ConvexBody ball_body(const FnN& f, int n, const Vec& z, const RayOptions& opt = {});

/// ∫ x f / ∫ f by the tensor trapezoid rule.
Vec field_mean(const GridField& f);

struct CenterResult {
    Vec z;
    double centroid_norm = 0.0;
    int iterations = 0;
};

/// Fradelizi-Meyer center: z with centroid(K_{f,z}) = 0. Broyden steps on the
/// centroid map starting from z + centroid/2, halved on non-decrease of |centroid|.
CenterResult fm_center(const GridField& f, double tol = 1e-8, int max_iter = 200, const RayOptions& opt = {});
CenterResult fm_center(const FnN& f, int n, const Vec& z0, double tol = 1e-8, int max_iter = 200,
                       const RayOptions& opt = {});

/// max_u ρ_{K_g}(u) h_{K_f}(u) / c - 1 with c = m_n^{2/n} (square) or
/// 2 m_n^{2/n} (half-square), m_n = ∫ r^{n-1} ϱ(r²) dr. Non-positive when K_g ⊂ c K_f°.
double polar_inclusion_margin(const NormalizedWeight& w, const ConvexBody& Kf, const ConvexBody& Kg, Convention c);
double polar_inclusion_check(const NormalizedWeight& w, const GridField& f, const GridField& g, const Vec& z,
                             Convention c = Convention::Square, const RayOptions& opt = {});

struct BorellReport {
    double hypothesis_margin = 0.0;
    double ratio = 0.0;
    double int_m = 0.0, int_f = 0.0, int_g = 0.0;
    double fit_a = 1.0;
    double fit_b = 1.0;
    double l1_f = 0.0;
    double l1_g = 0.0;
    bool fitted = false;
    bool stagnated = false;
};

/// Margin of M(√(rs)) >= √(F(r)G(s)) on a 256×256 log-spaced grid over the
/// union of effective supports, and the ratio ∫F ∫G / (∫M)².
BorellReport borell_check(const Fn1& M, const Fn1& F, const Fn1& G);

/// Adds the fit min_{a,b} ∫|a F(bt) - M(t)| dt / ∫M and the dual error
/// ∫|G(t/b)/a - M(t)| dt / ∫M.
BorellReport borell_fit(const Fn1& M, const Fn1& F, const Fn1& G);

}  // namespace santalo
