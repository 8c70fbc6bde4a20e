#pragma once

#include "santalo/functional.hpp"
#include "santalo/grid_field.hpp"
#include "santalo/weights.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace santalo {

/// R > 0 with ϱ(R²) = ε^{1/(64n²)}. Throws "R out of range" when the target
/// is not attained on the representable range.
double radius_R(const NormalizedWeight& w, double eps, int n);

/// deficit_minus clamped below at 0; the report keeps the raw value.
double deficit(const SantaloReport& r);

/// inf over z of the functional product, by simplex search from z0.
SantaloReport minimize_product(const NormalizedWeight& w, const GridField& phi, const Vec& z0, Convention c,
                               double tol = 1e-10);

struct PsiRow {
    double R = 0.0;
    double measure = 0.0;  // V(Ψ ∩ R·B^n)
    double bound = 0.0;    // η √ε R^n
};

/// Ψ = {x : φ(x) > φ_*(x) + ε^{1/(128n²)}}, measured by node cells inside
/// the balls R·B^n about `center`.
std::vector<PsiRow> psi_measure(const GridField& phi, const NormalizedWeight& w, double eps,
                                const std::vector<double>& radii, double eta = 1.0, const Vec& center = Vec());

struct FitOptions {
    double tol = 1e-6;    // deficits at or below this count as zero
    double radius = 0.0;  // > 0 overrides R(ε)
    int cells = 0;        // integration cells per axis, 0 for the dimension default
    int max_evals = 6000;
    double eta = 1.0;
    std::vector<double> psi_radii;  // empty: R/4, R/2, 3R/4, R
};

/// Fitted parameters use the equality-case orientation:
/// φ(x) ≈ |T(x - z)|²/2 + c, and f(x) ≈ ξ ϱ(|T(x - z)|²).
struct StabilityFit {
    Vec z;
    double c = 0.0;
    double xi = 1.0;
    Mat T;
    double eps = 0.0;      // clamped deficit
    double eps_raw = 0.0;  // unclamped
    double R_eps = 0.0;
    bool R_capped = false;
    double l1_primal = 0.0;
    double l1_dual = 0.0;
    double quad_tol = 0.0;  // interpolation error bound × volume of the fit domain
    std::vector<PsiRow> psi_measure;
    bool stagnated = false;
    std::vector<std::string> notes;
};

/// l1_primal = ∫_{R B^n} | |x|²/2 + c - φ(T^{-1}x + z) | dx and
/// l1_dual   = ∫_{R B^n} | |y|²/2 - c - ψ(T y + z) | dy with ψ = ℒ_zφ.
StabilityFit stability_fit_legendre(const NormalizedWeight& w, const GridField& phi, const FitOptions& opt = {});

/// Both errors are normalized by ∫ r^{n-1} ϱ(r²) dr:
///   l1_primal = ∫ |ϱ(|x|²) - f(T^{-1}x + z)/ξ| dx
///   l1_dual   = ∫ |ϱ(|x|²) - ξ g(T x + z)| dx
/// z is replaced by the Fradelizi-Meyer center when the centroid of K_{f,z}
/// is off by more than tol·diam.
StabilityFit stability_fit_functional(const NormalizedWeight& w, const GridField& f, const GridField& g, const Vec& z,
                                      const FitOptions& opt = {});

struct DensityFit {
    double xi = 1.0;
    Mat T;
    Vec z;
    double l1 = 0.0;  // ∫ |ϱ(k|x|²/2) - f(T^{-1}x + z)/ξ| dx
    bool converged = false;
};

/// Closest member of the extremal family ξ ϱ(k|T(x - z)|²/2), k = 2 (square)
/// or 1 (half-square), in L1 over the box where ϱ(k|x|²/2) is non-negligible.
DensityFit fit_extremal_density(const NormalizedWeight& w, const GridField& f, const Vec& z0, Convention c,
                                bool fit_center, int cells = 0, int max_evals = 6000);

struct CenterCheckReport {
    double lhs = 0.0;  // |h(0) - ω(0)|
    double rhs = 0.0;  // 250 n ε^{1/(n+1)} ω(0)
    double eps_measured = 0.0;
    double eps_in = 0.0;
    bool pass = false;
    bool in_range = false;  // eps_in < (250n)^{-(n+1)}
};

/// Checks ∫|r|^{n-1}|h - ω| <= eps_in ∫|r|^{n-1} ω over R, then compares
/// both sides of |h(0) - ω(0)| <= 250 n eps_in^{1/(n+1)} ω(0).
CenterCheckReport logconcave_center_check(const Fn1& h, const Fn1& omega, int n, double eps_in);

struct CenterSearch {
    long pairs = 0;
    long violations = 0;
    long rejected = 0;  // draws whose ε exceeded the cap
    double worst_ratio = 0.0;  // max lhs / rhs
    std::uint64_t seed = 0;
};

/// Random log-concave pairs (h, ω), n in 1..3, with measured ε <= eps_cap.
CenterSearch center_bound_search(long pairs, std::uint64_t seed, double eps_cap = 1e-4);

struct ScanPoint {
    double delta = 0.0;
    double eps = 0.0;
    double eps_raw = 0.0;
    double R = 0.0;
    double l1_primal = 0.0;
    double l1_dual = 0.0;
    double distance = 0.0;  // relative L1 distance of ϱ∘φ to the extremal family
    double exponent_running = 0.0;  // NaN until two usable points
};

struct ScanCurve {
    std::string family;
    int n = 2;
    std::vector<ScanPoint> points;  // ascending δ
    double fitted_exponent = 0.0;
    double fitted_constant = 0.0;
    bool eps_monotone = true;
    bool distance_monotone = true;
    bool degenerate = false;
    double bound_constant = 0.0;  // C with d <= C ε^{1/(129n²)} at the largest δ
    bool bound_ok = true;
};

struct ScanOptions {
    int grid = 0;  // nodes per axis, 0 for the dimension default
    double half_width = 6.0;
    FitOptions fit;
};

/// Families: "truncated-quadratic" (φ = |x|²/2 on |x| <= r, δ = e^{-r²/2}),
/// "bump" (φ = |x|²/2 + δ e^{-|x - e1|²/2}), "quadratic" (φ = ⟨x, (I + δS)x⟩/2).
ScanCurve stability_scan(const std::string& family, int n, int steps, const ScanOptions& opt = {});

int default_grid_size(int n);

}  // namespace santalo
