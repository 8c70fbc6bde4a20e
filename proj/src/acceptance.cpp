#include "santalo/acceptance.hpp"

#include "santalo/functional.hpp"
#include "santalo/geometry.hpp"
#include "santalo/oracles.hpp"
#include "santalo/quad.hpp"
#include "santalo/stability.hpp"
#include "santalo/transform.hpp"
#include "santalo/weights.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <functional>
#include <numbers>
#include <sstream>

namespace santalo {

namespace {

constexpr double kPi = std::numbers::pi;

std::string fmt(const char* f, ...)
{
    char buf[512];
    va_list ap;
    va_start(ap, f);
    std::vsnprintf(buf, sizeof buf, f, ap);
    va_end(ap);
    return buf;
}

CriterionResult start(int id, std::string name)
{
    CriterionResult r;
    r.id = id;
    r.name = std::move(name);
    return r;
}

// Uniform draws from the counter-based stream, one counter per draw.
class Draws {
public:
    explicit Draws(std::uint64_t seed) : rng_(seed) {}
    double uniform() { return rng_.uniform(k_++); }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    Vec point(int n, double lo, double hi)
    {
        Vec p(n);
        for (int i = 0; i < n; ++i) p[i] = uniform(lo, hi);
        return p;
    }
    Mat spd(int n, double spread)
    {
        Mat M(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) M(i, j) = uniform(-spread, spread);
        return M.transpose() * M + 0.5 * Mat::Identity(n, n);
    }

private:
    CounterRng rng_;
    std::uint64_t k_ = 0;
};

double sq(std::span<const double> x)
{
    double s = 0.0;
    for (double v : x) s += v * v;
    return s;
}

Vec v2(double a, double b)
{
    Vec v(2);
    v << a, b;
    return v;
}

// 1. Polar involution on random polygons and 3D polytopes.
CriterionResult polar_involution(const AcceptanceOptions& opt)
{
    CriterionResult r = start(1, "polar involution");
    Draws d(opt.seed + 1);
    const int polygons = opt.quick ? 20 : 100, polytopes = opt.quick ? 5 : 20;
    double worst = 0.0;
    for (int i = 0; i < polygons + polytopes; ++i) {
        const int n = i < polygons ? 2 : 3;
        std::vector<Vec> pts;
        for (int k = 0; k < (n == 2 ? 12 : 14); ++k) pts.push_back(d.point(n, -1.0, 1.0));
        const ConvexBody K = ConvexBody::polytope(pts);
        const Vec z = body_measures(K).centroid;
        const ConvexBody back = polar_body(polar_body(K, z), z);
        worst = std::max(worst, vertex_hausdorff(back.as_polytope().vertices, K.as_polytope().vertices));
    }
    r.pass = worst < 1e-9;
    r.detail = fmt("%d polygons, %d polytopes, max Hausdorff %.3e", polygons, polytopes, worst);
    return r;
}

// 2. Volume products of the square, the regular triangle and the disk.
CriterionResult exact_products(const AcceptanceOptions&)
{
    CriterionResult r = start(2, "exact volume products");
    std::vector<Vec> square{v2(1, 1), v2(-1, 1), v2(-1, -1), v2(1, -1)};
    std::vector<Vec> triangle;
    for (int k = 0; k < 3; ++k) {
        const double a = kPi / 2 + 2 * kPi * k / 3;
        triangle.push_back(v2(std::cos(a) + 0.3, std::sin(a) - 0.2));
    }
    const double ps = santalo_point(ConvexBody::polytope(square), 1e-11).product;
    const double pt = santalo_point(ConvexBody::polytope(triangle), 1e-11).product;
    const double pd = santalo_point(ConvexBody::radial_ball(2, 1.0, 512), 1e-11).product;
    const double bound = kPi * kPi;
    using namespace exact;
    std::vector<Point2> sq_exact{from_double(1, 1), from_double(-1, 1), from_double(-1, -1), from_double(1, -1)};
    const bool exact8 = area(sq_exact) * area(polar(sq_exact, from_double(0, 0))) == Rational(8);
    r.pass = std::abs(ps - 8.0) <= 1e-9 && std::abs(pt - 6.75) <= 1e-9 && std::abs(pd - bound) <= 1e-4 &&
             ps < bound && pt < bound && exact8;
    r.detail = fmt("square %.12f, triangle %.12f, disk %.8f (pi^2 %.8f), exact square %s", ps, pt, pd, bound,
                   exact8 ? "8" : "mismatch");
    return r;
}

// Zooming 9×9 grid search for the minimizer of z -> V(K^z).
Vec grid_search_santalo(const ConvexBody& K)
{
    Vec best = body_measures(K).centroid;
    double span = 0.25 * K.diameter();
    for (int level = 0; level < 30; ++level) {
        const Vec center = best;
        double best_val = kInf;
        for (int i = -4; i <= 4; ++i)
            for (int j = -4; j <= 4; ++j) {
                const Vec z = center + v2(i, j) * (span / 4);
                if (K.interior_margin(z) <= 0) continue;
                const double v = body_measures(polar_body(K, z)).volume;
                if (v < best_val) best_val = v, best = z;
            }
        span /= 3;
    }
    return best;
}

// 3. Santaló point of random triangles.
CriterionResult triangle_santalo(const AcceptanceOptions& opt)
{
    CriterionResult r = start(3, "triangle Santalo point");
    Draws d(opt.seed + 3);
    const int count = opt.quick ? 10 : 50;
    double worst = 0.0, worst_oracle = 0.0;
    int done = 0;
    while (done < count) {
        std::vector<Vec> pts{d.point(2, -1, 1), d.point(2, -1, 1), d.point(2, -1, 1)};
        const double area2 = std::abs((pts[1] - pts[0])[0] * (pts[2] - pts[0])[1] - (pts[1] - pts[0])[1] * (pts[2] - pts[0])[0]);
        if (area2 < 0.05) continue;  // skip slivers
        const ConvexBody K = ConvexBody::polytope(pts);
        const Vec centroid = (pts[0] + pts[1] + pts[2]) / 3.0;
        const Vec z = santalo_point(K, 1e-10).z;
        worst = std::max(worst, (z - centroid).norm());
        worst_oracle = std::max(worst_oracle, (grid_search_santalo(K) - z).norm());
        ++done;
    }
    r.pass = worst < 1e-6 && worst_oracle < 1e-6;
    r.detail = fmt("%d triangles, max |z - centroid| %.3e, max |z - grid search| %.3e", count, worst, worst_oracle);
    return r;
}

// 4. Legendre self-duality, cube indicator, fast vs brute 1D conjugate.
CriterionResult legendre_duality(const AcceptanceOptions& opt)
{
    CriterionResult r = start(4, "Legendre self-duality");
    const auto phi = GridField::sample(GridSpec::cube(2, -4, 4, 129), [](std::span<const double> x) { return 0.5 * sq(x); });
    const auto psi = legendre(phi, Vec::Zero(2));
    double err_q = 0.0;
    for (std::size_t i = 0; i < psi.size(); ++i) {
        const Vec y = psi.grid().node(i);
        if (y.cwiseAbs().maxCoeff() <= 2.0) err_q = std::max(err_q, std::abs(psi[i] - 0.5 * y.squaredNorm()));
    }
    const auto ind = GridField::sample(GridSpec::cube(2, -2, 2, 33), [](std::span<const double> x) {
        for (double v : x)
            if (std::abs(v) > 1.0 + 1e-12) return kInf;
        return 0.0;
    });
    const auto l1 = legendre(ind, Vec::Zero(2));
    const double h = ind.grid().step(0);
    double err_c = 0.0;
    for (std::size_t i = 0; i < l1.size(); ++i) err_c = std::max(err_c, std::abs(l1[i] - l1.grid().node(i).lpNorm<1>()));

    Draws d(opt.seed + 4);
    const int fields = opt.quick ? 50 : 200;
    int mismatches = 0, bad_fields = 0;
    for (int rep = 0; rep < fields; ++rep) {
        const int n = 1 + static_cast<int>(60 * d.uniform()), m = 1 + static_cast<int>(60 * d.uniform());
        std::vector<double> u(n), F(n), v(m), fast(m), slow(m);
        double acc = d.uniform(-1, 1);
        for (int i = 0; i < n; ++i) u[i] = (acc += 0.1 + d.uniform());
        acc = d.uniform(-1, 1);
        for (int j = 0; j < m; ++j) v[j] = (acc += 0.1 + d.uniform());
        for (int i = 0; i < n; ++i) F[i] = d.uniform() < 0.2 ? kInf : d.uniform(-3, 3);
        conjugate_1d(u, F, v, fast);
        oracle::conjugate_1d_brute(u, F, v, slow);
        int here = 0;
        for (int j = 0; j < m; ++j) here += fast[j] != slow[j];
        mismatches += here;
        bad_fields += here > 0;
    }
    r.pass = err_q < 0.01 && err_c < 2 * h && mismatches == 0;
    r.detail = fmt("quadratic sup-error %.3e, indicator sup-error %.3e (2h %.3e), %d/%d fields exact", err_q, err_c,
                   2 * h, fields - bad_fields, fields);
    return r;
}

GridField random_convex(Draws& d, const GridSpec& grid)
{
    const int n = grid.dim();
    std::vector<Vec> slopes;
    std::vector<double> offsets;
    for (int k = 0; k < 6; ++k) {
        slopes.push_back(d.point(n, -1.5, 1.5));
        offsets.push_back(d.uniform(-1, 1));
    }
    const double q = d.uniform(0.0, 1.0);
    return GridField::sample(grid, [&](std::span<const double> x) {
        const Eigen::Map<const Vec> xv(x.data(), n);
        double m = -kInf;
        for (std::size_t k = 0; k < slopes.size(); ++k) m = std::max(m, slopes[k].dot(xv) + offsets[k]);
        return m + q * xv.squaredNorm();
    });
}

// 5. Fenchel-Young gap of random convex fields and their conjugates.
CriterionResult fenchel_young(const AcceptanceOptions& opt)
{
    CriterionResult r = start(5, "Fenchel-Young gap");
    Draws d(opt.seed + 5);
    const int count = opt.quick ? 20 : 100;
    const GridSpec grid = GridSpec::cube(2, -2, 2, 17);
    double worst = kInf;
    for (int i = 0; i < count; ++i) {
        const GridField phi = random_convex(d, grid);
        const Vec z = d.point(2, -0.5, 0.5);
        const GridField psi = legendre(phi, z);
        worst = std::min(worst, oracle::fenchel_young_gap_brute(phi, psi, z));
    }
    r.pass = worst >= -1e-9;
    r.detail = fmt("%d fields, min gap %.3e", count, worst);
    return r;
}

GridField half_quadratic(int n, double half_width, int per_axis)
{
    return GridField::sample(GridSpec::cube(n, -half_width, half_width, per_axis),
                             [](std::span<const double> x) { return 0.5 * sq(x); });
}

// 6. Functional product at the Gaussian extremal.
CriterionResult gaussian_product(const AcceptanceOptions&)
{
    CriterionResult r = start(6, "functional product at Gaussian");
    const auto w = validate_weight(WeightSpec::exp());
    const SantaloReport at128 = functional_product(w, half_quadratic(2, 6.0, 128), Vec::Zero(2), Convention::HalfSquare);
    const double target = 4 * kPi * kPi;
    std::vector<double> defs;
    for (int m : {33, 65, 129})
        defs.push_back(std::abs(functional_product(w, half_quadratic(2, 6.0, m), Vec::Zero(2), Convention::HalfSquare).deficit_minus));
    const bool shrinking = defs[1] < defs[0] && defs[2] < defs[1];
    r.pass = std::abs(at128.product / target - 1.0) < 5e-3 && std::abs(at128.deficit_minus) < 1e-3 && shrinking;
    r.detail = fmt("product %.6f vs (2pi)^2 %.6f, deficit %.3e at 128; |deficit| at 33/65/129: %.2e %.2e %.2e",
                   at128.product, target, at128.deficit_minus, defs[0], defs[1], defs[2]);
    return r;
}

// 7. ∫f = n V(K_f) on random log-concave fields; K_g ⊂ c K_f° on Legendre pairs.
CriterionResult kf_identity(const AcceptanceOptions& opt)
{
    CriterionResult r = start(7, "Kf identity and polar inclusion");
    Draws d(opt.seed + 7);
    const int per_dim = opt.quick ? 3 : 10;
    double worst = 0.0;
    for (int n = 2; n <= 3; ++n) {
        for (int i = 0; i < per_dim; ++i) {
            const Mat A = d.spd(n, 0.6);
            const Vec b = d.point(n, -0.3, 0.3), u = d.point(n, -1, 1);
            const double kink = d.uniform(0.0, 0.5);
            const GridField f = GridField::sample(GridSpec::cube(n, -8.0, 8.0, n == 2 ? 129 : 49),
                                                  [&](std::span<const double> x) {
                                                      const Eigen::Map<const Vec> v(x.data(), n);
                                                      return std::exp(-(0.5 * v.dot(A * v) + b.dot(v) + kink * std::abs(u.dot(v))));
                                                  });
            const Vec z = d.point(n, -0.2, 0.2);
            const double integral = integrate_grid(f, [](double v) { return v; });
            const double nv = n * body_measures(ball_body(f, z)).volume;
            worst = std::max(worst, std::abs(integral - nv) / integral);
        }
    }
    double margin = -kInf;
    Mat A(2, 2);
    A << 1.2, 0.3, 0.3, 0.7;
    const Vec b = v2(0.2, -0.1);
    const Mat Ai = A.inverse();
    for (Convention c : {Convention::Square, Convention::HalfSquare}) {
        const double k = c == Convention::Square ? 2.0 : 1.0;
        for (const auto& spec : {WeightSpec::exp(), WeightSpec::linear(0.5), WeightSpec::power(2.0)}) {
            const auto w = validate_weight(spec);
            // f = ϱ∘(kφ) and g = ϱ∘(kℒφ) for φ = ⟨x, Ax⟩/2 + ⟨b, x⟩.
            const FnN f = [&](std::span<const double> x) {
                const Vec v = v2(x[0], x[1]);
                return w.rho(k * (0.5 * v.dot(A * v) + b.dot(v)));
            };
            const FnN g = [&](std::span<const double> y) {
                const Vec v = v2(y[0] - b[0], y[1] - b[1]);
                return w.rho(k * 0.5 * v.dot(Ai * v));
            };
            margin = std::max(margin, polar_inclusion_margin(w, ball_body(f, 2, Vec::Zero(2)), ball_body(g, 2, Vec::Zero(2)), c));
        }
    }
    r.pass = worst < 1e-3 && margin <= 1e-6;
    r.detail = fmt("%d fields, max |int f - nV(K_f)|/int f %.3e; max inclusion margin %.3e over 6 pairs", 2 * per_dim,
                   worst, margin);
    return r;
}

// 8. Borell suite: random valid triples, equality fit, perturbation sweep.
CriterionResult borell_suite(const AcceptanceOptions& opt)
{
    CriterionResult r = start(8, "Borell suite");
    Draws d(opt.seed + 8);
    const int triples = opt.quick ? 200 : 1000;
    double worst_ratio = 0.0, worst_margin = kInf;
    int invalid = 0;
    for (int i = 0; i < triples; ++i) {
        // M(e^s) log-concave; F = a M(b·)^{1+u} e^{-κt}, G = M(·/b)/a keeps the hypothesis.
        const double q = 2.0 * d.uniform(), p = 0.5 + 1.5 * d.uniform(), c = 0.5 + d.uniform();
        const double a = std::exp(d.uniform(-1, 1)), b = std::exp(d.uniform(-1, 1));
        const double kappa = d.uniform(), u = 0.5 * d.uniform();
        const Fn1 M = [=](double t) { return std::pow(t, q) * std::exp(-c * std::pow(t, p)); };
        const double peak = M(std::pow(q / (c * p) > 0 ? q / (c * p) : 1.0, 1.0 / p));
        const Fn1 F = [=](double t) { return a * peak * std::pow(M(b * t) / peak, 1.0 + u) * std::exp(-kappa * t); };
        const Fn1 G = [=](double t) { return M(t / b) / a; };
        const BorellReport rep = borell_check(M, F, G);
        if (rep.hypothesis_margin < -1e-9) {
            ++invalid;
            continue;
        }
        worst_margin = std::min(worst_margin, rep.hypothesis_margin);
        worst_ratio = std::max(worst_ratio, rep.ratio);
    }
    const Fn1 M = [](double t) { return t * std::exp(-t * t); };
    const double a = 2.0, b = 3.0;
    const BorellReport fit = borell_fit(M, [&](double t) { return a * M(b * t); }, [&](double t) { return M(t / b) / a; });
    // The fit reports (a', b') with a' F(b' t) ≈ M(t), so F = a M(b·) gives (1/a, 1/b).
    const bool fit_ok = std::abs(fit.fit_a - 1 / a) < 1e-3 && std::abs(fit.fit_b - 1 / b) < 1e-3 && fit.l1_f < 1e-3 &&
                        fit.l1_g < 1e-3;
    const Fn1 E = [](double t) { return std::exp(-t); };
    double prev_l1 = kInf, prev_ratio = 0.0;
    bool sweep_ok = true;
    std::string sweep;
    for (double delta : {0.2, 0.1, 0.05, 0.025}) {
        const BorellReport s = borell_fit(E, [&](double t) { return E(t) * (1.0 + delta * std::sin(t)) / (1.0 + delta); }, E);
        sweep_ok = sweep_ok && s.hypothesis_margin >= -1e-9 && s.ratio < 1.0 && s.ratio > prev_ratio && s.l1_f < prev_l1;
        sweep += fmt(" %.2e", s.l1_f);
        prev_l1 = s.l1_f;
        prev_ratio = s.ratio;
    }
    r.pass = invalid == 0 && worst_ratio <= 1.0 + 1e-9 && fit_ok && sweep_ok;
    r.detail = fmt("%d triples (%d invalid), max ratio %.12f; fit a=%.6f b=%.6f l1 %.1e/%.1e; sweep l1:%s", triples,
                   invalid, worst_ratio, 1 / fit.fit_a, 1 / fit.fit_b, fit.l1_f, fit.l1_g, sweep.c_str());
    return r;
}

// 9. Adversarial search for the log-concave center bound.
CriterionResult center_bound(const AcceptanceOptions& opt)
{
    CriterionResult r = start(9, "log-concave center search");
    const long pairs = opt.quick ? 2000 : 10000;
    const CenterSearch s = center_bound_search(pairs, opt.seed + 9);
    r.pass = s.pairs == pairs && s.violations == 0;
    r.detail = fmt("%ld pairs (%ld draws rejected by eps cap), %ld violations, worst lhs/rhs %.3e", s.pairs, s.rejected,
                   s.violations, s.worst_ratio);
    return r;
}

// 10. Sandwich implication on random polygons between E and (1 + μ)E.
CriterionResult sandwich(const AcceptanceOptions& opt)
{
    CriterionResult r = start(10, "sandwich implication");
    Draws d(opt.seed + 10);
    const int count = opt.quick ? 20 : 100;
    int hyp = 0, counter = 0;
    for (int i = 0; i < count; ++i) {
        const Mat A = d.spd(2, 0.5);
        const double mu = d.uniform(0.05, 0.3);
        const Mat L = sym_inv_sqrt(A);  // maps the unit circle onto ∂E
        const int vertices = 96;
        std::vector<Vec> pts;
        for (int k = 0; k < vertices; ++k) {
            const double t = 2 * kPi * (k + d.uniform(-0.3, 0.3)) / vertices;
            const double s = d.uniform(1.0, 1.0 + (i % 3 == 2 ? 1.5 : 1.0) * mu);  // every third overshoots
            pts.push_back(s * (L * v2(std::cos(t), std::sin(t))));
        }
        const ConvexBody K0 = ConvexBody::polytope(pts);
        const Vec c = body_measures(K0).centroid;
        const ConvexBody K = K0.translated(-c);
        const SandwichReport rep = sandwich_check({K, ConvexBody::ellipsoid(Vec::Zero(2), A), -c, mu});
        hyp += rep.hypothesis_ok;
        counter += rep.hypothesis_ok && !rep.conclusion_ok;
    }
    r.pass = counter == 0 && hyp > 0;
    r.detail = fmt("%d instances, %d with hypothesis, %d counterexamples", count, hyp, counter);
    return r;
}

// 11. Equality-manifold recovery by the stability fits.
CriterionResult fits(const AcceptanceOptions& opt)
{
    CriterionResult r = start(11, "stability fits recover equality");
    const auto w = validate_weight(WeightSpec::exp());
    Mat A(2, 2);
    A << 1.5, 0.3, 0.3, 0.7;
    const auto phi = GridField::sample(
        GridSpec::cube(2, -6, 6, 128),
        [&](std::span<const double> x) {
            const Vec v = v2(x[0], x[1]);
            return 0.5 * v.dot(A * v);
        },
        ConvexFlag::KnownConvex);
    const StabilityFit lf = stability_fit_legendre(w, phi);
    const double terr = spectral_norm(lf.T - sym_sqrt(A));
    bool ok = terr < 1e-3 && lf.l1_primal < 10 * lf.quad_tol;
    r.detail = fmt("quadratic: |T - A^1/2| %.3e, l1 %.3e < 10 x quad_tol %.3e", terr, lf.l1_primal, lf.quad_tol);
    if (!opt.quick) {
        Mat T0 = Mat::Zero(2, 2);
        T0(0, 0) = 2.0;
        T0(1, 1) = 0.5;
        const auto grid = GridSpec::cube(2, -12.0, 12.0, 961);
        const auto f = GridField::sample(grid, [](std::span<const double> x) {
            return std::exp(-(4.0 * x[0] * x[0] + 0.25 * x[1] * x[1]));
        });
        const auto g = GridField::sample(grid, [](std::span<const double> x) {
            return std::exp(-(0.25 * x[0] * x[0] + 4.0 * x[1] * x[1]));
        });
        const StabilityFit ff = stability_fit_functional(w, f, g, Vec::Zero(2));
        const double ferr = spectral_norm(ff.T - T0);
        ok = ok && ferr < 1e-3;
        r.detail += fmt("; Gaussian pair: |T - T0| %.3e", ferr);
    }
    r.pass = ok;
    return r;
}

// 12. Scans on the truncation and bump families.
CriterionResult scans(const AcceptanceOptions& opt)
{
    CriterionResult r = start(12, "scan sanity");
    if (opt.quick) {
        r.skipped = true;
        r.pass = true;
        r.detail = "not in the quick subset";
        return r;
    }
    bool ok = true;
    for (const char* family : {"truncated-quadratic", "bump"}) {
        const ScanCurve c = stability_scan(family, 2, 6);
        const ScanPoint &lo = c.points.front(), &hi = c.points.back();
        const bool to_zero = lo.eps < 0.1 * hi.eps && lo.distance < 0.1 * hi.distance;
        ok = ok && !c.degenerate && c.eps_monotone && c.distance_monotone && to_zero && c.fitted_exponent > 0 && c.bound_ok;
        r.detail += fmt("%s%s: eps %.2e..%.2e, distance %.2e..%.2e, a %.3f, C %.3f, bound %s", r.detail.empty() ? "" : "; ",
                        family, lo.eps, hi.eps, lo.distance, hi.distance, c.fitted_exponent, c.bound_constant,
                        c.bound_ok ? "holds" : "fails");
    }
    r.pass = ok;
    return r;
}

// 13. Ψ measurement: spike ball and convex fields.
CriterionResult psi(const AcceptanceOptions&)
{
    CriterionResult r = start(13, "Psi measurement");
    const auto w = validate_weight(WeightSpec::exp());
    const double r0 = 0.5;
    const auto spike = GridField::sample(GridSpec::cube(2, -4.0, 4.0, 257), [=](std::span<const double> x) {
        const double dx = x[0] - 1.5, dy = x[1];
        return dx * dx + dy * dy <= r0 * r0 ? kInf : 0.5 * sq(x);
    });
    const double measured = psi_measure(spike, w, 1e-4, {2.5})[0].measure;
    const double ball = kPi * r0 * r0;
    Mat A(2, 2);
    A << 1.0, 0.2, 0.2, 2.0;
    const auto convex = GridField::sample(
        GridSpec::cube(2, -4, 4, 64),
        [&](std::span<const double> x) {
            const Vec v = v2(x[0], x[1]);
            return 0.5 * v.dot(A * v);
        },
        ConvexFlag::KnownConvex);
    double convex_measure = 0.0;
    for (const PsiRow& row : psi_measure(convex, w, 1e-4, {1.0, 2.0, 4.0})) convex_measure += row.measure;
    r.pass = std::abs(measured / ball - 1.0) < 0.1 && convex_measure == 0.0;
    r.detail = fmt("spike V(Psi) %.5f vs V(r0 B) %.5f (%.2f%%), convex V(Psi) %g", measured, ball,
                   100 * (measured / ball - 1.0), convex_measure);
    return r;
}

}  // namespace

double criterion_time_limit(int id)
{
    switch (id) {
    case 1: return 5.0;
    case 9: return 30.0;
    case 12: return 60.0;
    default: return 0.0;
    }
}

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opt)
{
    using Fn = std::function<CriterionResult(const AcceptanceOptions&)>;
    const std::vector<Fn> all{polar_involution, exact_products, triangle_santalo, legendre_duality, fenchel_young,
                              gaussian_product, kf_identity,   borell_suite,     center_bound,     sandwich,
                              fits,             scans,         psi};
    std::vector<CriterionResult> out;
    for (std::size_t i = 0; i < all.size(); ++i) {
        const int id = static_cast<int>(i) + 1;
        if (!opt.only.empty() && std::find(opt.only.begin(), opt.only.end(), id) == opt.only.end()) continue;
        const auto t0 = std::chrono::steady_clock::now();
        CriterionResult r;
        try {
            r = all[i](opt);
        } catch (const std::exception& e) {
            r = start(id, "criterion " + std::to_string(id));
            r.detail = std::string("error: ") + e.what();
        }
        r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        const double limit = criterion_time_limit(id);
        if (limit > 0 && !r.skipped && r.seconds > limit) {
            r.pass = false;
            r.detail += fmt(" [over the %.0f s limit]", limit);
        }
        out.push_back(std::move(r));
    }
    return out;
}

std::string acceptance_report(const std::vector<CriterionResult>& results, const AcceptanceOptions& opt)
{
    std::ostringstream s;
    s << "santalo acceptance (" << (opt.quick ? "quick" : "full") << ", seed " << opt.seed << ", rng "
      << CounterRng::name << ")\n";
    int failed = 0;
    for (const CriterionResult& r : results) {
        const char* status = r.skipped ? "SKIP" : r.pass ? "PASS" : "FAIL";
        failed += !r.pass;
        s << fmt("[%s] %2d %-34s %s\n", status, r.id, r.name.c_str(), r.detail.c_str());
    }
    s << (failed == 0 ? "all criteria passed\n" : fmt("%d criteria failed\n", failed));
    return s.str();
}

}  // namespace santalo
