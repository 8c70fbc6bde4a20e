#include "santalo/functional.hpp"

#include "santalo/optimize.hpp"
#include "santalo/parallel.hpp"
#include "santalo/transform.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace santalo {

namespace {

// ϱ∘φ scale: the square convention composes with 2φ.
double convention_factor(Convention c) { return c == Convention::Square ? 2.0 : 1.0; }

double rho_of(const NormalizedWeight& w, double t) { return is_inf(t) ? 0.0 : w.rho(t); }

void require_density(const GridField& f)
{
    for (double v : f.values()) require(std::isfinite(v) && v >= 0.0, "field must be finite and nonnegative");
}

// Exact integral of r^{n-1} f(z + r u) over the part of the ray inside the box:
// the interpolant is a polynomial of degree <= n on each cell, so 4-point
// Gauss-Legendre per cell segment is exact up to rounding.
double ray_moment_grid(const GridField& f, const Vec& z, const Vec& u)
{
    static const auto gl = [] {
        std::pair<std::vector<double>, std::vector<double>> p;
        gauss_legendre(4, p.first, p.second);
        return p;
    }();
    const GridSpec& g = f.grid();
    const int n = g.dim();
    double r_max = kInf;
    for (int k = 0; k < n; ++k) {
        if (u[k] > 0.0) r_max = std::min(r_max, (g.hi[k] - z[k]) / u[k]);
        else if (u[k] < 0.0) r_max = std::min(r_max, (g.lo[k] - z[k]) / u[k]);
    }
    if (!(r_max > 0.0)) return 0.0;
    std::vector<double> cuts{0.0, r_max};
    for (int k = 0; k < n; ++k) {
        if (u[k] == 0.0) continue;
        for (int i = 0; i < g.shape[k]; ++i) {
            const double r = (g.coord(k, i) - z[k]) / u[k];
            if (r > 0.0 && r < r_max) cuts.push_back(r);
        }
    }
    std::sort(cuts.begin(), cuts.end());
    double total = 0.0;
    Vec x(n);
    for (std::size_t s = 0; s + 1 < cuts.size(); ++s) {
        const double a = cuts[s], b = cuts[s + 1];
        if (b - a <= 0.0) continue;
        const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
        double part = 0.0;
        for (std::size_t q = 0; q < gl.first.size(); ++q) {
            const double r = mid + half * gl.first[q];
            x = z + r * u;
            const double v = f.eval(x);
            if (std::isfinite(v)) part += gl.second[q] * std::pow(r, n - 1) * v;
        }
        total += half * part;
    }
    return total;
}

ConvexBody radial_from_moments(SphereGrid grid, const std::vector<double>& moments, int n)
{
    std::vector<double> radii(moments.size());
    for (std::size_t i = 0; i < moments.size(); ++i) {
        if (!(moments[i] > 0.0) || !std::isfinite(moments[i])) throw DomainError("unbounded/degenerate radial");
        radii[i] = std::pow(moments[i], 1.0 / n);
    }
    return ConvexBody::radial(std::move(grid), std::move(radii), Vec::Zero(n));
}

template <class Body>
CenterResult fixed_point_center(Body body_at, Vec z, double tol, int max_iter)
{
    auto centroid_at = [&](const Vec& p) { return body_measures(body_at(p)).centroid; };
    const int n = static_cast<int>(z.size());
    Vec c = centroid_at(z);
    double norm = c.norm();
    // Broyden model of the centroid map; B = -2I makes the first step z + c/2.
    Mat B = -2.0 * Mat::Identity(n, n);
    double sigma = 1.0;
    int it = 0;
    while (norm >= tol) {
        if (it >= max_iter) throw NoConvergence("no convergence", z);
        ++it;
        Vec d = B.fullPivLu().solve(-c);
        if (!d.allFinite() || d.dot(c) <= 0.0) {
            B = -2.0 * Mat::Identity(n, n);
            d = 0.5 * c;
        }
        const Vec dz = sigma * d;
        const Vec trial = z + dz;
        Vec ct;
        bool ok = true;
        try {
            ct = centroid_at(trial);
        } catch (const DomainError&) {
            ok = false;  // stepped off the support
        }
        if (ok) B += ((ct - c) - B * dz) * dz.transpose() / dz.squaredNorm();
        if (ok && ct.norm() < norm) {
            z = trial;
            c = ct;
            norm = ct.norm();
            sigma = 1.0;
        } else {
            sigma *= 0.5;
            if (sigma < 1e-12) throw NoConvergence("no convergence", z);
        }
    }
    return {z, norm, it};
}

struct Support1D {
    double lo = 0.0, hi = 0.0;
};

// Smallest interval of [0, ∞) outside of which fn stays below 1e-12 of its peak,
// probed on a geometric grid from 1e-8 to 1e8.
Support1D effective_support(const Fn1& fn)
{
    constexpr int kProbe = 3201;
    std::vector<double> t(kProbe), v(kProbe);
    double peak = 0.0;
    for (int i = 0; i < kProbe; ++i) {
        t[i] = std::pow(10.0, -8.0 + 16.0 * i / (kProbe - 1));
        v[i] = fn(t[i]);
        require(v[i] >= 0.0 && !std::isnan(v[i]), "function must be nonnegative");
        peak = std::max(peak, v[i]);
    }
    require(peak > 0.0, "function vanishes");
    int first = kProbe - 1, last = 0;
    for (int i = 0; i < kProbe; ++i)
        if (v[i] >= 1e-12 * peak) {
            first = std::min(first, i);
            last = std::max(last, i);
        }
    return {t[std::max(0, first - 1)], t[std::min(kProbe - 1, last + 1)]};
}

double integral_half_line(const Fn1& fn, double scale)
{
    QuadResult r = integrate_to_infinity(fn, 0.0, 0.0, 1e-13, scale, 4000000);
    require(std::isfinite(r.value), "divergent integral");
    if (!r.converged) throw DomainError("divergent integral");
    return r.value;
}

double first_moment(const Fn1& fn, double scale)
{
    return integral_half_line([&](double t) { return t * fn(t); }, scale);
}

}  // namespace

std::string convention_name(Convention c) { return c == Convention::Square ? "square" : "half-square"; }

Convention parse_convention(const std::string& s)
{
    if (s == "square") return Convention::Square;
    if (s == "half-square") return Convention::HalfSquare;
    throw ParseError("unknown convention: " + s);
}

double reference_product(const NormalizedWeight& w, int n, Convention c)
{
    require(n >= 1 && n <= kMaxDim, "dimension must be in 1..4");
    // ∫ϱ(|x|²) = |S^{n-1}| m_n and ∫ϱ(|x|²/2) = 2^{n/2} of that.
    double one = unit_sphere_area(n) * w.moment(n);
    if (c == Convention::HalfSquare) one *= std::pow(2.0, 0.5 * n);
    return one * one;
}

FunctionalPair functional_pair(const NormalizedWeight& w, const GridField& phi, const Vec& z, Convention c,
                               const std::optional<GridSpec>& dual)
{
    require(static_cast<int>(z.size()) == phi.dim(), "center dimension does not match the field");
    const double k = convention_factor(c);
    LegendreResult L = legendre_report(phi, z, dual, LegendreMode::Refined);
    auto compose = [&](double v) { return rho_of(w, is_inf(v) ? v : k * v); };
    FunctionalPair out;
    out.f = phi.map(compose);
    out.g = L.field.map(compose);
    out.psi = std::move(L.field);
    out.boundary_effect_radius = L.boundary_effect_radius;
    return out;
}

SantaloReport functional_product(const NormalizedWeight& w, const GridField& phi, const Vec& z, Convention c,
                                 const std::optional<GridSpec>& dual)
{
    FunctionalPair p = functional_pair(w, phi, z, c, dual);
    auto id = [](double v) { return v; };
    SantaloReport r;
    r.convention = c;
    r.z = z;
    r.int_f = integrate_grid(p.f, id);
    r.int_g = integrate_grid(p.g, id);
    if (!(r.int_f > 0.0) || !(r.int_g > 0.0)) throw DomainError("degenerate pair");
    r.product = r.int_f * r.int_g;
    r.reference = reference_product(w, phi.dim(), c);
    r.deficit_minus = 1.0 - r.product / r.reference;
    r.deficit_plus = r.reference / r.product - 1.0;
    r.boundary_effect_radius = p.boundary_effect_radius;
    return r;
}

double product_hypothesis_check(const NormalizedWeight& w, const GridField& f, const GridField& g, const Vec& z,
                                Convention c)
{
    require(f.dim() == g.dim() && static_cast<int>(z.size()) == f.dim(), "dimension mismatch");
    require_density(f);
    require(std::all_of(g.values().begin(), g.values().end(), [](double v) { return std::isfinite(v) && v >= 0.0; }),
            "field must be finite and nonnegative");
    const int n = f.dim();
    const double scale = c == Convention::Square ? 1.0 : 0.5;
    // Only positive entries matter; precompute their shifted nodes and logs.
    auto collect = [&](const GridField& h, std::vector<double>& pts, std::vector<double>& logs) {
        std::vector<double> x(n);
        for (std::size_t i = 0; i < h.size(); ++i) {
            if (!(h[i] > 0.0)) continue;
            h.grid().node(i, x);
            for (int k = 0; k < n; ++k) pts.push_back(x[k] - z[k]);
            logs.push_back(std::log(h[i]));
        }
    };
    std::vector<double> xf, lf, yg, lg;
    collect(f, xf, lf);
    collect(g, yg, lg);
    std::vector<double> worst(lf.size(), kInf);
    parallel_for(lf.size(), [&](std::size_t i) {
        double m = kInf;
        const double* x = &xf[i * n];
        for (std::size_t j = 0; j < lg.size(); ++j) {
            const double* y = &yg[j * n];
            double ip = 0.0;
            for (int k = 0; k < n; ++k) ip += x[k] * y[k];
            if (ip <= 0.0) continue;
            const double a = w.alpha(scale * ip);
            m = std::min(m, -2.0 * a - lf[i] - lg[j]);
        }
        worst[i] = m;
    });
    return worst.empty() ? kInf : *std::min_element(worst.begin(), worst.end());
}

ConvexBody ball_body(const GridField& f, const Vec& z, const RayOptions& opt)
{
    const int n = f.dim();
    require(static_cast<int>(z.size()) == n, "center dimension does not match the field");
    require_density(f);
    for (int k = 0; k < n; ++k)
        require(z[k] > f.grid().lo[k] && z[k] < f.grid().hi[k], "center not interior");
    SphereGrid grid = make_sphere_grid(n, opt.sphere_size);
    std::vector<double> moments(grid.size());
    parallel_for(grid.size(), [&](std::size_t i) { moments[i] = ray_moment_grid(f, z, grid.directions[i]); });
    return radial_from_moments(std::move(grid), moments, n);
}

ConvexBody ball_body(const FnN& f, int n, const Vec& z, const RayOptions& opt)
{
    require(n >= 1 && n <= kMaxDim, "dimension must be in 1..4");
    require(static_cast<int>(z.size()) == n, "center dimension does not match");
    SphereGrid grid = make_sphere_grid(n, opt.sphere_size);
    std::vector<double> moments(grid.size());
    parallel_for(grid.size(), [&](std::size_t i) {
        const Vec& u = grid.directions[i];
        Vec x(n);
        auto ray = [&](double r) {
            x = z + r * u;
            return std::pow(r, n - 1) * f(std::span<const double>(x.data(), n));
        };
        QuadResult q = integrate_to_infinity(ray, 0.0, 0.0, opt.tol, 1.0);
        moments[i] = q.value;
    });
    return radial_from_moments(std::move(grid), moments, n);
}

Vec field_mean(const GridField& f)
{
    require_density(f);
    const GridSpec& g = f.grid();
    const int n = g.dim();
    // Trapezoid weights: halved on each boundary coordinate.
    Vec acc = Vec::Zero(n);
    double mass = 0.0;
    std::vector<int> idx(n);
    std::vector<double> x(n);
    for (std::size_t i = 0; i < f.size(); ++i) {
        if (f[i] == 0.0) continue;
        g.node(i, x);
        std::size_t rem = i;
        double wgt = 1.0;
        for (int k = n - 1; k >= 0; --k) {
            const int ik = static_cast<int>(rem % g.shape[k]);
            rem /= g.shape[k];
            if (ik == 0 || ik == g.shape[k] - 1) wgt *= 0.5;
        }
        wgt *= f[i];
        mass += wgt;
        for (int k = 0; k < n; ++k) acc[k] += wgt * x[k];
    }
    require(mass > 0.0, "field has zero integral");
    return acc / mass;
}

CenterResult fm_center(const GridField& f, double tol, int max_iter, const RayOptions& opt)
{
    return fixed_point_center([&](const Vec& z) { return ball_body(f, z, opt); }, field_mean(f), tol, max_iter);
}

CenterResult fm_center(const FnN& f, int n, const Vec& z0, double tol, int max_iter, const RayOptions& opt)
{
    return fixed_point_center([&](const Vec& z) { return ball_body(f, n, z, opt); }, z0, tol, max_iter);
}

double polar_inclusion_margin(const NormalizedWeight& w, const ConvexBody& Kf, const ConvexBody& Kg, Convention c)
{
    require(Kg.is_radial(), "K_g must be a radial body");
    const int n = Kf.dim();
    require(Kg.dim() == n, "dimension mismatch");
    double scale = std::pow(w.moment(n), 2.0 / n);
    if (c == Convention::HalfSquare) scale *= 2.0;
    const RadialBody& R = Kg.as_radial();
    std::vector<double> ratio(R.grid.size());
    parallel_for(R.grid.size(), [&](std::size_t i) {
        const Vec& u = R.grid.directions[i];
        ratio[i] = R.radii[i] * Kf.support(u) / scale;
    });
    return *std::max_element(ratio.begin(), ratio.end()) - 1.0;
}

double polar_inclusion_check(const NormalizedWeight& w, const GridField& f, const GridField& g, const Vec& z,
                             Convention c, const RayOptions& opt)
{
    // f lives around z, g around the dual center z as well.
    return polar_inclusion_margin(w, ball_body(f, z, opt), ball_body(g, z, opt), c);
}

BorellReport borell_check(const Fn1& M, const Fn1& F, const Fn1& G)
{
    const Support1D sm = effective_support(M), sf = effective_support(F), sg = effective_support(G);
    const double lo = std::min({sm.lo, sf.lo, sg.lo}), hi = std::max({sm.hi, sf.hi, sg.hi});
    constexpr int kN = 256;
    std::vector<double> t(kN), lF(kN), lG(kN);
    const double llo = std::log(lo), lhi = std::log(hi);
    for (int i = 0; i < kN; ++i) {
        t[i] = std::exp(llo + (lhi - llo) * i / (kN - 1));
        lF[i] = std::log(F(t[i]));
        lG[i] = std::log(G(t[i]));
    }
    std::vector<double> worst(kN, kInf);
    parallel_for(kN, [&](std::size_t i) {
        if (!std::isfinite(lF[i])) return;
        double m = kInf;
        for (int j = 0; j < kN; ++j) {
            if (!std::isfinite(lG[j])) continue;
            const double lm = std::log(M(std::sqrt(t[i] * t[j])));
            m = std::min(m, lm - 0.5 * lF[i] - 0.5 * lG[j]);
        }
        worst[i] = m;
    });
    BorellReport r;
    r.hypothesis_margin = *std::min_element(worst.begin(), worst.end());
    r.int_m = integral_half_line(M, sm.hi / 16.0);
    r.int_f = integral_half_line(F, sf.hi / 16.0);
    r.int_g = integral_half_line(G, sg.hi / 16.0);
    require(r.int_m > 0.0 && r.int_f > 0.0 && r.int_g > 0.0, "integrals must be positive");
    r.ratio = r.int_f * r.int_g / (r.int_m * r.int_m);
    return r;
}

BorellReport borell_fit(const Fn1& M, const Fn1& F, const Fn1& G)
{
    BorellReport r = borell_check(M, F, G);
    const Support1D sm = effective_support(M), sf = effective_support(F);
    const double mean_m = first_moment(M, sm.hi / 16.0) / r.int_m;
    const double mean_f = first_moment(F, sf.hi / 16.0) / r.int_f;
    const double b0 = mean_f / mean_m, a0 = b0 * r.int_m / r.int_f;
    const double scale = sm.hi / 16.0;

    auto l1 = [&](const Fn1& h, double a, double b) {
        auto diff = [&](double t) { return std::abs(a * h(b * t) - M(t)); };
        return integrate_to_infinity(diff, 0.0, 1e-14 * r.int_m, 1e-11, scale, 2000000).value / r.int_m;
    };
    auto objective = [&](const Vec& p) { return l1(F, std::exp(p[0]), std::exp(p[1])); };
    Vec x0(2);
    x0 << std::log(a0), std::log(b0);
    MinimizeResult best = nelder_mead(objective, x0, Vec::Constant(2, 0.1), 1e-14, 1e-10, 4000);
    // A restart from the reported optimum guards against an early collapse.
    MinimizeResult again = nelder_mead(objective, best.x, Vec::Constant(2, 0.01), 1e-14, 1e-10, 4000);
    if (again.value <= best.value) best = again;
    r.fit_a = std::exp(best.x[0]);
    r.fit_b = std::exp(best.x[1]);
    r.l1_f = best.value;
    r.l1_g = l1(G, 1.0 / r.fit_a, 1.0 / r.fit_b);
    r.fitted = true;
    r.stagnated = !best.converged && !again.converged;
    return r;
}

}  // namespace santalo
