#include "santalo/stability.hpp"

#include "santalo/optimize.hpp"
#include "santalo/parallel.hpp"
#include "santalo/transform.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <limits>
#include <numbers>

namespace santalo {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct CellRule {
    std::vector<Vec> x;
    std::vector<double> w;
};

// Midpoint cells of [-R, R]^n clipped to R·B^n: interior cells keep their
// midpoint, boundary cells are sub-sampled at 3^n points.
CellRule ball_cells(int n, double R, int m)
{
    CellRule rule;
    const double h = 2.0 * R / m, vol = std::pow(h, n);
    std::vector<int> idx(n, 0);
    Vec lo(n), mid(n), p(n);
    const int sub = static_cast<int>(std::pow(3, n));
    while (true) {
        double near = 0.0, far = 0.0;
        for (int k = 0; k < n; ++k) {
            lo[k] = -R + idx[k] * h;
            mid[k] = lo[k] + 0.5 * h;
            const double a = lo[k], b = lo[k] + h;
            const double nk = (a <= 0.0 && b >= 0.0) ? 0.0 : std::min(std::abs(a), std::abs(b));
            near += nk * nk;
            far += std::max(a * a, b * b);
        }
        if (far <= R * R) {
            rule.x.push_back(mid);
            rule.w.push_back(vol);
        } else if (near < R * R) {
            for (int s = 0; s < sub; ++s) {
                int code = s;
                for (int k = 0; k < n; ++k) {
                    p[k] = lo[k] + (code % 3 + 0.5) * h / 3.0;
                    code /= 3;
                }
                if (p.squaredNorm() <= R * R) {
                    rule.x.push_back(p);
                    rule.w.push_back(vol / sub);
                }
            }
        }
        int k = 0;
        while (k < n && ++idx[k] == m) idx[k++] = 0;
        if (k == n) break;
    }
    return rule;
}

CellRule box_cells(int n, double L, int m)
{
    CellRule rule;
    const double h = 2.0 * L / m, vol = std::pow(h, n);
    std::vector<int> idx(n, 0);
    Vec x(n);
    while (true) {
        for (int k = 0; k < n; ++k) x[k] = -L + (idx[k] + 0.5) * h;
        rule.x.push_back(x);
        rule.w.push_back(vol);
        int k = 0;
        while (k < n && ++idx[k] == m) idx[k++] = 0;
        if (k == n) break;
    }
    return rule;
}

int default_ball_cells(int n)
{
    static const int table[] = {400, 64, 20, 10};
    return table[n - 1];
}

int default_box_cells(int n)
{
    static const int table[] = {2000, 96, 32, 14};
    return table[n - 1];
}

double eval_at(const GridField& f, const Vec& x) { return f.eval(x); }

// Density fields evaluate to 0 off their box.
double density_at(const GridField& f, const Vec& x)
{
    const double v = f.eval(x);
    return std::isfinite(v) ? v : 0.0;
}

Vec params_of(const Mat& T)
{
    return pack_sym(sym_log(T));
}

Mat matrix_of(const Vec& packed, int n) { return sym_exp(unpack_sym(packed, n)); }

// Trapezoid-weighted mean and covariance of a density field.
void field_moments(const GridField& f, Vec& mean, Mat& cov)
{
    const GridSpec& g = f.grid();
    const int n = g.dim();
    mean = Vec::Zero(n);
    cov = Mat::Zero(n, n);
    double mass = 0.0;
    std::vector<double> x(n);
    for (std::size_t i = 0; i < f.size(); ++i) {
        if (!(f[i] > 0.0)) continue;
        g.node(i, x);
        std::size_t rem = i;
        double wgt = f[i];
        for (int k = n - 1; k >= 0; --k) {
            const int ik = static_cast<int>(rem % g.shape[k]);
            rem /= g.shape[k];
            if (ik == 0 || ik == g.shape[k] - 1) wgt *= 0.5;
        }
        Eigen::Map<const Vec> v(x.data(), n);
        mass += wgt;
        mean += wgt * v;
        cov += wgt * v * v.transpose();
    }
    require(mass > 0.0, "field has zero integral");
    mean /= mass;
    cov = cov / mass - mean * mean.transpose();
}

// Per-axis variance of the isotropic density ϱ(k|x|²/2).
double isotropic_variance(const NormalizedWeight& w, int n, double k)
{
    auto moment = [&](int p) {
        return integrate_to_infinity([&](double r) { return std::pow(r, p) * w.rho(0.5 * k * r * r); }, 0.0, 0.0, 1e-11, 1.0)
            .value;
    };
    return moment(n + 1) / (n * moment(n - 1));
}

// Radius beyond which ϱ(k r²/2) < e^{-36}, or the support end.
double density_radius(const NormalizedWeight& w, double k)
{
    double t = 1.0;
    while (std::isfinite(w.alpha(t)) && w.alpha(t) < 36.0 && t < 1e8) t *= 2.0;
    double lo = 0.0, hi = t;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        (std::isfinite(w.alpha(mid)) && w.alpha(mid) < 36.0 ? lo : hi) = mid;
    }
    return std::sqrt(2.0 * hi / k);
}

// Interpolation error bound Σ_k max|Δ²_k φ|/8 over finite stencils within
// `radius` of `center`.
double interpolation_bound(const GridField& phi, const Vec& center, double radius)
{
    const GridSpec& g = phi.grid();
    const int n = g.dim();
    const auto strides = g.strides();
    double total = 0.0;
    std::vector<double> x(n);
    for (int k = 0; k < n; ++k) {
        double worst = 0.0;
        for (std::size_t i = 0; i < phi.size(); ++i) {
            const int ik = static_cast<int>((i / strides[k]) % g.shape[k]);
            if (ik == 0 || ik == g.shape[k] - 1) continue;
            g.node(i, x);
            double d2 = 0.0;
            for (int j = 0; j < n; ++j) d2 += (x[j] - center[j]) * (x[j] - center[j]);
            if (d2 > radius * radius) continue;
            const double a = phi[i - strides[k]], b = phi[i], c = phi[i + strides[k]];
            if (!std::isfinite(a) || !std::isfinite(b) || !std::isfinite(c)) continue;
            worst = std::max(worst, std::abs(a - 2.0 * b + c));
        }
        total += worst / 8.0;
    }
    return total;
}

double fit_radius_cap(const GridSpec& g, const Vec& z, const Mat& Tinv)
{
    return 0.98 * g.inscribed_radius(z) / spectral_norm(Tinv);
}

// Simplex search plus one restart; tolerances are relative to the starting value.
MinimizeResult polish(const std::function<double(const Vec&)>& f, const Vec& x0, const Vec& step, int max_evals)
{
    const double f0 = f(x0);
    const double ftol = 1e-10 * (std::isfinite(f0) ? std::abs(f0) : 1.0) + 1e-300;
    MinimizeResult best = nelder_mead(f, x0, step, ftol, 1e-7, max_evals);
    MinimizeResult again = nelder_mead(f, best.x, 0.1 * step, ftol, 1e-8, max_evals);
    if (again.value <= best.value) {
        again.converged = again.converged || best.converged;
        again.evals += best.evals;
        return again;
    }
    best.evals += again.evals;
    return best;
}

double least_squares_slope(const std::vector<double>& x, const std::vector<double>& y, double& intercept)
{
    const double m = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    const double den = m * sxx - sx * sx;
    if (x.size() < 2 || std::abs(den) < 1e-300) {
        intercept = kNaN;
        return kNaN;
    }
    const double a = (m * sxy - sx * sy) / den;
    intercept = (sy - a * sx) / m;
    return a;
}

}  // namespace

double radius_R(const NormalizedWeight& w, double eps, int n)
{
    require(eps > 0.0 && eps < 1.0, "eps must lie in (0, 1)");
    require(n >= 1 && n <= kMaxDim, "dimension must be in 1..4");
    const double target = -std::log(eps) / (64.0 * n * n);  // α(R²) = target
    double hi = 1.0;
    while (w.alpha(hi) < target) {
        hi *= 2.0;
        if (hi > 1e300) throw DomainError("R out of range");
    }
    double lo = 0.0;
    for (int i = 0; i < 400 && hi - lo > 1e-15 * hi; ++i) {
        const double mid = 0.5 * (lo + hi);
        (w.alpha(mid) < target ? lo : hi) = mid;
    }
    return std::sqrt(0.5 * (lo + hi));
}

double deficit(const SantaloReport& r) { return std::max(0.0, r.deficit_minus); }

SantaloReport minimize_product(const NormalizedWeight& w, const GridField& phi, const Vec& z0, Convention c, double tol)
{
    const int n = phi.dim();
    SantaloReport best = functional_product(w, phi, z0, c);
    auto objective = [&](const Vec& z) {
        for (int k = 0; k < n; ++k)
            if (!(z[k] > phi.grid().lo[k] && z[k] < phi.grid().hi[k])) return kInf;
        try {
            SantaloReport r = functional_product(w, phi, z, c);
            if (r.product < best.product) best = r;
            return std::log(r.int_g);
        } catch (const DomainError&) {
            return kInf;
        }
    };
    double h = kInf;
    for (int k = 0; k < n; ++k) h = std::min(h, phi.grid().step(k));
    nelder_mead(objective, z0, Vec::Constant(n, 2.0 * h), tol, 1e-3 * h, 400);
    return best;
}

std::vector<PsiRow> psi_measure(const GridField& phi, const NormalizedWeight& w, double eps,
                                const std::vector<double>& radii, double eta, const Vec& center_in)
{
    (void)w;
    require(eps > 0.0 && eps < 1.0, "eps must lie in (0, 1)");
    const int n = phi.dim();
    const Vec center = center_in.size() == 0 ? Vec::Zero(n) : center_in;
    require(center.size() == n, "center dimension does not match the field");
    const double thr = std::pow(eps, 1.0 / (128.0 * n * n));
    const GridField hull = biconjugate(phi, center);
    const double cell = phi.grid().cell_volume();
    std::vector<double> dist;
    std::vector<double> x(n);
    for (std::size_t i = 0; i < phi.size(); ++i) {
        const double lower = hull[i];
        if (!std::isfinite(lower)) continue;
        if (!(phi[i] > lower + thr)) continue;
        phi.grid().node(i, x);
        double d2 = 0.0;
        for (int k = 0; k < n; ++k) d2 += (x[k] - center[k]) * (x[k] - center[k]);
        dist.push_back(std::sqrt(d2));
    }
    std::vector<PsiRow> rows;
    for (double R : radii) {
        require(R > 0.0, "radii must be positive");
        PsiRow row;
        row.R = R;
        row.measure = cell * static_cast<double>(std::count_if(dist.begin(), dist.end(), [&](double d) { return d <= R; }));
        row.bound = eta * std::sqrt(eps) * std::pow(R, n);
        rows.push_back(row);
    }
    return rows;
}

DensityFit fit_extremal_density(const NormalizedWeight& w, const GridField& f, const Vec& z0, Convention c,
                                bool fit_center, int cells, int max_evals)
{
    const int n = f.dim();
    const double k = c == Convention::Square ? 2.0 : 1.0;
    const double L = density_radius(w, k);
    const CellRule rule = box_cells(n, L, cells > 0 ? cells : default_box_cells(n));
    std::vector<double> target(rule.x.size());
    for (std::size_t q = 0; q < rule.x.size(); ++q) target[q] = w.rho(0.5 * k * rule.x[q].squaredNorm());

    Vec mean;
    Mat cov;
    field_moments(f, mean, cov);
    const Mat T0 = sym_inv_sqrt(cov / isotropic_variance(w, n, k));
    const double f0 = density_at(f, z0);
    const int ns = n * (n + 1) / 2;
    const int np = 1 + ns + (fit_center ? n : 0);
    Vec x0(np);
    x0[0] = std::log(f0 > 0.0 ? f0 : 1.0);
    x0.segment(1, ns) = params_of(T0);
    if (fit_center) x0.tail(n) = z0;

    auto unpack = [&](const Vec& p, double& xi, Mat& T, Vec& z) {
        xi = std::exp(p[0]);
        T = matrix_of(p.segment(1, ns), n);
        z = fit_center ? Vec(p.tail(n)) : z0;
    };
    auto objective = [&](const Vec& p) {
        double xi;
        Mat T;
        Vec z;
        unpack(p, xi, T, z);
        const Mat Tinv = T.inverse();
        double total = 0.0;
        Vec y(n);
        for (std::size_t q = 0; q < rule.x.size(); ++q) {
            y = Tinv * rule.x[q] + z;
            total += rule.w[q] * std::abs(target[q] - density_at(f, y) / xi);
        }
        return total;
    };
    Vec step = Vec::Constant(np, 0.05);
    MinimizeResult r = polish(objective, x0, step, max_evals);
    DensityFit out;
    unpack(r.x, out.xi, out.T, out.z);
    out.l1 = r.value;
    out.converged = r.converged;
    return out;
}

StabilityFit stability_fit_legendre(const NormalizedWeight& w, const GridField& phi, const FitOptions& opt)
{
    const int n = phi.dim();
    StabilityFit fit;
    const GridField f = phi.map([&](double v) { return is_inf(v) ? 0.0 : w.rho(v); });

    Vec z_seed;
    try {
        z_seed = fm_center(f, 1e-8).z;
    } catch (const NoConvergence& e) {
        z_seed = e.best();
        fit.notes.push_back("center seed did not converge");
    }
    const SantaloReport best = minimize_product(w, phi, z_seed, Convention::HalfSquare);
    fit.eps_raw = best.deficit_minus;
    fit.eps = deficit(best);

    Vec mean;
    Mat cov;
    field_moments(f, mean, cov);
    const Mat T0 = sym_inv_sqrt(cov / isotropic_variance(w, n, 1.0));
    const Vec z0 = best.z;
    const double cap = fit_radius_cap(phi.grid(), z0, T0.inverse());
    if (opt.radius > 0.0) {
        fit.R_eps = opt.radius;
    } else if (fit.eps <= opt.tol) {
        fit.R_eps = cap;
        fit.R_capped = true;
        fit.notes.push_back("deficit at or below tolerance: R capped at the field box");
    } else {
        fit.R_eps = radius_R(w, std::max(fit.eps, DBL_EPSILON), n);
        if (fit.R_eps > cap) {
            fit.R_eps = cap;
            fit.R_capped = true;
            fit.notes.push_back("R(eps) exceeds the field box: capped");
        }
    }

    const int m = opt.cells > 0 ? opt.cells : default_ball_cells(n);
    const CellRule rule = ball_cells(n, fit.R_eps, m);
    const int ns = n * (n + 1) / 2;
    Vec x0(n + 1 + ns);
    x0.head(n) = z0;
    x0[n] = phi.eval(z0);
    x0.tail(ns) = params_of(T0);
    require(std::isfinite(x0[n]), "field is infinite at the fit center");

    auto objective = [&](const Vec& p) {
        const Vec z = p.head(n);
        const double c = p[n];
        const Mat Tinv = matrix_of(-p.tail(ns), n);
        double total = 0.0;
        Vec y(n);
        for (std::size_t q = 0; q < rule.x.size(); ++q) {
            y = Tinv * rule.x[q] + z;
            const double v = eval_at(phi, y);
            if (!std::isfinite(v)) return kInf;
            total += rule.w[q] * std::abs(0.5 * rule.x[q].squaredNorm() + c - v);
        }
        return total;
    };
    double h = kInf;
    for (int k = 0; k < n; ++k) h = std::min(h, phi.grid().step(k));
    Vec step(x0.size());
    step.head(n).setConstant(h);
    step[n] = 0.05;
    step.tail(ns).setConstant(0.05);
    const MinimizeResult r = polish(objective, x0, step, opt.max_evals);
    fit.stagnated = !r.converged;
    if (fit.stagnated) fit.notes.push_back("optimizer stagnation");
    fit.z = r.x.head(n);
    fit.c = r.x[n];
    fit.T = matrix_of(r.x.tail(ns), n);
    fit.xi = 1.0;
    fit.l1_primal = r.value;

    const Mat Tinv = fit.T.inverse();
    const double volume = unit_ball_volume(n) * std::pow(fit.R_eps, n);
    fit.quad_tol = interpolation_bound(phi, fit.z, fit.R_eps * spectral_norm(Tinv) + 2.0 * h) * volume;

    // Dual side over the part of R·B^n whose image stays inside the dual box
    // and the boundary-effect radius.
    const LegendreResult L = legendre_report(phi, fit.z, std::nullopt, LegendreMode::Refined);
    const double Rd = std::min({fit.R_eps, fit_radius_cap(L.field.grid(), fit.z, fit.T),
                                L.boundary_effect_radius / spectral_norm(fit.T)});
    const CellRule dual_rule = ball_cells(n, Rd, m);
    double dual = 0.0;
    Vec y(n);
    for (std::size_t q = 0; q < dual_rule.x.size(); ++q) {
        y = fit.T * dual_rule.x[q] + fit.z;
        dual += dual_rule.w[q] * std::abs(0.5 * dual_rule.x[q].squaredNorm() - fit.c - L.field.eval(y));
    }
    fit.l1_dual = dual;
    if (Rd < fit.R_eps) fit.notes.push_back("dual error measured on a smaller ball inside the dual box");

    if (phi.convex_flag() != ConvexFlag::KnownConvex) {
        std::vector<double> radii = opt.psi_radii;
        if (radii.empty()) radii = {0.25 * fit.R_eps, 0.5 * fit.R_eps, 0.75 * fit.R_eps, fit.R_eps};
        fit.psi_measure = psi_measure(phi, w, std::max(fit.eps, DBL_EPSILON), radii, opt.eta, fit.z);
    }
    return fit;
}

StabilityFit stability_fit_functional(const NormalizedWeight& w, const GridField& f, const GridField& g, const Vec& z,
                                      const FitOptions& opt)
{
    const int n = f.dim();
    require(g.dim() == n && z.size() == n, "dimension mismatch");
    StabilityFit fit;
    fit.z = z;
    const ConvexBody K = ball_body(f, z);
    if (body_measures(K).centroid.norm() > opt.tol * K.diameter()) {
        try {
            fit.z = fm_center(f, 1e-8).z;
        } catch (const NoConvergence& e) {
            fit.z = e.best();
            fit.notes.push_back("center did not converge");
        }
        fit.notes.push_back("center replaced by the Fradelizi-Meyer center");
    }

    auto id = [](double v) { return v; };
    const double product = integrate_grid(f, id) * integrate_grid(g, id);
    const double reference = reference_product(w, n, Convention::Square);
    fit.eps_raw = 1.0 - product / reference;
    fit.eps = std::max(0.0, fit.eps_raw);
    if (fit.eps > opt.tol) {
        fit.R_eps = radius_R(w, std::max(fit.eps, DBL_EPSILON), n);
    } else {
        fit.R_eps = f.grid().inscribed_radius(fit.z);
        fit.R_capped = true;
        fit.notes.push_back("deficit at or below tolerance: R capped at the field box");
    }

    const DensityFit primal = fit_extremal_density(w, f, fit.z, Convention::Square, false, opt.cells, opt.max_evals);
    fit.xi = primal.xi;
    fit.T = primal.T;
    fit.stagnated = !primal.converged;
    if (fit.stagnated) fit.notes.push_back("optimizer stagnation");
    const double mn = w.moment(n);
    fit.l1_primal = primal.l1 / mn;

    const double L = density_radius(w, 2.0);
    const CellRule rule = box_cells(n, L, opt.cells > 0 ? opt.cells : default_box_cells(n));
    double dual = 0.0;
    Vec y(n);
    for (std::size_t q = 0; q < rule.x.size(); ++q) {
        y = fit.T * rule.x[q] + fit.z;
        dual += rule.w[q] * std::abs(w.rho(rule.x[q].squaredNorm()) - fit.xi * density_at(g, y));
    }
    fit.l1_dual = dual / mn;
    fit.quad_tol = interpolation_bound(f, fit.z, kInf) * std::pow(2.0 * L, n) / mn;
    return fit;
}

CenterCheckReport logconcave_center_check(const Fn1& h, const Fn1& omega, int n, double eps_in)
{
    require(n >= 1 && n <= kMaxDim, "dimension must be in 1..4");
    require(eps_in > 0.0, "eps must be positive");
    auto side = [&](double sign, bool diff, double abs_tol) {
        const Fn1 g = [&](double r) {
            const double x = sign * r;
            const double wr = n == 1 ? 1.0 : std::pow(r, n - 1);
            return diff ? wr * std::abs(h(x) - omega(x)) : wr * omega(x);
        };
        return integrate_to_infinity(g, 0.0, abs_tol, 1e-10, 1.0, 400000).value;
    };
    const double den = side(1.0, false, 1e-300) + side(-1.0, false, 1e-300);
    // The difference only needs accuracy relative to ∫ω.
    const double num = side(1.0, true, 1e-13 * den) + side(-1.0, true, 1e-13 * den);
    require(den > 0.0, "omega has zero moment");
    CenterCheckReport r;
    r.eps_in = eps_in;
    r.eps_measured = num / den;
    if (r.eps_measured > eps_in * (1.0 + 1e-9)) throw DomainError("hypothesis violated");
    const double w0 = omega(0.0);
    r.lhs = std::abs(h(0.0) - w0);
    r.rhs = 250.0 * n * std::pow(eps_in, 1.0 / (n + 1)) * w0;
    r.pass = r.lhs <= r.rhs;
    r.in_range = eps_in < std::pow(250.0 * n, -(n + 1.0));
    return r;
}

CenterSearch center_bound_search(long pairs, std::uint64_t seed, double eps_cap)
{
    CenterSearch out;
    out.seed = seed;
    CounterRng rng(seed);
    std::uint64_t k = 0;
    const long max_draws = 20 * pairs + 100;
    for (long draw = 0; draw < max_draws && out.pairs < pairs; ++draw) {
        const int n = 1 + static_cast<int>(3.0 * rng.uniform(k++));
        // ω: generalized Gaussian e^{-(c|r|)^p} with ∫ω = 1, or the unit tent.
        const double p = 1.0 + rng.uniform(k++);
        const bool tent = rng.uniform(k++) < 0.2;
        const double cst = 2.0 * std::tgamma(1.0 + 1.0 / p);
        const Fn1 omega = [=](double r) {
            if (tent) return std::max(0.0, 1.0 - std::abs(r));
            return std::exp(-std::pow(cst * std::abs(r), p));
        };
        const int family = static_cast<int>(4.0 * rng.uniform(k++));
        const double delta = std::pow(10.0, -7.0 + 5.5 * rng.uniform(k++));
        const double scale = 0.2 + 2.0 * rng.uniform(k++);
        Fn1 h;
        switch (family) {
        case 0:  // peak tilt, log-concave since -|r| is concave
            h = [=](double r) { return omega(r) * std::exp(delta * (1.0 - std::abs(r) / scale)); };
            break;
        case 1:  // shift
            h = [=](double r) { return omega(r - delta * scale); };
            break;
        case 2:  // mass-preserving dilation
            h = [=](double r) { return (1.0 + delta) * omega((1.0 + delta) * r); };
            break;
        default:  // exponential tilt
            h = [=](double r) { return omega(r) * std::exp(delta * r / scale); };
            break;
        }
        CenterCheckReport rep;
        try {
            rep = logconcave_center_check(h, omega, n, eps_cap);
        } catch (const DomainError&) {
            ++out.rejected;
            continue;
        }
        // Tightest admissible ε: the measured one.
        const double eps = std::max(rep.eps_measured, 1e-300);
        const double rhs = 250.0 * n * std::pow(eps, 1.0 / (n + 1)) * omega(0.0);
        ++out.pairs;
        if (rep.lhs > rhs) ++out.violations;
        out.worst_ratio = std::max(out.worst_ratio, rep.lhs / rhs);
    }
    return out;
}

int default_grid_size(int n)
{
    static const int table[] = {1024, 128, 48, 20};
    require(n >= 1 && n <= kMaxDim, "dimension must be in 1..4");
    return table[n - 1];
}

ScanCurve stability_scan(const std::string& family, int n, int steps, const ScanOptions& opt)
{
    require(n >= 1 && n <= kMaxDim, "dimension must be in 1..4");
    require(steps >= 2, "a scan needs at least two steps");
    const auto w = validate_weight(WeightSpec::exp());
    const int m = opt.grid > 0 ? opt.grid : default_grid_size(n);
    const GridSpec grid = GridSpec::cube(n, -opt.half_width, opt.half_width, m);

    std::vector<double> deltas(steps);
    std::function<GridField(double)> make;
    if (family == "truncated-quadratic") {
        for (int i = 0; i < steps; ++i) deltas[i] = 0.2 * std::pow(0.35, i);
        make = [&](double d) {
            const double r2 = 2.0 * std::log(1.0 / d);
            return GridField::sample(grid, [=](std::span<const double> x) {
                double s = 0.0;
                for (double v : x) s += v * v;
                return s <= r2 ? 0.5 * s : kInf;
            });
        };
    } else if (family == "bump") {
        for (int i = 0; i < steps; ++i) deltas[i] = 0.8 * std::pow(0.5, i);
        make = [&](double d) {
            return GridField::sample(
                grid,
                [=](std::span<const double> x) {
                    double s = 0.0, b = 0.0;
                    for (int k = 0; k < n; ++k) {
                        s += x[k] * x[k];
                        const double e = x[k] - (k == 0 ? 1.0 : 0.0);
                        b += e * e;
                    }
                    return 0.5 * s + d * std::exp(-0.5 * b);
                },
                ConvexFlag::Unknown);
        };
    } else if (family == "quadratic") {
        for (int i = 0; i < steps; ++i) deltas[i] = 0.4 * std::pow(0.5, i);
        make = [&](double d) {
            return GridField::sample(grid, [=](std::span<const double> x) {
                // S = diag(1, -1, 1, -1) plus 1/2 on the first off-diagonal.
                double s = 0.0;
                for (int k = 0; k < n; ++k) {
                    s += (1.0 + d * (k % 2 == 0 ? 1.0 : -1.0)) * x[k] * x[k];
                    if (k + 1 < n) s += d * x[k] * x[k + 1];
                }
                return 0.5 * s;
            }, ConvexFlag::KnownConvex);
        };
    } else {
        throw ParseError("unknown scan family: " + family);
    }

    ScanCurve curve;
    curve.family = family;
    curve.n = n;
    std::vector<ScanPoint> pts(steps);
    parallel_for(steps, [&](std::size_t i) {
        const GridField phi = make(deltas[i]);
        const StabilityFit fit = stability_fit_legendre(w, phi, opt.fit);
        const GridField f = phi.map([&](double v) { return is_inf(v) ? 0.0 : w.rho(v); });
        const DensityFit dist = fit_extremal_density(w, f, fit.z, Convention::HalfSquare, true);
        ScanPoint& p = pts[i];
        p.delta = deltas[i];
        p.eps = fit.eps;
        p.eps_raw = fit.eps_raw;
        p.R = fit.R_eps;
        p.l1_primal = fit.l1_primal;
        p.l1_dual = fit.l1_dual;
        p.distance = dist.l1 / std::pow(2.0 * std::numbers::pi, 0.5 * n);
    });

    // pts runs from the largest δ down.
    std::vector<double> lx, ly;
    for (int i = 0; i < steps; ++i) {
        if (i > 0) {
            curve.eps_monotone = curve.eps_monotone && pts[i].eps < pts[i - 1].eps;
            curve.distance_monotone = curve.distance_monotone && pts[i].distance < pts[i - 1].distance;
        }
        if (pts[i].eps > opt.fit.tol && pts[i].distance > 0.0) {
            lx.push_back(std::log(pts[i].eps));
            ly.push_back(std::log(pts[i].distance));
        }
        double b;
        pts[i].exponent_running = lx.size() >= 2 ? least_squares_slope(lx, ly, b) : kNaN;
    }
    double logc;
    curve.fitted_exponent = least_squares_slope(lx, ly, logc);
    curve.fitted_constant = std::exp(logc);
    curve.degenerate = lx.size() < 2;

    const double e = 1.0 / (129.0 * n * n);
    if (pts[0].eps > 0.0) {
        curve.bound_constant = pts[0].distance / std::pow(pts[0].eps, e);
        for (const ScanPoint& p : pts)
            curve.bound_ok = curve.bound_ok && p.distance <= curve.bound_constant * std::pow(p.eps, e) * (1.0 + 1e-9);
    } else {
        curve.bound_ok = false;
    }
    std::reverse(pts.begin(), pts.end());
    curve.points = std::move(pts);
    return curve;
}

}  // namespace santalo
