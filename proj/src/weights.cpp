#include "santalo/weights.hpp"

#include "santalo/error.hpp"
#include "santalo/grid_field.hpp"
#include "santalo/quad.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace santalo {

namespace {

// α of the unscaled base function at argument tau.
double base_alpha(const WeightSpec& w, double tau)
{
    switch (w.kind) {
    case WeightKind::Exp: return w.param * tau;
    case WeightKind::Linear: {
        const double s = w.param * tau;
        return s < 1.0 ? -std::log1p(-s) : kInf;
    }
    case WeightKind::Power: {
        const double s = tau / w.param;
        return s < 1.0 ? -w.param * std::log1p(-s) : kInf;
    }
    case WeightKind::Sampled: {
        const auto& t = w.t;
        const auto& r = w.rho;
        std::size_t finite = 0;
        while (finite < r.size() && r[finite] > 0.0) ++finite;
        const double end = finite < r.size() ? t[finite] : kInf;
        if (tau >= end) return kInf;
        auto a = [&](std::size_t i) { return -std::log(r[i]); };
        if (tau <= t[0]) {
            const double slope = (a(1) - a(0)) / (t[1] - t[0]);
            return a(0) + slope * (tau - t[0]);
        }
        const auto it = std::upper_bound(t.begin(), t.begin() + finite, tau);
        std::size_t hi = static_cast<std::size_t>(it - t.begin());
        if (hi >= finite) hi = finite - 1;
        const std::size_t lo = hi - 1;
        const double slope = (a(hi) - a(lo)) / (t[hi] - t[lo]);
        return a(lo) + slope * (tau - t[lo]);
    }
    case WeightKind::Custom: {
        const double v = w.fn(tau);
        if (std::isnan(v)) throw DomainError("weight evaluates to NaN");
        if (v < 0.0) throw DomainError("weight must be nonnegative");
        return v > 0.0 ? -std::log(v) : kInf;
    }
    }
    return kInf;
}

double base_support_end(const WeightSpec& w)
{
    switch (w.kind) {
    case WeightKind::Exp: return kInf;
    case WeightKind::Linear: return 1.0 / w.param;
    case WeightKind::Power: return w.param;
    case WeightKind::Sampled: {
        for (std::size_t i = 0; i < w.rho.size(); ++i)
            if (w.rho[i] == 0.0) return w.t[i];
        return kInf;
    }
    case WeightKind::Custom: {
        const double v0 = w.fn(0.0);
        if (v0 <= 0.0) return 0.0;
        double lo = 0.0, hi = 1.0;
        while (true) {
            const double v = w.fn(hi);
            if (v <= 0.0) break;
            // Decayed by e^{-200} while still positive: treat the support as unbounded.
            if (v < v0 * 1e-87 || hi > 1e15) return kInf;
            lo = hi;
            hi *= 2.0;
        }
        for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
            const double mid = 0.5 * (lo + hi);
            (w.fn(mid) > 0.0 ? lo : hi) = mid;
        }
        return hi;
    }
    }
    return kInf;
}

// ∫_0^∞ of the unscaled base function.
double base_integral(const WeightSpec& w)
{
    switch (w.kind) {
    case WeightKind::Exp: return 1.0 / w.param;
    case WeightKind::Linear: return 0.5 / w.param;
    case WeightKind::Power: return w.param / (w.param + 1.0);
    case WeightKind::Sampled: {
        double sum = 0.0;
        std::size_t finite = 0;
        while (finite < w.rho.size() && w.rho[finite] > 0.0) ++finite;
        auto a = [&](std::size_t i) { return -std::log(w.rho[i]); };
        auto piece = [](double a0, double slope, double len) {
            if (std::abs(slope * len) < 1e-12) return std::exp(-a0) * len;
            return std::exp(-a0) * -std::expm1(-slope * len) / slope;
        };
        for (std::size_t i = 0; i + 1 < finite; ++i) {
            const double len = w.t[i + 1] - w.t[i];
            sum += piece(a(i), (a(i + 1) - a(i)) / len, len);
        }
        const double slope = (a(finite - 1) - a(finite - 2)) / (w.t[finite - 1] - w.t[finite - 2]);
        if (finite < w.rho.size()) {
            sum += piece(a(finite - 1), slope, w.t[finite] - w.t[finite - 1]);
        } else {
            if (!(slope > 0.0)) throw DomainError("not integrable");
            sum += std::exp(-a(finite - 1)) / slope;
        }
        return sum;
    }
    case WeightKind::Custom: {
        const double end = base_support_end(w);
        auto f = [&](double t) { return w.fn(t); };
        QuadResult q = std::isfinite(end) ? integrate_adaptive(f, 0.0, end, 1e-14, 1e-13, 2000000)
                                          : integrate_to_infinity(f, 0.0, 1e-14, 1e-13, 1.0, 2000000);
        if (!q.converged || !std::isfinite(q.value)) throw DomainError("not integrable");
        return q.value;
    }
    }
    return 0.0;
}

struct Analysis {
    std::vector<double> t, a;
    double t_end = kInf;
    double t_max = 0.0;
};

// Samples α on an adaptive set (uniform plus a geometric cluster near the
// support end) and checks monotonicity and convexity.
Analysis analyze(const WeightSpec& w)
{
    Analysis an;
    an.t_end = w.support_end();
    const double a0 = w.alpha(0.0);
    if (!std::isfinite(a0)) throw DomainError("weight must be positive at 0");
    if (std::isfinite(an.t_end)) {
        an.t_max = an.t_end;
    } else {
        double T = 1.0;
        while (w.alpha(T) - a0 < 40.0) {
            T *= 2.0;
            if (T > 1e12) throw DomainError("not integrable");
        }
        an.t_max = T;
    }
    const int n_uniform = 4000;
    const bool bounded = std::isfinite(an.t_end);
    const double top = bounded ? an.t_max * (1.0 - 1e-3) : an.t_max;
    for (int i = 0; i <= n_uniform; ++i) an.t.push_back(top * i / n_uniform);
    if (bounded)
        for (int k = 10; k <= 20; ++k) an.t.push_back(an.t_max * (1.0 - std::ldexp(1.0, -k)));
    std::sort(an.t.begin(), an.t.end());
    an.t.erase(std::unique(an.t.begin(), an.t.end()), an.t.end());
    for (double t : an.t) {
        const double v = w.value(t);
        if (std::isnan(v)) throw DomainError("weight evaluates to NaN");
        if (v < 0.0) throw DomainError("weight must be nonnegative");
        an.a.push_back(w.alpha(t));
    }
    for (std::size_t i = 0; i + 1 < an.a.size(); ++i) {
        if (is_inf(an.a[i + 1])) {
            if (!bounded) throw DomainError("not log-concave");
            continue;
        }
        if (an.a[i + 1] - an.a[i] < -1e-12 * std::max(1.0, std::abs(an.a[i]))) throw DomainError("not non-increasing");
    }
    for (std::size_t i = 0; i + 2 < an.a.size(); ++i) {
        if (is_inf(an.a[i + 2])) continue;
        const double s1 = (an.a[i + 1] - an.a[i]) / (an.t[i + 1] - an.t[i]);
        const double s2 = (an.a[i + 2] - an.a[i + 1]) / (an.t[i + 2] - an.t[i + 1]);
        if (s2 - s1 < -1e-9 * std::max({1.0, std::abs(s1), std::abs(s2)})) throw DomainError("not log-concave");
    }
    return an;
}

// First positive root of rate * t - α(t) after its maximum; `fallback` when
// the difference never rises above noise (α(t) = rate * t).
double crossing_point(const WeightSpec& w, const Analysis& an, double rate, double fallback, bool& degenerate)
{
    auto d = [&](double t) {
        const double a = w.alpha(t);
        return is_inf(a) ? -kInf : rate * t - a;
    };
    std::size_t arg = 0;
    double best = 0.0;
    for (std::size_t i = 0; i < an.t.size(); ++i) {
        const double v = d(an.t[i]);
        if (v > best) best = v, arg = i;
    }
    degenerate = best <= 1e-9;
    if (degenerate) return fallback;
    double lo = an.t[arg], hi = kInf;
    for (std::size_t i = arg + 1; i < an.t.size(); ++i) {
        if (d(an.t[i]) < 0.0) {
            hi = an.t[i];
            break;
        }
        lo = an.t[i];
    }
    if (is_inf(hi)) {
        hi = std::max(lo, 1.0) * 2.0;
        while (d(hi) >= 0.0) {
            lo = hi;
            hi *= 2.0;
            if (hi > 1e12) throw DomainError("no crossing against the reference exponential");
        }
    }
    for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        (d(mid) >= 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace

WeightSpec WeightSpec::exp(double rate)
{
    require(rate > 0.0 && std::isfinite(rate), "exp weight rate must be positive");
    WeightSpec w;
    w.kind = WeightKind::Exp;
    w.param = rate;
    w.label = "exp";
    return w;
}

WeightSpec WeightSpec::linear(double slope)
{
    require(slope > 0.0 && std::isfinite(slope), "linear weight slope must be positive");
    WeightSpec w;
    w.kind = WeightKind::Linear;
    w.param = slope;
    w.label = "linear";
    return w;
}

WeightSpec WeightSpec::power(double p)
{
    require(p > 0.0 && std::isfinite(p), "power weight exponent must be positive");
    WeightSpec w;
    w.kind = WeightKind::Power;
    w.param = p;
    w.label = "power";
    return w;
}

WeightSpec WeightSpec::sampled(std::vector<double> t, std::vector<double> rho)
{
    require(t.size() == rho.size(), "sampled weight needs matching t and rho arrays");
    require(t.size() >= 2 && t[0] == 0.0, "sampled weight needs samples starting at t = 0");
    for (std::size_t i = 0; i + 1 < t.size(); ++i) require(t[i + 1] > t[i], "sampled weight t must be increasing");
    for (double r : rho) require(r >= 0.0 && std::isfinite(r), "weight must be nonnegative");
    std::size_t finite = 0;
    while (finite < rho.size() && rho[finite] > 0.0) ++finite;
    require(finite >= 2, "sampled weight needs two positive samples");
    WeightSpec w;
    w.kind = WeightKind::Sampled;
    w.t = std::move(t);
    w.rho = std::move(rho);
    w.label = "sampled";
    return w;
}

WeightSpec WeightSpec::custom(std::function<double(double)> rho, std::string label)
{
    WeightSpec w;
    w.kind = WeightKind::Custom;
    w.fn = std::move(rho);
    w.label = std::move(label);
    return w;
}

double WeightSpec::alpha(double t) const
{
    const double a = base_alpha(*this, arg_scale * t);
    return is_inf(a) ? kInf : a - std::log(value_scale);
}

double WeightSpec::value(double t) const
{
    if (kind == WeightKind::Custom) return value_scale * fn(arg_scale * t);
    const double a = base_alpha(*this, arg_scale * t);
    return is_inf(a) ? 0.0 : value_scale * std::exp(-a);
}

double WeightSpec::support_end() const { return base_support_end(*this) / arg_scale; }

std::string WeightSpec::kind_name() const
{
    switch (kind) {
    case WeightKind::Exp: return "exp";
    case WeightKind::Linear: return "linear";
    case WeightKind::Power: return "power";
    case WeightKind::Sampled: return "sampled";
    case WeightKind::Custom: return "custom";
    }
    return "unknown";
}

NormalizedWeight validate_weight(const WeightSpec& spec)
{
    analyze(spec);
    const double v0 = spec.value(0.0);
    require(v0 > 0.0 && std::isfinite(v0), "weight must be positive at 0");
    const double integral = spec.value_scale * base_integral(spec) / spec.arg_scale;
    if (!(integral > 0.0) || !std::isfinite(integral)) throw DomainError("not integrable");

    NormalizedWeight w;
    w.spec = spec;
    const double nu = 1.0 / v0;
    w.spec.value_scale = spec.value_scale * nu;
    w.spec.arg_scale = spec.arg_scale * (nu * integral);

    const Analysis an = analyze(w.spec);
    w.support_end = an.t_end;
    switch (w.spec.kind) {
    case WeightKind::Exp:
    case WeightKind::Linear: w.alpha_prime_0 = w.spec.param * w.spec.arg_scale; break;
    case WeightKind::Power: w.alpha_prime_0 = w.spec.arg_scale; break;
    case WeightKind::Sampled:
        w.alpha_prime_0 = (-std::log(w.spec.rho[1]) + std::log(w.spec.rho[0])) / (w.spec.t[1] - w.spec.t[0]) * w.spec.arg_scale;
        break;
    case WeightKind::Custom: {
        const double h = 1e-4 * std::min(1.0, an.t_max);
        const double a0 = w.spec.alpha(0.0);
        const double d1 = (w.spec.alpha(h) - a0) / h, d2 = (w.spec.alpha(0.5 * h) - a0) / (0.5 * h);
        w.alpha_prime_0 = 2.0 * d2 - d1;
        break;
    }
    }
    w.t0 = crossing_point(w.spec, an, 1.0, 1.0, w.degenerate_crossing);
    for (std::size_t i = 0; i + 1 < an.a.size(); ++i) {
        if (is_inf(an.a[i + 1])) break;
        if (an.a[i + 1] - an.a[i] <= 1e-14 * std::max(1.0, std::abs(an.a[i]))) {
            w.strictly_decreasing = false;
            break;
        }
    }
    for (int n = 1; n <= 4; ++n) w.moments[n - 1] = weight_moment(w, n);
    return w;
}

double weight_moment(const NormalizedWeight& w, int n)
{
    require(n >= 1 && n <= 4, "moment order must be in 1..4");
    auto f = [&](double r) {
        const double v = w.rho(r * r);
        return v == 0.0 ? 0.0 : std::pow(r, n - 1) * v;
    };
    const double end = w.spec.support_end();
    QuadResult q = std::isfinite(end) ? integrate_adaptive(f, 0.0, std::sqrt(end), 1e-15, 1e-13, 2000000)
                                      : integrate_to_infinity(f, 0.0, 1e-15, 1e-13, 1.0, 2000000);
    // The comparison with e^{-r²} needs r^{n-2} non-decreasing, so n = 1 is exempt.
    const double bound = 0.5 * std::tgamma(0.5 * n);
    if (n >= 2 && q.value > bound + 1e-9) throw DomainError("moment exceeds the Gaussian bound Gamma(n/2)/2");
    return q.value;
}

double AlphaStar::rho(double t) const
{
    const double a = alpha(t);
    return is_inf(a) ? 0.0 : std::exp(-a);
}

AlphaStar alpha_star_extend(const NormalizedWeight& w) { return AlphaStar(w); }

EvenProfile even_profile(std::function<double(double)> omega, std::string label)
{
    const double w0 = omega(0.0);
    if (!(std::abs(w0 - 1.0) <= 1e-9)) throw DomainError("profile not normalized: omega(0) != 1");
    for (int i = 1; i <= 400; ++i) {
        const double r = 0.01 * i;
        const double a = omega(r), b = omega(-r);
        if (std::abs(a - b) > 1e-12 * (1.0 + std::abs(a))) throw DomainError("profile not even");
    }
    const WeightSpec half = WeightSpec::custom(omega, label);
    const Analysis an = analyze(half);
    const double total = 2.0 * base_integral(half);
    if (!(std::abs(total - 1.0) <= 1e-9)) throw DomainError("profile not normalized: integral != 1");

    EvenProfile p;
    p.omega = std::move(omega);
    p.label = std::move(label);
    p.r0 = crossing_point(half, an, 2.0, 0.5, p.degenerate_crossing);
    if (p.omega(0.5) < std::exp(-1.0) - 1e-12) throw DomainError("profile violates omega(1/2) >= 1/e");
    for (int i = 0; i <= 500; ++i) {
        const double r = 0.5 * i / 500.0;
        if (p.omega(r) < 1.0 - 2.0 * r - 1e-12) throw DomainError("profile violates omega(r) >= 1 - 2|r|");
    }
    return p;
}

double profile_moment(const EvenProfile& p, int n)
{
    require(n >= 1 && n <= 4, "moment order must be in 1..4");
    auto f = [&](double r) {
        const double v = p.omega(r);
        return v == 0.0 ? 0.0 : std::pow(r, n - 1) * v;
    };
    return integrate_to_infinity(f, 0.0, 1e-15, 1e-13, 0.5, 2000000).value;
}

namespace profiles {

EvenProfile laplace()
{
    return even_profile([](double r) { return std::exp(-2.0 * std::abs(r)); }, "laplace");
}

EvenProfile gaussian()
{
    return even_profile([](double r) { return std::exp(-std::numbers::pi * r * r); }, "gaussian");
}

EvenProfile tent()
{
    return even_profile([](double r) { return std::max(0.0, 1.0 - std::abs(r)); }, "tent");
}

}  // namespace profiles

}  // namespace santalo
