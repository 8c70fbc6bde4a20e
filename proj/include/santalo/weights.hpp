#pragma once

#include <array>
#include <functional>
#include <string>
#include <vector>

namespace santalo {

enum class WeightKind { Exp, Linear, Power, Sampled, Custom };

/// A nonnegative function ϱ on [0, ∞), optionally rescaled as
/// ϱ(t) = value_scale * base(arg_scale * t).
///
/// Closed forms: exp  base(t) = e^{-rate t}
///               linear base(t) = (1 - slope t)_+
///               power  base(t) = (1 - t/p)_+^p
/// Sampled weights store (t, ϱ) pairs; α = -log ϱ is interpolated linearly
/// between samples and extrapolated with the last slope. A zero sample marks
/// the end of the support.
struct WeightSpec {
    WeightKind kind = WeightKind::Exp;
    double param = 1.0;
    std::vector<double> t, rho;
    std::function<double(double)> fn;
    std::string label;
    double value_scale = 1.0;
    double arg_scale = 1.0;

    static WeightSpec exp(double rate = 1.0);
    static WeightSpec linear(double slope);
    static WeightSpec power(double p);
    static WeightSpec sampled(std::vector<double> t, std::vector<double> rho);
    static WeightSpec custom(std::function<double(double)> rho, std::string label = "custom");

    double operator()(double t) const { return value(t); }
    double value(double t) const;
    /// -log ϱ(t); +∞ outside the support.
    double alpha(double t) const;
    /// First t where ϱ vanishes (+∞ if never), in the rescaled argument.
    double support_end() const;

    std::string kind_name() const;
};

/// A weight rescaled so that ϱ(0) = 1 and ∫_0^∞ ϱ = 1, with its analysis.
struct NormalizedWeight {
    WeightSpec spec;           // rescaled: spec.value(0) = 1, ∫ spec = 1
    double alpha_prime_0 = 1;  // right derivative of α at 0
    double t0 = 1;             // crossing point against e^{-t}
    bool degenerate_crossing = false;
    bool strictly_decreasing = true;  // false flags ties (constant stretches)
    std::array<double, 4> moments{};  // ∫ r^{n-1} ϱ(r²) dr, n = 1..4
    double support_end = 0;

    double rho(double t) const { return spec.value(t); }
    double alpha(double t) const { return spec.alpha(t); }
    double moment(int n) const { return moments.at(n - 1); }
};

/// Normalizes and validates a weight. Throws DomainError with
/// "not log-concave", "not non-increasing" or "not integrable".
NormalizedWeight validate_weight(const WeightSpec& spec);

/// ∫_0^∞ r^{n-1} ϱ(r²) dr by adaptive quadrature; checks the Γ(n/2)/2 bound
/// for n >= 2 (it can fail for n = 1, e.g. ϱ = (1 - t/2)_+).
double weight_moment(const NormalizedWeight& w, int n);

/// α_*(t) = α(t) for t >= 0 and α'(0) t for t <= 0; ϱ_* = e^{-α_*}.
class AlphaStar {
public:
    explicit AlphaStar(NormalizedWeight w) : w_(std::move(w)) {}
    double alpha(double t) const { return t >= 0.0 ? w_.alpha(t) : w_.alpha_prime_0 * t; }
    double rho(double t) const;
    double slope_at_zero() const { return w_.alpha_prime_0; }
    const NormalizedWeight& weight() const { return w_; }

private:
    NormalizedWeight w_;
};

AlphaStar alpha_star_extend(const NormalizedWeight& w);

/// Even log-concave profile ω with ω(0) = 1 and ∫_R ω = 1, and the point r0
/// where it crosses e^{-2|r|}.
struct EvenProfile {
    std::function<double(double)> omega;
    std::string label;
    double r0 = 0.5;
    bool degenerate_crossing = false;

    double operator()(double r) const { return omega(r); }
};

/// Validates normalization, evenness and log-concavity, then locates r0
/// (1/2 when ω = e^{-2|r|}). Checks ω(1/2) >= 1/e and ω(r) >= 1 - 2|r| on |r| <= 1/2.
EvenProfile even_profile(std::function<double(double)> omega, std::string label = "custom");

/// ∫_0^∞ r^{n-1} ω(r) dr.
double profile_moment(const EvenProfile& p, int n);

namespace profiles {
EvenProfile laplace();   // e^{-2|r|}
EvenProfile gaussian();  // e^{-π r²}
EvenProfile tent();      // (1 - |r|)_+
}  // namespace profiles

}  // namespace santalo
