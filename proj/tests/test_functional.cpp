#include "santalo/functional.hpp"
#include "santalo/error.hpp"
#include "santalo/transform.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace santalo;

namespace {

constexpr double kPi = std::numbers::pi;

GridField half_quadratic(int n, double half_width, int per_axis, double shift = 0.0)
{
    return GridField::sample(GridSpec::cube(n, -half_width, half_width, per_axis), [=](std::span<const double> x) {
        double s = 0.0;
        for (double v : x) s += v * v;
        return 0.5 * s + shift;
    });
}

NormalizedWeight exp_weight() { return validate_weight(WeightSpec::exp()); }

double sq(std::span<const double> x)
{
    double s = 0.0;
    for (double v : x) s += v * v;
    return s;
}

}  // namespace

TEST(FunctionalProduct, GaussianExtremalHalfSquare)
{
    const auto w = exp_weight();
    const SantaloReport r = functional_product(w, half_quadratic(2, 6.0, 128), Vec::Zero(2), Convention::HalfSquare);
    EXPECT_NEAR(r.reference, 4 * kPi * kPi, 1e-8);
    EXPECT_NEAR(r.product / (4 * kPi * kPi), 1.0, 5e-3);
    EXPECT_LT(std::abs(r.deficit_minus), 1e-3);
    EXPECT_EQ(r.convention, Convention::HalfSquare);
}

TEST(FunctionalProduct, DeficitShrinksUnderRefinement)
{
    const auto w = exp_weight();
    double prev = kInf;
    for (int m : {33, 65, 129}) {
        const double d = std::abs(
            functional_product(w, half_quadratic(2, 6.0, m), Vec::Zero(2), Convention::HalfSquare).deficit_minus);
        EXPECT_LT(d, prev) << m;
        prev = d;
    }
}

TEST(FunctionalProduct, SquareConventionGaussian)
{
    // f = e^{-|x|²}, g = e^{-|y|²}: both integrate to π in 2D.
    const auto w = exp_weight();
    const SantaloReport r = functional_product(w, half_quadratic(2, 6.0, 129), Vec::Zero(2), Convention::Square);
    EXPECT_NEAR(r.reference, kPi * kPi, 1e-8);
    EXPECT_NEAR(r.int_f, kPi, 1e-6);
    EXPECT_LT(std::abs(r.deficit_minus), 2e-3);
}

TEST(FunctionalProduct, ConstantShiftCancels)
{
    const auto w = exp_weight();
    const auto a = functional_product(w, half_quadratic(2, 6.0, 65), Vec::Zero(2), Convention::HalfSquare);
    const auto b = functional_product(w, half_quadratic(2, 6.0, 65, 0.7), Vec::Zero(2), Convention::HalfSquare);
    // The sub-cell refinement differences shifted values, so agreement is to roundoff.
    EXPECT_NEAR(b.product / a.product, 1.0, 1e-10);
    EXPECT_NEAR(b.int_f / a.int_f, std::exp(-0.7), 1e-12);
}

TEST(FunctionalProduct, ReferenceMatchesRadialIntegral)
{
    const auto w = validate_weight(WeightSpec::linear(0.5));
    for (int n = 1; n <= 3; ++n) {
        QuadratureSpec spec;
        spec.tol = 1e-10;
        const double half = integrate_radial([&](std::span<const double> x) { return w.rho(0.5 * sq(x)); }, n, spec).value;
        const double full = integrate_radial([&](std::span<const double> x) { return w.rho(sq(x)); }, n, spec).value;
        EXPECT_NEAR(reference_product(w, n, Convention::HalfSquare), half * half, 1e-6 * half * half) << n;
        EXPECT_NEAR(reference_product(w, n, Convention::Square), full * full, 1e-6 * full * full) << n;
    }
}

TEST(FunctionalProduct, LinearInvariance)
{
    const auto w = exp_weight();
    Mat T(2, 2);
    T << 1.5, 0.4, 0.4, 0.8;
    const auto phi = GridField::sample(GridSpec::cube(2, -7.0, 7.0, 129), [&](std::span<const double> x) {
        Vec v(2);
        v << x[0], x[1];
        return 0.5 * (T * v).squaredNorm();
    });
    const auto r = functional_product(w, phi, Vec::Zero(2), Convention::HalfSquare);
    EXPECT_NEAR(r.product / (4 * kPi * kPi), 1.0, 5e-3);
}

TEST(FunctionalProduct, DegeneratePairRejected)
{
    const auto w = validate_weight(WeightSpec::linear(0.5));
    // φ >= 10 everywhere: ϱ(φ) = (1 - φ/2)_+ vanishes.
    const auto phi = half_quadratic(2, 2.0, 16, 10.0);
    EXPECT_THROW(functional_product(w, phi, Vec::Zero(2), Convention::HalfSquare), DomainError);
}

TEST(ProductHypothesis, LegendrePairsSatisfyIt)
{
    for (Convention c : {Convention::HalfSquare, Convention::Square}) {
        for (const auto& spec : {WeightSpec::exp(), WeightSpec::linear(0.5), WeightSpec::power(3.0)}) {
            const auto w = validate_weight(spec);
            const auto phi = GridField::sample(GridSpec::cube(2, -2.0, 2.0, 16), [](std::span<const double> x) {
                return 0.4 * x[0] * x[0] + 0.9 * x[1] * x[1] + 0.2 * x[0] * x[1] + 0.3 * x[0] + 0.1;
            });
            const auto pair = functional_pair(w, phi, Vec::Zero(2), c);
            EXPECT_GE(product_hypothesis_check(w, pair.f, pair.g, Vec::Zero(2), c), -1e-9) << spec.kind_name();
        }
    }
}

TEST(ProductHypothesis, GaussianSquarePairAndScaling)
{
    const auto w = exp_weight();
    const auto grid = GridSpec::cube(2, -2.0, 2.0, 16);
    const auto f = GridField::sample(grid, [](std::span<const double> x) { return std::exp(-sq(x)); });
    const double m = product_hypothesis_check(w, f, f, Vec::Zero(2), Convention::Square);
    EXPECT_GE(m, -1e-9);
    const auto f2 = f.map([](double v) { return 2.0 * v; });
    EXPECT_NEAR(product_hypothesis_check(w, f2, f, Vec::Zero(2), Convention::Square), m - std::log(2.0), 1e-12);
}

TEST(ProductHypothesis, ViolationDetected)
{
    const auto w = exp_weight();
    const auto grid = GridSpec::cube(2, -2.0, 2.0, 16);
    const auto f = GridField::sample(grid, [](std::span<const double> x) { return std::exp(-0.25 * sq(x)); });
    EXPECT_LT(product_hypothesis_check(w, f, f, Vec::Zero(2), Convention::Square), -0.1);
}

TEST(BallBody, GaussianGivesUnitBall)
{
    const FnN f = [](std::span<const double> x) { return std::exp(-0.5 * sq(x)); };
    const ConvexBody K = ball_body(f, 2, Vec::Zero(2));
    for (double r : K.as_radial().radii) EXPECT_NEAR(r, 1.0, 1e-8);
    EXPECT_NEAR(2.0 * body_measures(K).volume, 2 * kPi, 1e-6);
}

TEST(BallBody, GridFieldMatchesIntegral)
{
    const auto grid = GridSpec::cube(2, -8.0, 8.0, 257);
    const auto f = GridField::sample(grid, [](std::span<const double> x) { return std::exp(-0.5 * sq(x)); });
    const ConvexBody K = ball_body(f, Vec::Zero(2));
    const double integral = integrate_grid(f, [](double v) { return v; });
    EXPECT_NEAR(2.0 * body_measures(K).volume / integral, 1.0, 1e-6);
    for (double r : K.as_radial().radii) EXPECT_NEAR(r, 1.0, 2e-3);
}

TEST(BallBody, BallIndicatorRadius)
{
    const FnN f = [](std::span<const double> x) { return sq(x) <= 1.0 ? 1.0 : 0.0; };
    const ConvexBody K = ball_body(f, 2, Vec::Zero(2));
    for (double r : K.as_radial().radii) EXPECT_NEAR(r, std::sqrt(0.5), 1e-7);
}

TEST(BallBody, KfIdentityOffCenter3D)
{
    // Log-concave and not even; ∫f by an independent tensor trapezoid rule.
    const FnN f = [](std::span<const double> x) {
        const double a = x[0] - 0.3, b = x[1] + 0.2, c = x[2];
        return std::exp(-(a * a + 0.5 * b * b + 2.0 * c * c + 0.3 * a * b) - 0.4 * std::abs(a + c));
    };
    const auto grid = GridSpec::cube(3, -7.0, 7.0, 121);
    const double integral =
        integrate_grid(GridField::sample(grid, [&](std::span<const double> x) { return f(x); }), [](double v) { return v; });
    Vec z(3);
    z << 0.1, -0.1, 0.2;
    const ConvexBody K = ball_body(f, 3, z);
    EXPECT_NEAR(3.0 * body_measures(K).volume / integral, 1.0, 1e-3);
}

TEST(BallBody, ZeroDirectionRejected)
{
    const FnN f = [](std::span<const double> x) { return x[0] > 0.0 ? std::exp(-sq(x)) : 0.0; };
    EXPECT_THROW(ball_body(f, 2, Vec::Zero(2)), DomainError);
}

TEST(FmCenter, EvenFieldCentersAtOrigin)
{
    const auto grid = GridSpec::cube(2, -6.0, 6.0, 97);
    const auto f = GridField::sample(grid, [](std::span<const double> x) { return std::exp(-0.5 * sq(x) - std::abs(x[0] * x[1])); });
    const CenterResult c = fm_center(f, 1e-9);
    EXPECT_LT(c.z.norm(), 1e-8);
}

TEST(FmCenter, TranslatedGaussian)
{
    Vec v(2);
    v << 0.7, -0.4;
    const FnN f = [&](std::span<const double> x) {
        const double a = x[0] - v[0], b = x[1] - v[1];
        return std::exp(-0.5 * (a * a + b * b));
    };
    const CenterResult c = fm_center(f, 2, Vec::Zero(2), 1e-9);
    EXPECT_LT((c.z - v).norm(), 1e-7);
}

TEST(FmCenter, SkewedOneDimensionalIsMedian)
{
    // In 1D K_{f,z} = [-∫_{-∞}^z f, ∫_z^∞ f], so the center is the median of f.
    auto phi = [](double x) { return x < 0.0 ? 0.5 * x * x : 2.0 * x * x; };
    const FnN f = [&](std::span<const double> x) { return std::exp(-phi(x[0])); };
    const double left = std::sqrt(kPi / 2.0), right = 0.5 * std::sqrt(kPi / 2.0);
    const double half = 0.5 * (left + right);
    // ∫_{-∞}^z e^{-x²/2} = √(2π) Φ(z) for z < 0; bisection on the median condition.
    double lo = -3.0, hi = 0.0;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        const double mass = std::sqrt(2 * kPi) * 0.5 * std::erfc(-mid / std::sqrt(2.0));
        (mass < half ? lo : hi) = mid;
    }
    RayOptions ray;
    ray.tol = 1e-13;
    const CenterResult c = fm_center(f, 1, Vec::Constant(1, 0.5), 1e-11, 200, ray);
    EXPECT_NEAR(c.z[0], 0.5 * (lo + hi), 1e-8);
}

TEST(FmCenter, TranslationEquivariance)
{
    Vec v(2);
    v << 0.25, 0.5;
    auto skew = [](double a, double b) { return std::exp(-(a < 0 ? 0.5 * a * a : 1.5 * a * a) - 0.5 * b * b - 0.2 * a * b); };
    const FnN f = [&](std::span<const double> x) { return skew(x[0], x[1]); };
    const FnN g = [&](std::span<const double> x) { return skew(x[0] - v[0], x[1] - v[1]); };
    const Vec a = fm_center(f, 2, Vec::Zero(2), 1e-10).z;
    const Vec b = fm_center(g, 2, v, 1e-10).z;
    EXPECT_LT((b - a - v).norm(), 1e-7);
}

TEST(FmCenter, IterationCapCarriesBestIterate)
{
    const FnN f = [](std::span<const double> x) { return std::exp(-0.5 * sq(x) - x[0]); };
    try {
        fm_center(f, 2, Vec::Zero(2), 1e-14, 1);
        FAIL() << "expected NoConvergence";
    } catch (const NoConvergence& e) {
        EXPECT_EQ(e.best().size(), 2);
    }
}

TEST(PolarInclusion, GaussianEqualityIsTight)
{
    const auto w = exp_weight();
    const FnN f = [](std::span<const double> x) { return std::exp(-sq(x)); };
    const ConvexBody K = ball_body(f, 2, Vec::Zero(2));
    const double m = polar_inclusion_margin(w, K, K, Convention::Square);
    EXPECT_LE(m, 1e-6);
    EXPECT_GT(m, -1e-6);
}

TEST(PolarInclusion, LinearFamilyTAndInverse)
{
    const auto w = exp_weight();
    Mat T(2, 2);
    T << 2.0, 0.3, 0.3, 0.5;
    const Mat Ti = T.inverse();
    auto gauss = [](const Mat& A) {
        return FnN([A](std::span<const double> x) {
            Vec v(2);
            v << x[0], x[1];
            return std::exp(-(A * v).squaredNorm());
        });
    };
    const ConvexBody Kf = ball_body(gauss(T), 2, Vec::Zero(2));
    const ConvexBody Kg = ball_body(gauss(Ti), 2, Vec::Zero(2));
    const double m = polar_inclusion_margin(w, Kf, Kg, Convention::Square);
    EXPECT_LE(m, 1e-6);
    EXPECT_GT(m, -1e-3);
}

TEST(PolarInclusion, ShrunkBodyIsStrict)
{
    const auto w = exp_weight();
    const FnN f = [](std::span<const double> x) { return std::exp(-4.0 * sq(x)); };
    const FnN g = [](std::span<const double> x) { return std::exp(-sq(x)); };
    const double m = polar_inclusion_margin(w, ball_body(f, 2, Vec::Zero(2)), ball_body(g, 2, Vec::Zero(2)), Convention::Square);
    EXPECT_NEAR(m, -0.5, 1e-6);
}

TEST(PolarInclusion, HypothesisPairsAcrossWeights)
{
    Mat A(2, 2);
    A << 1.2, 0.3, 0.3, 0.7;
    Vec b(2);
    b << 0.2, -0.1;
    const Mat Ai = A.inverse();
    for (Convention c : {Convention::Square, Convention::HalfSquare}) {
        const double k = c == Convention::Square ? 2.0 : 1.0;
        for (const auto& spec : {WeightSpec::exp(), WeightSpec::linear(0.5), WeightSpec::power(2.0)}) {
            const auto w = validate_weight(spec);
            const FnN f = [&](std::span<const double> x) {
                Vec v(2);
                v << x[0], x[1];
                return w.rho(k * (0.5 * v.dot(A * v) + b.dot(v)));
            };
            const FnN g = [&](std::span<const double> y) {
                Vec v(2);
                v << y[0] - b[0], y[1] - b[1];
                return w.rho(k * 0.5 * v.dot(Ai * v));
            };
            const double m = polar_inclusion_margin(w, ball_body(f, 2, Vec::Zero(2)), ball_body(g, 2, Vec::Zero(2)), c);
            EXPECT_LE(m, 1e-6) << spec.kind_name() << " " << convention_name(c);
        }
    }
}

TEST(PolarInclusion, GridFieldsFromLegendrePair)
{
    const auto w = exp_weight();
    const auto pair = functional_pair(w, half_quadratic(2, 6.0, 129), Vec::Zero(2), Convention::HalfSquare);
    const double m = polar_inclusion_check(w, pair.f, pair.g, Vec::Zero(2), Convention::HalfSquare);
    EXPECT_LE(m, 1e-2);
    EXPECT_GT(m, -1e-2);
}

TEST(Borell, ExponentialEquality)
{
    const Fn1 M = [](double t) { return std::exp(-t); };
    const BorellReport r = borell_check(M, M, M);
    EXPECT_NEAR(r.hypothesis_margin, 0.0, 1e-12);
    EXPECT_NEAR(r.ratio, 1.0, 1e-10);
}

TEST(Borell, ScaledPairsKeepRatioOne)
{
    const Fn1 M = [](double t) { return t * t * std::exp(-std::pow(t, 1.5)); };
    for (auto [a, b] : {std::pair{0.5, 3.0}, std::pair{4.0, 0.25}, std::pair{1.3, 1.7}}) {
        const Fn1 F = [&](double t) { return a * M(b * t); };
        const Fn1 G = [&](double t) { return M(t / b) / a; };
        const BorellReport r = borell_check(M, F, G);
        EXPECT_GE(r.hypothesis_margin, -1e-9);
        EXPECT_NEAR(r.ratio, 1.0, 1e-6);
    }
}

TEST(Borell, MassRemovalIsStrict)
{
    const Fn1 M = [](double t) { return std::exp(-t); };
    const Fn1 F = [&](double t) { return t <= 1.0 ? M(t) : 0.0; };
    const BorellReport r = borell_check(M, F, M);
    EXPECT_GE(r.hypothesis_margin, -1e-9);
    EXPECT_NEAR(r.ratio, 1.0 - std::exp(-1.0), 1e-9);
}

TEST(Borell, RandomValidTriplesStayBelowOne)
{
    CounterRng rng(7);
    std::uint64_t k = 0;
    for (int i = 0; i < 100; ++i) {
        const double q = 2.0 * rng.uniform(k++), p = 0.5 + 1.5 * rng.uniform(k++), c = 0.5 + rng.uniform(k++);
        const double a = std::exp(2.0 * rng.uniform(k++) - 1.0), b = std::exp(2.0 * rng.uniform(k++) - 1.0);
        const double kappa = rng.uniform(k++);
        const Fn1 M = [=](double t) { return std::pow(t, q) * std::exp(-c * std::pow(t, p)); };
        const Fn1 F = [=](double t) { return a * M(b * t) * std::exp(-kappa * t); };
        const Fn1 G = [=](double t) { return M(t / b) / a; };
        const BorellReport r = borell_check(M, F, G);
        ASSERT_GE(r.hypothesis_margin, -1e-9) << i;
        EXPECT_LE(r.ratio, 1.0 + 1e-9) << i;
    }
}

TEST(BorellFit, IdentityAndInverseScaling)
{
    const Fn1 M = [](double t) { return t * std::exp(-t * t); };
    const BorellReport id = borell_fit(M, M, M);
    EXPECT_NEAR(id.fit_a, 1.0, 1e-3);
    EXPECT_NEAR(id.fit_b, 1.0, 1e-3);
    EXPECT_LT(id.l1_f, 1e-3);

    const Fn1 F = [&](double t) { return 2.0 * M(3.0 * t); };
    const Fn1 G = [&](double t) { return 0.5 * M(t / 3.0); };
    const BorellReport r = borell_fit(M, F, G);
    EXPECT_NEAR(r.fit_a, 0.5, 1e-3);
    EXPECT_NEAR(r.fit_b, 1.0 / 3.0, 1e-3);
    EXPECT_LT(r.l1_f, 1e-3);
    EXPECT_LT(r.l1_g, 1e-3);
}

TEST(BorellFit, PerturbationSweepConverges)
{
    const Fn1 M = [](double t) { return std::exp(-t); };
    double prev_l1 = kInf, prev_ratio = 0.0;
    for (double delta : {0.2, 0.1, 0.05, 0.025}) {
        const Fn1 F = [&](double t) { return M(t) * (1.0 + delta * std::sin(t)) / (1.0 + delta); };
        const BorellReport r = borell_fit(M, F, M);
        EXPECT_GE(r.hypothesis_margin, -1e-9);
        EXPECT_LT(r.ratio, 1.0);
        EXPECT_GT(r.ratio, prev_ratio);
        EXPECT_LT(r.l1_f, prev_l1);
        prev_l1 = r.l1_f;
        prev_ratio = r.ratio;
    }
}
