#include "santalo/error.hpp"
#include "santalo/quad.hpp"

#include <gtest/gtest.h>

#include <numbers>
#include <random>

using namespace santalo;

namespace {
constexpr double kPi = std::numbers::pi;

double gauss_sq(std::span<const double> x)
{
    double r2 = 0.0;
    for (double v : x) r2 += v * v;
    return std::exp(-r2);
}
}  // namespace

TEST(Adaptive, PolynomialsAndSingularEndpoint)
{
    auto r = integrate_adaptive([](double x) { return x * x * x; }, 0.0, 2.0, 1e-14, 1e-14);
    EXPECT_NEAR(r.value, 4.0, 1e-13);
    r = integrate_adaptive([](double x) { return 1.0 / std::sqrt(x); }, 0.0, 1.0, 1e-10, 1e-10);
    EXPECT_NEAR(r.value, 2.0, 1e-8);
    EXPECT_TRUE(r.converged);
}

TEST(Adaptive, BudgetExhaustionIsReported)
{
    auto r = integrate_adaptive([](double x) { return std::sin(1.0 / (x + 1e-6)); }, 0.0, 1.0, 1e-15, 1e-15, 200);
    EXPECT_FALSE(r.converged);
}

TEST(Adaptive, SemiInfinite)
{
    auto r = integrate_to_infinity([](double t) { return std::exp(-t); }, 0.0, 1e-14, 1e-13);
    EXPECT_NEAR(r.value, 1.0, 1e-12);
    r = integrate_to_infinity([](double t) { return t * t * t * std::exp(-t * t); }, 0.0, 1e-14, 1e-13);
    EXPECT_NEAR(r.value, 0.5, 1e-12);
}

TEST(GaussLegendre, IntegratesPolynomialsExactly)
{
    std::vector<double> x, w;
    for (int n = 1; n <= 12; ++n) {
        gauss_legendre(n, x, w);
        for (int p = 0; p <= 2 * n - 1; ++p) {
            double s = 0.0;
            for (int i = 0; i < n; ++i) s += w[i] * std::pow(x[i], p);
            const double exact = p % 2 ? 0.0 : 2.0 / (p + 1);
            EXPECT_NEAR(s, exact, 1e-13) << n << " " << p;
        }
    }
}

TEST(SphereGrid, WeightsSumToArea)
{
    for (int d = 1; d <= 4; ++d) {
        const auto g = make_sphere_grid(d);
        double s = 0.0;
        for (double w : g.weights) s += w;
        EXPECT_NEAR(s, unit_sphere_area(d), 1e-10);
        for (const Vec& u : g.directions) EXPECT_NEAR(u.norm(), 1.0, 1e-14);
    }
    EXPECT_EQ(make_sphere_grid(2).label, "uniform512");
    EXPECT_EQ(make_sphere_grid(3).label, "fib2048");
    EXPECT_EQ(make_sphere_grid(4).label, "gauss8192");
    EXPECT_EQ(sphere_grid_from_label(3, "fib100").size(), 100u);
    EXPECT_THROW(sphere_grid_from_label(2, "fib100"), ParseError);
}

TEST(SphereGrid, FourDimensionalGridIntegratesQuadraticMoments)
{
    const auto g = make_sphere_grid(4);
    // ∫_{S^3} u_k^2 = |S^3| / 4.
    for (int k = 0; k < 4; ++k) {
        double s = 0.0;
        for (std::size_t i = 0; i < g.size(); ++i) s += g.weights[i] * g.directions[i][k] * g.directions[i][k];
        EXPECT_NEAR(s, unit_sphere_area(4) / 4, 1e-10);
    }
}

TEST(Radial, Gaussians)
{
    QuadratureSpec spec;
    spec.tol = 1e-10;
    EXPECT_NEAR(integrate_radial(gauss_sq, 2, spec).value, kPi, 1e-9);
    auto half = [](std::span<const double> x) {
        double r2 = 0.0;
        for (double v : x) r2 += v * v;
        return std::exp(-0.5 * r2);
    };
    EXPECT_NEAR(integrate_radial(half, 2, spec).value, 2 * kPi, 1e-8);
}

TEST(Radial, BallIndicator)
{
    auto ind = [](std::span<const double> x) {
        double r2 = 0.0;
        for (double v : x) r2 += v * v;
        return r2 <= 1.0 ? 1.0 : 0.0;
    };
    QuadratureSpec spec;
    spec.tol = 1e-8;
    EXPECT_NEAR(integrate_radial(ind, 3, spec).value, 4 * kPi / 3, 1e-4);
}

TEST(Grid, TrapezoidBasics)
{
    const auto one = GridField::sample(GridSpec::cube(2, 0.0, 1.0, 9), [](auto) { return 1.0; });
    EXPECT_NEAR(integrate_grid(one, [](double v) { return v; }), 1.0, 1e-14);

    const auto phi = GridField::sample(GridSpec::cube(2, -6.0, 6.0, 121),
                                       [](std::span<const double> x) { return 0.5 * (x[0] * x[0] + x[1] * x[1]); });
    const double I = integrate_grid(phi, [](double t) { return std::exp(-t); });
    EXPECT_NEAR(I, 2 * kPi, 0.005 * 2 * kPi);
}

TEST(Grid, InfiniteRegionContributesNothing)
{
    const auto f = GridField::sample(GridSpec::cube(1, 0.0, 2.0, 201),
                                     [](std::span<const double> x) { return x[0] > 1.0 ? kInf : 0.0; });
    const double I = integrate_grid(f, [](double t) { return is_inf(t) ? 0.0 : std::exp(-t); });
    EXPECT_NEAR(I, 1.0, 0.01);
}

TEST(Grid, RefinementRatioNearFour)
{
    auto err = [](int n) {
        const auto f = GridField::sample(GridSpec::cube(2, 0.0, 1.0, n),
                                         [](std::span<const double> x) { return std::sin(x[0] + 2 * x[1]); });
        const double exact = (-std::sin(3.0) + std::sin(1.0) + std::sin(2.0)) / 2.0;
        return std::abs(integrate_grid(f, [](double v) { return v; }) - exact);
    };
    const double ratio = err(17) / err(33);
    EXPECT_GE(ratio, 3.0);
    EXPECT_LE(ratio, 5.0);
}

TEST(MonteCarlo, UnitSquareAndGaussian)
{
    QuadratureSpec spec;
    spec.max_evals = 10000;
    Vec lo = Vec::Zero(2), hi = Vec::Ones(2);
    auto r = integrate_mc([](auto) { return 1.0; }, McDomain::box(lo, hi), spec);
    EXPECT_EQ(r.estimate, 1.0);
    EXPECT_EQ(r.stderr_, 0.0);

    spec.max_evals = 1000000;
    const McDomain box = McDomain::box(Vec::Constant(2, -5.0), Vec::Constant(2, 5.0));
    r = integrate_mc(gauss_sq, box, spec);
    EXPECT_LT(std::abs(r.estimate - kPi), 3 * r.stderr_);
    const auto again = integrate_mc(gauss_sq, box, spec);
    EXPECT_EQ(r.estimate, again.estimate);
    EXPECT_EQ(r.stderr_, again.stderr_);
}

TEST(MonteCarlo, BallDomain)
{
    QuadratureSpec spec;
    spec.max_evals = 200000;
    const auto r = integrate_mc([](auto) { return 1.0; }, McDomain::ball(Vec::Zero(3), 1.0), spec);
    EXPECT_LT(std::abs(r.estimate - 4 * kPi / 3), 4 * r.stderr_);
}

TEST(CrossMethod, RadialGridAndMonteCarloAgree)
{
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> U(0.5, 2.0), S(-0.3, 0.3);
    for (int rep = 0; rep < 10; ++rep) {
        const double a = U(rng), b = U(rng), c = S(rng);
        // Positive-definite quadratic form exp(-(a x² + b y² + 2c x y)).
        auto f = [=](std::span<const double> x) {
            return std::exp(-(a * x[0] * x[0] + b * x[1] * x[1] + 2 * c * x[0] * x[1]));
        };
        const double exact = kPi / std::sqrt(a * b - c * c);
        QuadratureSpec spec;
        spec.tol = 1e-9;
        const double radial = integrate_radial(f, 2, spec).value;
        const auto field = GridField::sample(GridSpec::cube(2, -8.0, 8.0, 161), f);
        const double grid = integrate_grid(field, [](double v) { return v; });
        EXPECT_NEAR(radial, exact, 1e-6);
        EXPECT_NEAR(grid, exact, 1e-6);
        spec.max_evals = 100000;
        spec.seed = 1000 + rep;
        const auto mc = integrate_mc(f, McDomain::box(Vec::Constant(2, -8.0), Vec::Constant(2, 8.0)), spec);
        EXPECT_LT(std::abs(mc.estimate - exact), 4 * mc.stderr_);
    }
}

TEST(Spec, Validation)
{
    QuadratureSpec s;
    s.tol = 0.0;
    EXPECT_THROW(s.validate(), DomainError);
    s.tol = 1e-6;
    s.max_evals = 10;
    EXPECT_THROW(s.validate(), DomainError);
}
