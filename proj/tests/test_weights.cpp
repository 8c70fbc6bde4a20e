#include "santalo/error.hpp"
#include "santalo/grid_field.hpp"
#include "santalo/weights.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace santalo;

namespace {

// Independent bisection for the crossing of two decreasing curves after 0.
double bisect(const std::function<double(double)>& d, double lo, double hi)
{
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        (d(mid) > 0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

std::string error_of(const std::function<void()>& f)
{
    try {
        f();
    } catch (const DomainError& e) {
        return e.what();
    }
    return "";
}

}  // namespace

TEST(Weights, ExponentialIsFixedPoint)
{
    const auto w = validate_weight(WeightSpec::exp());
    EXPECT_NEAR(w.rho(0), 1.0, 1e-15);
    EXPECT_NEAR(w.alpha_prime_0, 1.0, 1e-15);
    EXPECT_TRUE(w.degenerate_crossing);
    EXPECT_EQ(w.t0, 1.0);
    EXPECT_TRUE(w.strictly_decreasing);
}

TEST(Weights, LinearCutoffCrossing)
{
    const auto w = validate_weight(WeightSpec::linear(0.5));
    EXPECT_NEAR(w.rho(0), 1.0, 1e-15);
    EXPECT_NEAR(w.rho(1.0), 0.5, 1e-12);
    EXPECT_NEAR(w.support_end, 2.0, 1e-12);
    const double oracle = bisect([](double t) { return 1 - t / 2 - std::exp(-t); }, 1.0, 2.0);
    EXPECT_NEAR(w.t0, oracle, 1e-10);
    EXPECT_NEAR(w.t0, 1.5936, 1e-4);
    EXPECT_NEAR(w.alpha_prime_0, 0.5, 1e-12);
}

TEST(Weights, RateTwoRescalesToExponential)
{
    const auto w = validate_weight(WeightSpec::exp(2.0));
    EXPECT_NEAR(w.spec.arg_scale * w.spec.param, 1.0, 1e-15);
    EXPECT_NEAR(w.spec.value_scale, 1.0, 1e-15);
    for (double t : {0.1, 1.0, 5.0}) EXPECT_NEAR(w.rho(t), std::exp(-t), 1e-14);
}

TEST(Weights, PowerAndSampledKinds)
{
    const auto p = validate_weight(WeightSpec::power(3.0));
    EXPECT_NEAR(p.rho(0), 1.0, 1e-15);
    // ∫ (1 - s/3)^3 ds = 3/4 before normalization.
    EXPECT_NEAR(p.spec.arg_scale, 0.75, 1e-12);
    EXPECT_GE(p.t0, 1.0 - 1e-9);

    std::vector<double> t, rho;
    for (int i = 0; i <= 40; ++i) t.push_back(0.5 * i), rho.push_back(std::exp(-0.5 * i));
    const auto s = validate_weight(WeightSpec::sampled(t, rho));
    for (double x : {0.3, 2.7, 30.0}) EXPECT_NEAR(s.rho(x), std::exp(-x), 1e-12);
    EXPECT_TRUE(s.degenerate_crossing);
}

TEST(Weights, CustomWeightMatchesClosedForm)
{
    const auto c = validate_weight(WeightSpec::custom([](double t) { return std::max(0.0, 1.0 - t / 2); }));
    const auto l = validate_weight(WeightSpec::linear(0.5));
    EXPECT_NEAR(c.t0, l.t0, 1e-9);
    EXPECT_NEAR(c.alpha_prime_0, l.alpha_prime_0, 1e-6);
    EXPECT_NEAR(c.support_end, 2.0, 1e-12);
}

TEST(Weights, Rejections)
{
    EXPECT_EQ(error_of([] { validate_weight(WeightSpec::custom([](double t) { return 0.5 * (std::exp(-t) + std::exp(-10 * t)); })); }),
              "not log-concave");
    EXPECT_EQ(error_of([] { validate_weight(WeightSpec::sampled({0, 1, 2}, {1.0, 2.0, 0.5})); }), "not non-increasing");
    EXPECT_EQ(error_of([] { validate_weight(WeightSpec::custom([](double) { return 1.0; })); }), "not integrable");
    EXPECT_EQ(error_of([] { validate_weight(WeightSpec::custom([](double t) { return 1.0 / (1.0 + t); })); }),
              "not integrable");
    EXPECT_THROW(WeightSpec::linear(-1.0), DomainError);
}

TEST(Weights, NormalizationIsIdempotent)
{
    for (const auto& spec : {WeightSpec::exp(3.0), WeightSpec::linear(0.2), WeightSpec::power(2.0)}) {
        const auto a = validate_weight(spec);
        const auto b = validate_weight(a.spec);
        EXPECT_NEAR(b.spec.value_scale, a.spec.value_scale, 1e-12);
        EXPECT_NEAR(b.spec.arg_scale, a.spec.arg_scale, 1e-12 * a.spec.arg_scale);
        EXPECT_NEAR(b.t0, a.t0, 1e-12);
        for (int n = 1; n <= 4; ++n) EXPECT_NEAR(b.moment(n), a.moment(n), 1e-12);
    }
}

TEST(Weights, MomentsAndGaussianBound)
{
    const auto e = validate_weight(WeightSpec::exp());
    EXPECT_NEAR(e.moment(2), 0.5, 1e-12);
    EXPECT_NEAR(e.moment(4), 0.5, 1e-12);
    EXPECT_NEAR(e.moment(1), std::sqrt(std::numbers::pi) / 2, 1e-12);
    for (const auto& spec : {WeightSpec::linear(1.0), WeightSpec::power(1.5), WeightSpec::power(7.0)}) {
        const auto w = validate_weight(spec);
        for (int n = 2; n <= 4; ++n) EXPECT_LE(w.moment(n), std::tgamma(0.5 * n) / 2 + 1e-9);
    }
}

TEST(Weights, MomentBoundFailsInDimensionOne)
{
    // ∫_0^√2 (1 - r²/2) dr = 2√2/3 > √π/2.
    const auto w = validate_weight(WeightSpec::linear(0.5));
    EXPECT_NEAR(w.moment(1), 2 * std::sqrt(2.0) / 3, 1e-12);
    EXPECT_GT(w.moment(1), std::sqrt(std::numbers::pi) / 2);
}

TEST(Weights, CrossingSignsAndAlphaStarSlope)
{
    for (const auto& spec : {WeightSpec::linear(0.5), WeightSpec::power(2.0), WeightSpec::power(5.0)}) {
        const auto w = validate_weight(spec);
        EXPECT_GE(w.t0, 1.0 - 1e-9);
        EXPECT_GT(w.alpha_prime_0, 0.0);
        EXPECT_LE(w.alpha_prime_0, 1.0 + 1e-12);
        for (double t = 0.01; t < 6.0; t += 0.01) {
            if (t < w.t0 - 1e-9) EXPECT_GE(w.rho(t) - std::exp(-t), -1e-12) << t;
            if (t > w.t0 + 1e-9) EXPECT_LE(w.rho(t) - std::exp(-t), 1e-12) << t;
        }
        const AlphaStar star = alpha_star_extend(w);
        const double h = 1e-3;
        for (double t = -3.0; t < 1.0; t += h) {
            if (is_inf(star.alpha(t + h))) break;
            EXPECT_GE((star.alpha(t + h) - star.alpha(t)) / h, w.alpha_prime_0 - 1e-9);
        }
        EXPECT_NEAR(star.rho(-1.0), std::exp(w.alpha_prime_0), 1e-12);
    }
}

TEST(Profiles, LaplaceGaussianTent)
{
    const auto lap = profiles::laplace();
    EXPECT_TRUE(lap.degenerate_crossing);
    EXPECT_EQ(lap.r0, 0.5);

    const auto tent = profiles::tent();
    const double tent_oracle = bisect([](double r) { return 1 - r - std::exp(-2 * r); }, 0.5, 1.0);
    EXPECT_NEAR(tent.r0, tent_oracle, 1e-10);
    EXPECT_NEAR(tent.r0, 0.797, 1e-3);

    const auto gauss = profiles::gaussian();
    const double g_oracle = bisect([](double r) { return std::exp(-std::numbers::pi * r * r) - std::exp(-2 * r); }, 0.1, 2.0);
    EXPECT_NEAR(gauss.r0, g_oracle, 1e-10);
    EXPECT_GE(gauss.r0, 0.5);
    for (const auto* p : {&lap, &tent, &gauss}) {
        EXPECT_GE(p->omega(0.5), std::exp(-1.0) - 1e-12);
        for (double r = 0; r <= 0.5; r += 0.01) EXPECT_GE(p->omega(r), 1 - 2 * r - 1e-12);
    }
}

TEST(Profiles, MomentMatchesFactorialFormula)
{
    // ∫ r^{n-1} e^{-2r} dr = (n-1)! / 2^n.
    const auto lap = profiles::laplace();
    EXPECT_NEAR(profile_moment(lap, 3), 0.25, 1e-12);
    EXPECT_NEAR(profile_moment(lap, 1), 0.5, 1e-12);
}

TEST(Profiles, Rejections)
{
    EXPECT_EQ(error_of([] { even_profile([](double r) { return std::max(0.0, 1 - std::abs(r) / 2); }); }),
              "profile not normalized: integral != 1");
    EXPECT_EQ(error_of([] { even_profile([](double r) { return 2 * std::exp(-4 * std::abs(r)); }); }),
              "profile not normalized: omega(0) != 1");
    EXPECT_EQ(error_of([] { even_profile([](double r) { return std::exp(-2 * std::abs(r)) * (r >= 0 ? 1.0 : 0.999); }); }),
              "profile not even");
}
