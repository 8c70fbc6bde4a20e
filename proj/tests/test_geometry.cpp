#include "santalo/geometry.hpp"

#include <gtest/gtest.h>

#include <numbers>
#include <random>

using namespace santalo;

namespace {

Vec v2(double x, double y)
{
    Vec v(2);
    v << x, y;
    return v;
}

std::vector<Vec> square() { return {v2(1, 1), v2(-1, 1), v2(-1, -1), v2(1, -1)}; }

std::vector<Vec> regular_triangle(double r = 1.0, double phase = std::numbers::pi / 2)
{
    std::vector<Vec> t;
    for (int k = 0; k < 3; ++k) {
        const double a = phase + 2.0 * std::numbers::pi * k / 3.0;
        t.push_back(v2(r * std::cos(a), r * std::sin(a)));
    }
    return t;
}

std::vector<Vec> random_points(std::mt19937_64& rng, int dim, int count)
{
    std::normal_distribution<double> g;
    std::vector<Vec> pts;
    for (int i = 0; i < count; ++i) {
        Vec p(dim);
        for (int k = 0; k < dim; ++k) p[k] = g(rng);
        pts.push_back(p);
    }
    return pts;
}

// Brute-force oracle: V(K^z) minimized over a zooming grid of centers.
Vec grid_search_santalo(const ConvexBody& K)
{
    Vec best = body_measures(K).centroid;
    double span = 0.25 * K.diameter();
    for (int level = 0; level < 30; ++level) {
        Vec center = best;
        double best_val = kInf;
        for (int i = -4; i <= 4; ++i)
            for (int j = -4; j <= 4; ++j) {
                Vec z = center + v2(i, j) * (span / 4);
                if (K.interior_margin(z) <= 0) continue;
                const double v = body_measures(polar_body(K, z)).volume;
                if (v < best_val) best_val = v, best = z;
            }
        span /= 3;
    }
    return best;
}

}  // namespace

TEST(Polar, SquareGivesCrossPolytope)
{
    const auto P = polar_body(ConvexBody::polytope(square()), v2(0, 0));
    const std::vector<Vec> cross = {v2(1, 0), v2(0, 1), v2(-1, 0), v2(0, -1)};
    EXPECT_LT(vertex_hausdorff(P.as_polytope().vertices, cross), 1e-12);
}

TEST(Polar, RegularTriangleDoublesAndRotates)
{
    const auto P = polar_body(ConvexBody::polytope(regular_triangle()), v2(0, 0));
    const auto expected = regular_triangle(2.0, std::numbers::pi / 2 + std::numbers::pi);
    EXPECT_LT(vertex_hausdorff(P.as_polytope().vertices, expected), 1e-12);
}

TEST(Polar, BallIsSelfDual)
{
    const auto B = polar_body(ConvexBody::ball(3), Vec::Zero(3));
    EXPECT_LT((B.as_ellipsoid().shape - Mat::Identity(3, 3)).norm(), 1e-14);
    const auto R = polar_body(ConvexBody::radial_ball(2), Vec::Zero(2));
    for (double r : R.as_radial().radii) EXPECT_NEAR(r, 1.0, 1e-12);
}

TEST(Polar, OffCenterEllipsoidMatchesSupportDuality)
{
    Mat A(2, 2);
    A << 2.0, 0.3, 0.3, 0.7;
    const auto E = ConvexBody::ellipsoid(v2(0.2, -0.1), A);
    const Vec z = v2(0.4, 0.3);
    const auto P = polar_body(E, z);
    // Boundary of K^z: x - z = u / h_{K-z}(u).
    for (int k = 0; k < 32; ++k) {
        const double a = 2 * std::numbers::pi * k / 32;
        const Vec u = v2(std::cos(a), std::sin(a));
        const double h = E.support(u) - z.dot(u);
        EXPECT_NEAR(P.radial_function(z, u), 1.0 / h, 1e-10);
    }
}

TEST(Polar, CenterOutsideIsRejected)
{
    const auto K = ConvexBody::polytope(square());
    EXPECT_THROW(polar_body(K, v2(1, 0)), DomainError);
    EXPECT_THROW(polar_body(K, v2(3, 0)), DomainError);
    try {
        polar_body(K, v2(2, 2));
    } catch (const DomainError& e) {
        EXPECT_STREQ(e.what(), "center not interior");
    }
}

TEST(Polar, DegenerateHullIsRejected)
{
    EXPECT_THROW(ConvexBody::polytope({v2(0, 0), v2(1, 1), v2(2, 2)}), DomainError);
}

TEST(Polar, InvolutionOnRandomPolytopes)
{
    std::mt19937_64 rng(7);
    for (int dim = 2; dim <= 4; ++dim) {
        for (int rep = 0; rep < 5; ++rep) {
            const auto K = ConvexBody::polytope(random_points(rng, dim, dim == 4 ? 10 : 14));
            const Vec z = body_measures(K).centroid;
            const auto back = polar_body(polar_body(K, z), z);
            EXPECT_LT(vertex_hausdorff(back.as_polytope().vertices, K.as_polytope().vertices), 1e-9);
        }
    }
}

TEST(Polar, OrderReversal)
{
    const auto K = ConvexBody::polytope(regular_triangle(0.5));
    const auto L = ConvexBody::radial_ball(2, 1.0, 256);
    ASSERT_TRUE(contains(L, K));
    const Vec z = v2(0.0, 0.0);
    EXPECT_TRUE(contains(polar_body(K, z), polar_body(L, z)));
}

TEST(Measures, Square)
{
    const auto m = body_measures(ConvexBody::polytope(square()));
    EXPECT_NEAR(m.volume, 4.0, 1e-14);
    EXPECT_LT(m.centroid.norm(), 1e-14);
}

TEST(Measures, TriangleShoelace)
{
    const auto m = body_measures(ConvexBody::polytope(regular_triangle()));
    EXPECT_NEAR(m.volume, 3.0 * std::sqrt(3.0) / 4.0, 1e-14);
    EXPECT_LT(m.centroid.norm(), 1e-14);
}

TEST(Measures, RadialDisk)
{
    EXPECT_NEAR(body_measures(ConvexBody::radial_ball(2, 1.0, 512)).volume, std::numbers::pi, 1e-4);
}

TEST(Measures, CubeAndSimplexInHigherDimensions)
{
    for (int d = 3; d <= 4; ++d) {
        std::vector<Vec> cube;
        for (int mask = 0; mask < (1 << d); ++mask) {
            Vec p(d);
            for (int k = 0; k < d; ++k) p[k] = (mask >> k & 1) ? 1.0 : 0.0;
            cube.push_back(p);
        }
        const auto m = body_measures(ConvexBody::polytope(cube));
        EXPECT_NEAR(m.volume, 1.0, 1e-13);
        EXPECT_LT((m.centroid - Vec::Constant(d, 0.5)).norm(), 1e-13);

        std::vector<Vec> simplex{Vec::Zero(d)};
        for (int k = 0; k < d; ++k) simplex.push_back(Vec::Unit(d, k));
        const auto s = body_measures(ConvexBody::polytope(simplex));
        EXPECT_NEAR(s.volume, 1.0 / std::tgamma(d + 1.0), 1e-14);
        EXPECT_LT((s.centroid - Vec::Constant(d, 1.0 / (d + 1))).norm(), 1e-14);
    }
}

TEST(Measures, EllipsoidConvention)
{
    Mat A = Mat::Identity(3, 3);
    A(0, 0) = 4.0;
    const auto m = body_measures(ConvexBody::ellipsoid(Vec::Zero(3), A));
    EXPECT_NEAR(m.volume, 4.0 / 3.0 * std::numbers::pi / 2.0, 1e-13);
}

TEST(VolumeProduct, SquareTriangleDisk)
{
    EXPECT_NEAR(volume_product(ConvexBody::polytope(square()), v2(0, 0)), 8.0, 1e-12);
    EXPECT_NEAR(volume_product(ConvexBody::polytope(regular_triangle()), v2(0, 0)), 27.0 / 4.0, 1e-12);
    EXPECT_NEAR(volume_product(ConvexBody::radial_ball(2, 1.0, 512), v2(0, 0)), std::numbers::pi * std::numbers::pi,
                1e-4);
}

TEST(Exact, PolygonPolarAndArea)
{
    using namespace exact;
    std::vector<Point2> sq{from_double(1, 1), from_double(-1, 1), from_double(-1, -1), from_double(1, -1)};
    const auto P = polar(sq, from_double(0, 0));
    EXPECT_EQ(area(sq) * area(P), Rational(8));
    EXPECT_EQ(polar(P, from_double(0, 0)), hull(sq));
}

TEST(Exact, InvolutionIsExactOnRandomPolygons)
{
    using namespace exact;
    std::mt19937_64 rng(3);
    std::uniform_int_distribution<int> coord(-20, 20);
    for (int rep = 0; rep < 20; ++rep) {
        std::vector<Point2> pts;
        for (int i = 0; i < 10; ++i) pts.push_back({Rational(coord(rng)), Rational(coord(rng))});
        pts.push_back({Rational(30), Rational(0)});
        pts.push_back({Rational(-30), Rational(1)});
        pts.push_back({Rational(0), Rational(30)});
        pts.push_back({Rational(1), Rational(-30)});
        const Point2 z{Rational(1, 3), Rational(-2, 7)};
        EXPECT_EQ(polar(polar(pts, z), z), hull(pts));
    }
}

TEST(Santalo, SymmetricBodiesGiveOrigin)
{
    const auto s = santalo_point(ConvexBody::polytope(square()), 1e-10);
    EXPECT_LT(s.z.norm(), 1e-9);
    EXPECT_NEAR(s.product, 8.0, 1e-10);
    const auto b = santalo_point(ConvexBody::radial_ball(2, 1.0, 512), 1e-10);
    EXPECT_LT(b.z.norm(), 1e-9);
    EXPECT_NEAR(b.product, std::numbers::pi * std::numbers::pi, 1e-4);
}

TEST(Santalo, TriangleMatchesCentroidAndGridSearch)
{
    std::mt19937_64 rng(11);
    for (int rep = 0; rep < 5; ++rep) {
        const auto pts = random_points(rng, 2, 3);
        const auto K = ConvexBody::polytope(pts);
        const Vec centroid = (pts[0] + pts[1] + pts[2]) / 3.0;
        const auto s = santalo_point(K, 1e-10);
        EXPECT_LT((s.z - centroid).norm(), 1e-6);
        EXPECT_LT((grid_search_santalo(K) - centroid).norm(), 1e-6);
        EXPECT_LE(s.product, std::numbers::pi * std::numbers::pi);
        EXPECT_NEAR(s.product, 27.0 / 4.0, 1e-9);
    }
}

TEST(Santalo, StationarityAndBlaschkeSantaloOnRandomBodies)
{
    std::mt19937_64 rng(5);
    for (int dim = 2; dim <= 3; ++dim) {
        for (int rep = 0; rep < 3; ++rep) {
            const auto K = ConvexBody::polytope(random_points(rng, dim, 12));
            const double tol = 1e-8;
            const auto s = santalo_point(K, tol);
            const double bound = std::pow(unit_ball_volume(dim), 2);
            EXPECT_LE(s.product, bound + 1e-9);
            // Finite-difference gradient and axis neighbours.
            const double f0 = body_measures(polar_body(K, s.z)).volume;
            const double h = 1e-5;
            Vec g(dim);
            for (int k = 0; k < dim; ++k) {
                Vec zp = s.z, zm = s.z;
                zp[k] += h;
                zm[k] -= h;
                const double fp = body_measures(polar_body(K, zp)).volume;
                const double fm = body_measures(polar_body(K, zm)).volume;
                g[k] = (fp - fm) / (2 * h);
                Vec np = s.z, nm = s.z;
                np[k] += 10 * tol;
                nm[k] -= 10 * tol;
                EXPECT_GE(body_measures(polar_body(K, np)).volume, f0 - 1e-13 * f0);
                EXPECT_GE(body_measures(polar_body(K, nm)).volume, f0 - 1e-13 * f0);
            }
            EXPECT_LT(g.norm(), 1e-6);
        }
    }
}

TEST(BanachMazur, BallEllipsoidSquare)
{
    EXPECT_EQ(bm_ball_upper(ConvexBody::ball(2)), 0.0);
    Mat A(2, 2);
    A << 3.0, 1.0, 1.0, 2.0;
    EXPECT_EQ(bm_ball_upper(ConvexBody::ellipsoid(v2(1, 2), A)), 0.0);
    EXPECT_NEAR(bm_ball_upper(ConvexBody::polytope(square())), std::log(std::sqrt(2.0)), 1e-6);
}

TEST(BanachMazur, MveeMatchesSquareOracle)
{
    const Ellipsoid E = min_volume_enclosing_ellipsoid(square());
    EXPECT_LT((E.shape - 0.5 * Mat::Identity(2, 2)).norm(), 1e-8);
    EXPECT_LT(E.center.norm(), 1e-10);
}

TEST(BanachMazur, LinearInvariance)
{
    std::mt19937_64 rng(17);
    std::normal_distribution<double> g;
    for (int dim = 2; dim <= 3; ++dim) {
        for (int rep = 0; rep < 4; ++rep) {
            const auto K = ConvexBody::polytope(random_points(rng, dim, 10));
            Mat T(dim, dim);
            for (int i = 0; i < dim; ++i)
                for (int j = 0; j < dim; ++j) T(i, j) = g(rng);
            T += 2.0 * Mat::Identity(dim, dim);
            const double a = bm_ball_upper(K), b = bm_ball_upper(K.affine_image(T, Vec::Zero(dim)));
            EXPECT_NEAR(a, b, 1e-6);
            EXPECT_GT(a, 0.0);
        }
    }
}

TEST(Sandwich, BallCases)
{
    const auto B = ConvexBody::ball(2);
    const auto r = sandwich_check({B, B, v2(0, 0), 0.2});
    EXPECT_TRUE(r.hypothesis_ok);
    EXPECT_TRUE(r.conclusion_ok);
    const auto r2 = sandwich_check({ConvexBody::ball(2, 1.2), B, v2(0, 0), 0.2});
    EXPECT_TRUE(r2.hypothesis_ok);
    EXPECT_TRUE(r2.conclusion_ok);
}

TEST(Sandwich, PreconditionsAreChecked)
{
    const auto B = ConvexBody::ball(2);
    EXPECT_THROW(sandwich_check({B.translated(v2(0.1, 0)), B, v2(0, 0), 0.2}), DomainError);
    EXPECT_THROW(sandwich_check({B, B, v2(0, 0), 0.4}), DomainError);
}
