#pragma once

#include "santalo/error.hpp"
#include "santalo/linalg.hpp"
#include "santalo/quad.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <array>
#include <variant>
#include <vector>

namespace santalo {

/// Halfspace <normal, x> <= offset with a unit normal.
struct Facet {
    Vec normal;
    double offset = 0.0;
    std::vector<int> vertices;  // indices of input points on the facet
};

struct Polytope {
    std::vector<Vec> vertices;  // extreme points only
    std::vector<Facet> facets;
};

/// {x : (x - c)^T A (x - c) <= 1}
struct Ellipsoid {
    Vec center;
    Mat shape;
};

/// Star body around `center` with radial function sampled on a sphere grid.
struct RadialBody {
    SphereGrid grid;
    std::vector<double> radii;
    Vec center;
};

class ConvexBody {
public:
    using Rep = std::variant<Polytope, Ellipsoid, RadialBody>;

    /// Hull of the points; non-extreme points are dropped.
    static ConvexBody polytope(const std::vector<Vec>& points);
    static ConvexBody ellipsoid(const Vec& center, const Mat& shape);
    static ConvexBody ball(int dim, double radius = 1.0);
    static ConvexBody radial(SphereGrid grid, std::vector<double> radii, const Vec& center);
    /// Euclidean ball sampled on the default (or given) sphere grid.
    static ConvexBody radial_ball(int dim, double radius = 1.0, int sphere_size = 0);

    int dim() const { return dim_; }
    const Rep& rep() const { return rep_; }
    const Vec& interior_point() const { return interior_; }

    bool is_polytope() const { return std::holds_alternative<Polytope>(rep_); }
    bool is_ellipsoid() const { return std::holds_alternative<Ellipsoid>(rep_); }
    bool is_radial() const { return std::holds_alternative<RadialBody>(rep_); }
    const Polytope& as_polytope() const { return std::get<Polytope>(rep_); }
    const Ellipsoid& as_ellipsoid() const { return std::get<Ellipsoid>(rep_); }
    const RadialBody& as_radial() const { return std::get<RadialBody>(rep_); }

    double support(const Vec& u) const;
    /// Distance from p to the boundary along the unit direction u (p interior).
    /// Radial bodies answer only for p = center and grid directions exactly;
    /// other directions use the nearest grid direction.
    double radial_function(const Vec& p, const Vec& u) const;
    /// Signed slack of the tightest constraint at x, positive inside.
    double interior_margin(const Vec& x) const;
    double diameter() const;

    /// Image x -> M x + t.
    ConvexBody affine_image(const Mat& M, const Vec& t) const;
    ConvexBody translated(const Vec& t) const;
    ConvexBody scaled(double s) const;  // about the origin

private:
    ConvexBody(int dim, Rep rep, Vec interior);
    int dim_ = 0;
    Rep rep_;
    Vec interior_;
};

/// Facets of conv(points) by exhaustive d-subset enumeration. Throws
/// "degenerate body" when the points do not span the space.
std::vector<Facet> hull_facets(const std::vector<Vec>& points);

struct BodyMeasures {
    double volume = 0.0;
    Vec centroid;
};

BodyMeasures body_measures(const ConvexBody& K);

/// K^z = {x : <x - z, y - z> <= 1 for all y in K}.
ConvexBody polar_body(const ConvexBody& K, const Vec& z);

double volume_product(const ConvexBody& K, const Vec& z);

/// ∇_z V(K^z) = (n + 1) V(K^z) (centroid(K^z) - z).
Vec polar_volume_gradient(const ConvexBody& K, const Vec& z);

struct SantaloPoint {
    Vec z;
    double product = 0.0;
    double gradient_norm = 0.0;
    int iterations = 0;
};

/// Minimizes z -> V(K^z) until the gradient norm drops below tol.
/// Throws NoConvergence carrying the best iterate.
SantaloPoint santalo_point(const ConvexBody& K, double tol = 1e-9, int max_iter = 200);

/// Upper bound on log δ_BM(K, B^n): the better of the Löwner ellipsoid shrunk
/// into K and the polar-Löwner ellipsoid inflated around K.
double bm_ball_upper(const ConvexBody& K);

/// Polar of an ellipsoid with respect to an interior point z.
Ellipsoid polar_ellipsoid(const Ellipsoid& E, const Vec& z);

/// Minimal enclosing ellipsoid of a point set (Todd-Yildirim with away steps),
/// rescaled so every point is inside.
Ellipsoid min_volume_enclosing_ellipsoid(const std::vector<Vec>& points, double tol = 1e-10,
                                         int max_iter = 100000);

/// outer ⊇ inner: exact facet/vertex tests when a polytope or ellipsoid pair
/// allows it, else support-function sampling on the default sphere grid.
bool contains(const ConvexBody& outer, const ConvexBody& inner, double tol = 1e-9);

struct SandwichInput {
    ConvexBody body;
    ConvexBody ellipsoid;  // 0-symmetric
    Vec w;
    double mu = 0.0;
};

struct SandwichReport {
    bool hypothesis_ok = false;
    bool conclusion_ok = false;
    double centroid_offset = 0.0;
};

/// Hypothesis: E ⊂ K - w ⊂ (1 + μ)E. Conclusion:
/// (1 - μ√(n+1))E ⊂ K ⊂ (1 + 2μ√(n+1))E. Requires centroid(K) = 0 to
/// 1e-8 diam(K).
SandwichReport sandwich_check(const SandwichInput& in);

double vertex_hausdorff(const std::vector<Vec>& a, const std::vector<Vec>& b);

/// Iteration cap reached; carries the best iterate found.
class NoConvergence : public DomainError {
public:
    NoConvergence(const std::string& what, Vec best) : DomainError(what), best_(std::move(best)) {}
    const Vec& best() const { return best_; }

private:
    Vec best_;
};

namespace exact {

using Rational = boost::multiprecision::cpp_rational;
using Point2 = std::array<Rational, 2>;

/// Convex hull in counter-clockwise order, collinear points dropped.
std::vector<Point2> hull(std::vector<Point2> pts);
std::vector<Point2> polar(const std::vector<Point2>& polygon, const Point2& z);
Rational area(const std::vector<Point2>& polygon);
Point2 from_double(double x, double y);

}  // namespace exact

}  // namespace santalo
