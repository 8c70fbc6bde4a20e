#pragma once

#include "santalo/grid_field.hpp"
#include "santalo/linalg.hpp"

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace santalo {

enum class QuadMethod { Adaptive1D, RadialSpherical, TensorGrid, MonteCarlo };

struct QuadratureSpec {
    QuadMethod method = QuadMethod::Adaptive1D;
    double tol = 1e-10;
    long max_evals = 200000;
    std::uint64_t seed = 0x5eed5a17a10ULL;

    void validate() const;
};

struct QuadResult {
    double value = 0.0;
    double error = 0.0;
    long evals = 0;
    bool converged = true;
};

using Fn1 = std::function<double(double)>;
using FnN = std::function<double(std::span<const double>)>;

/// Adaptive Gauss-Kronrod 7/15 on [a, b] with interval bisection. Stops when
/// the summed error estimate is below max(tol_abs, tol_rel * |value|).
QuadResult integrate_adaptive(const Fn1& f, double a, double b, double tol_abs, double tol_rel,
                              long max_evals = 200000);

/// Integral over [a, +∞): doubling chunks until two consecutive chunks are
/// below a tenth of the tolerance. `scale` is the length of the first chunk.
QuadResult integrate_to_infinity(const Fn1& f, double a, double tol_abs, double tol_rel,
                                 double scale = 1.0, long max_evals = 400000);

/// Gauss-Legendre nodes and weights on [-1, 1].
void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights);

/// Fixed quadrature grid on S^{n-1}: weights sum to the sphere area.
/// n=1: {±1}; n=2: uniform angles; n=3: Fibonacci lattice; n=4: product Gauss grid.
struct SphereGrid {
    int dim = 0;
    std::string label;
    std::vector<Vec> directions;
    std::vector<double> weights;

    std::size_t size() const { return directions.size(); }
};

int default_sphere_size(int dim);
SphereGrid make_sphere_grid(int dim, int size = 0);
/// Parses labels such as "uniform512", "fib2048", "gauss8192", "pm1".
SphereGrid sphere_grid_from_label(int dim, const std::string& label);

/// ∫_{R^n} f via sphere grid × adaptive radial quadrature along rays.
QuadResult integrate_radial(const FnN& f, int n, const QuadratureSpec& spec, int sphere_size = 0);

/// Tensor trapezoidal integral of weight(field) over the box. weight receives
/// extended reals; callers map +∞ to a finite value (e.g. ϱ(∞) = 0).
double integrate_grid(const GridField& field, const Fn1& weight);

/// Counter-based generator: the k-th draw depends only on (seed, k), so any
/// batching of the stream reproduces the same numbers.
class CounterRng {
public:
    explicit CounterRng(std::uint64_t seed) : seed_(seed) {}
    std::uint64_t bits(std::uint64_t counter) const;
    double uniform(std::uint64_t counter) const;
    std::uint64_t seed() const { return seed_; }
    static constexpr const char* name = "splitmix64-counter";

private:
    std::uint64_t seed_;
};

struct McDomain {
    enum class Kind { Box, Ball } kind = Kind::Box;
    Vec lo, hi;      // box
    Vec center;      // ball
    double radius = 1.0;

    static McDomain box(Vec lo, Vec hi);
    static McDomain ball(Vec center, double radius);
    int dim() const { return static_cast<int>(kind == Kind::Box ? lo.size() : center.size()); }
};

struct McResult {
    double estimate = 0.0;
    double stderr_ = 0.0;
    long samples = 0;
    std::uint64_t seed = 0;
};

/// Uniform-sampling Monte Carlo estimate with standard error; samples =
/// spec.max_evals, drawn in fixed-size batches from CounterRng(spec.seed).
McResult integrate_mc(const FnN& f, const McDomain& domain, const QuadratureSpec& spec);

}  // namespace santalo
