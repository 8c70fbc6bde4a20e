#include "santalo/quad.hpp"

#include "santalo/error.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <queue>

namespace santalo {

namespace {

constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
    double a, b, value, error;
    bool operator<(const Segment& o) const { return error < o.error; }
};

Segment gk15(const Fn1& f, double a, double b)
{
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    const double fc = f(c);
    double kron = fc * kWgk[7];
    double gauss = fc * kWg[3];
    for (int j = 0; j < 7; ++j) {
        const double dx = h * kXgk[j];
        const double s = f(c - dx) + f(c + dx);
        kron += kWgk[j] * s;
        if (j % 2 == 1) gauss += kWg[j / 2] * s;
    }
    kron *= h;
    gauss *= h;
    return {a, b, kron, std::abs(kron - gauss)};
}

}  // namespace

void QuadratureSpec::validate() const
{
    require(tol > 0.0, "quadrature tol must be positive");
    require(max_evals >= 100, "quadrature max_evals must be at least 100");
}

QuadResult integrate_adaptive(const Fn1& f, double a, double b, double tol_abs, double tol_rel, long max_evals)
{
    QuadResult r;
    if (a == b) return r;
    std::priority_queue<Segment> heap;
    Segment first = gk15(f, a, b);
    r.evals = 15;
    double value = first.value, error = first.error;
    heap.push(first);
    while (error > std::max(tol_abs, tol_rel * std::abs(value))) {
        if (r.evals + 30 > max_evals) {
            r.converged = false;
            break;
        }
        Segment worst = heap.top();
        const double mid = 0.5 * (worst.a + worst.b);
        if (!(mid > worst.a && mid < worst.b)) {
            r.converged = false;
            break;
        }
        heap.pop();
        Segment left = gk15(f, worst.a, mid), right = gk15(f, mid, worst.b);
        r.evals += 30;
        value += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
    }
    // Re-sum to shed accumulated cancellation in the running totals.
    value = 0.0;
    error = 0.0;
    while (!heap.empty()) {
        value += heap.top().value;
        error += heap.top().error;
        heap.pop();
    }
    r.value = value;
    r.error = error;
    return r;
}

QuadResult integrate_to_infinity(const Fn1& f, double a, double tol_abs, double tol_rel, double scale, long max_evals)
{
    QuadResult total;
    double lo = a, width = scale;
    int quiet = 0;
    for (int chunk = 0; chunk < 64; ++chunk) {
        const long budget = std::max<long>(100, max_evals - total.evals);
        QuadResult part = integrate_adaptive(f, lo, lo + width, 0.25 * tol_abs, tol_rel, budget);
        total.value += part.value;
        total.error += part.error;
        total.evals += part.evals;
        total.converged = total.converged && part.converged;
        const double thr = 0.1 * std::max(tol_abs, tol_rel * std::abs(total.value));
        quiet = (std::abs(part.value) <= thr) ? quiet + 1 : 0;
        if (chunk >= 1 && quiet >= 2) return total;
        if (total.evals >= max_evals) break;
        lo += width;
        width *= 2.0;
    }
    total.converged = false;
    return total;
}

void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights)
{
    nodes.assign(n, 0.0);
    weights.assign(n, 0.0);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            if (n == 1) p0 = 1.0;
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = weights[n - 1 - i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
}

int default_sphere_size(int dim)
{
    switch (dim) {
    case 1: return 2;
    case 2: return 512;
    case 3: return 2048;
    case 4: return 8192;
    default: throw DomainError("sphere grid dimension must be in [1,4]");
    }
}

SphereGrid make_sphere_grid(int dim, int size)
{
    if (size <= 0) size = default_sphere_size(dim);
    SphereGrid g;
    g.dim = dim;
    const double pi = std::numbers::pi;
    switch (dim) {
    case 1:
        g.label = "pm1";
        g.directions = {Vec::Constant(1, 1.0), Vec::Constant(1, -1.0)};
        g.weights = {1.0, 1.0};
        break;
    case 2:
        require(size >= 8, "planar sphere grid needs at least 8 directions");
        g.label = "uniform" + std::to_string(size);
        for (int k = 0; k < size; ++k) {
            const double t = 2.0 * pi * k / size;
            Vec u(2);
            u << std::cos(t), std::sin(t);
            g.directions.push_back(u);
            g.weights.push_back(2.0 * pi / size);
        }
        break;
    case 3: {
        require(size >= 16, "Fibonacci sphere grid needs at least 16 directions");
        g.label = "fib" + std::to_string(size);
        const double golden = pi * (3.0 - std::sqrt(5.0));
        for (int i = 0; i < size; ++i) {
            const double z = 1.0 - (2.0 * i + 1.0) / size;
            const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
            const double phi = golden * i;
            Vec u(3);
            u << r * std::cos(phi), r * std::sin(phi), z;
            g.directions.push_back(u);
            g.weights.push_back(4.0 * pi / size);
        }
        break;
    }
    case 4: {
        const int m = std::max(2, static_cast<int>(std::lround(std::cbrt(size / 2.0))));
        g.label = "gauss" + std::to_string(2 * m * m * m);
        std::vector<double> xn, wn;
        gauss_legendre(m, xn, wn);
        const int nphi = 2 * m;
        for (int a = 0; a < m; ++a) {
            const double th1 = 0.5 * pi * (xn[a] + 1.0);
            const double w1 = 0.5 * pi * wn[a] * std::sin(th1) * std::sin(th1);
            for (int b = 0; b < m; ++b) {
                const double c2 = xn[b];
                const double s2 = std::sqrt(1.0 - c2 * c2);
                for (int c = 0; c < nphi; ++c) {
                    const double phi = 2.0 * pi * c / nphi;
                    Vec u(4);
                    u << std::cos(th1), std::sin(th1) * c2, std::sin(th1) * s2 * std::cos(phi),
                        std::sin(th1) * s2 * std::sin(phi);
                    g.directions.push_back(u);
                    g.weights.push_back(w1 * wn[b] * 2.0 * pi / nphi);
                }
            }
        }
        break;
    }
    default: throw DomainError("sphere grid dimension must be in [1,4]");
    }
    return g;
}

SphereGrid sphere_grid_from_label(int dim, const std::string& label)
{
    auto count = [&](const std::string& prefix) -> int {
        if (label.rfind(prefix, 0) != 0) return -1;
        try {
            return std::stoi(label.substr(prefix.size()));
        } catch (const std::exception&) {
            throw ParseError("bad sphere grid label: " + label);
        }
    };
    if (label == "pm1" && dim == 1) return make_sphere_grid(1);
    if (int n = count("uniform"); n > 0 && dim == 2) return make_sphere_grid(2, n);
    if (int n = count("fib"); n > 0 && dim == 3) return make_sphere_grid(3, n);
    if (int n = count("gauss"); n > 0 && dim == 4) return make_sphere_grid(4, n);
    throw ParseError("sphere grid label '" + label + "' does not match dimension " + std::to_string(dim));
}

QuadResult integrate_radial(const FnN& f, int n, const QuadratureSpec& spec, int sphere_size)
{
    spec.validate();
    const SphereGrid grid = make_sphere_grid(n, sphere_size);
    QuadResult total;
    std::vector<double> x(n);
    for (std::size_t k = 0; k < grid.size(); ++k) {
        const Vec& u = grid.directions[k];
        auto ray = [&](double r) {
            for (int i = 0; i < n; ++i) x[i] = r * u[i];
            const double v = f(std::span<const double>(x));
            return v == 0.0 ? 0.0 : std::pow(r, n - 1) * v;
        };
        QuadResult part = integrate_to_infinity(ray, 0.0, 1e-2 * spec.tol, spec.tol, 1.0, spec.max_evals);
        total.value += grid.weights[k] * part.value;
        total.error += grid.weights[k] * part.error;
        total.evals += part.evals;
        total.converged = total.converged && part.converged;
    }
    return total;
}

double integrate_grid(const GridField& field, const Fn1& weight)
{
    const GridSpec& g = field.grid();
    const int d = g.dim();
    double sum = 0.0;
    std::vector<int> idx(d, 0);
    for (std::size_t flat = 0; flat < field.size(); ++flat) {
        std::size_t rem = flat;
        double w = 1.0;
        for (int k = d - 1; k >= 0; --k) {
            const int i = static_cast<int>(rem % g.shape[k]);
            rem /= g.shape[k];
            if (i == 0 || i == g.shape[k] - 1) w *= 0.5;
        }
        const double v = weight(field[flat]);
        if (v != 0.0) sum += w * v;
    }
    return sum * g.cell_volume();
}

std::uint64_t CounterRng::bits(std::uint64_t counter) const
{
    std::uint64_t z = seed_ + (counter + 1) * 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

double CounterRng::uniform(std::uint64_t counter) const
{
    return static_cast<double>(bits(counter) >> 11) * 0x1.0p-53;
}

McDomain McDomain::box(Vec lo, Vec hi)
{
    McDomain d;
    d.kind = Kind::Box;
    d.lo = std::move(lo);
    d.hi = std::move(hi);
    return d;
}

McDomain McDomain::ball(Vec center, double radius)
{
    McDomain d;
    d.kind = Kind::Ball;
    d.center = std::move(center);
    d.radius = radius;
    return d;
}

McResult integrate_mc(const FnN& f, const McDomain& domain, const QuadratureSpec& spec)
{
    spec.validate();
    const int n = domain.dim();
    Vec lo(n), hi(n);
    if (domain.kind == McDomain::Kind::Box) {
        lo = domain.lo;
        hi = domain.hi;
    } else {
        lo = domain.center.array() - domain.radius;
        hi = domain.center.array() + domain.radius;
    }
    const double volume = (hi - lo).prod();
    const CounterRng rng(spec.seed);
    constexpr long kBatch = 4096;
    const long total = spec.max_evals;
    double sum = 0.0, sum_sq = 0.0;
    std::vector<double> x(n);
    for (long start = 0; start < total; start += kBatch) {
        double bs = 0.0, bsq = 0.0;
        const long stop = std::min(total, start + kBatch);
        for (long i = start; i < stop; ++i) {
            double r2 = 0.0;
            for (int k = 0; k < n; ++k) {
                const double u = rng.uniform(static_cast<std::uint64_t>(i) * n + k);
                x[k] = lo[k] + u * (hi[k] - lo[k]);
                if (domain.kind == McDomain::Kind::Ball) r2 += (x[k] - domain.center[k]) * (x[k] - domain.center[k]);
            }
            double v = 0.0;
            if (domain.kind == McDomain::Kind::Box || r2 <= domain.radius * domain.radius)
                v = f(std::span<const double>(x));
            bs += v;
            bsq += v * v;
        }
        sum += bs;
        sum_sq += bsq;
    }
    const double mean = sum / total;
    const double var = std::max(0.0, sum_sq / total - mean * mean);
    McResult r;
    r.estimate = volume * mean;
    r.stderr_ = volume * std::sqrt(var / total);
    r.samples = total;
    r.seed = spec.seed;
    return r;
}

}  // namespace santalo
