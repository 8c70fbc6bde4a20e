#include "santalo/io.hpp"

#include "santalo/error.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <iterator>
#include <numbers>
#include <sstream>

namespace santalo::io {

namespace {

std::string read_bytes(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open " + path.string());
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

const Json& field(const Json& j, const char* key)
{
    if (!j.is_object() || !j.contains(key)) throw ParseError(std::string("missing field \"") + key + "\"");
    return j.at(key);
}

std::string get_string(const Json& j, const char* key)
{
    const Json& v = field(j, key);
    if (!v.is_string()) throw ParseError(std::string("field \"") + key + "\" must be a string");
    return v.get<std::string>();
}

double get_number_or(const Json& j, const char* key, double fallback)
{
    return j.is_object() && j.contains(key) ? get_number(j.at(key)) : fallback;
}

int get_int(const Json& j)
{
    if (!j.is_number_integer()) throw ParseError("expected an integer");
    return j.get<int>();
}

std::vector<double> get_doubles(const Json& j)
{
    if (!j.is_array()) throw ParseError("expected an array of numbers");
    std::vector<double> out;
    for (const Json& v : j) out.push_back(get_number(v));
    return out;
}

int dim_of_label(const std::string& label)
{
    if (label.rfind("pm", 0) == 0) return 1;
    if (label.rfind("uniform", 0) == 0) return 2;
    if (label.rfind("fib", 0) == 0) return 3;
    if (label.rfind("gauss", 0) == 0) return 4;
    throw ParseError("unknown sphere grid label " + label);
}

ConvexFlag parse_flag(const Json& j)
{
    if (!j.contains("convex")) return ConvexFlag::Unknown;
    const std::string s = get_string(j, "convex");
    if (s == "known") return ConvexFlag::KnownConvex;
    if (s == "unknown") return ConvexFlag::Unknown;
    if (s == "nonconvex") return ConvexFlag::KnownNonconvex;
    throw ParseError("convex must be known, unknown or nonconvex");
}

GridSpec box_grid(const Json& box, int n, const std::vector<int>& shape)
{
    const std::vector<double> lo = get_doubles(field(box, "lo")), hi = get_doubles(field(box, "hi"));
    if (static_cast<int>(lo.size()) != n || static_cast<int>(hi.size()) != n)
        throw ParseError("box bounds must match the field dimension");
    return GridSpec(lo, hi, shape);
}

std::vector<int> shape_for(const Json& j, int n, int grid)
{
    if (j.contains("shape")) {
        std::vector<int> shape;
        for (const Json& v : field(j, "shape")) shape.push_back(get_int(v));
        if (static_cast<int>(shape.size()) != n) throw ParseError("shape must match the field dimension");
        return shape;
    }
    return std::vector<int>(n, grid > 0 ? grid : default_grid_size(n));
}

// Box of half-width √(72/λ_min) about c: φ reaches 36 on its boundary.
GridSpec default_box(const Json& j, const Mat& A, const Vec& c, const std::vector<int>& shape)
{
    const int n = static_cast<int>(c.size());
    if (j.contains("box")) return box_grid(j.at("box"), n, shape);
    const double lmin = Eigen::SelfAdjointEigenSolver<Mat>(A).eigenvalues().minCoeff();
    require(lmin > 0.0, "quadratic matrix must be positive definite");
    const double h = std::sqrt(72.0 / lmin);
    std::vector<double> lo(n), hi(n);
    for (int k = 0; k < n; ++k) lo[k] = c[k] - h, hi[k] = c[k] + h;
    return GridSpec(lo, hi, shape);
}

Mat matrix_or_identity(const Json& j, int& n)
{
    if (j.contains("matrix")) {
        Mat A = get_mat(j.at("matrix"));
        if (A.rows() != A.cols() || A.rows() < 1 || A.rows() > kMaxDim) throw ParseError("matrix must be square, dim 1..4");
        n = static_cast<int>(A.rows());
        return 0.5 * (A + A.transpose());
    }
    n = j.contains("dim") ? get_int(j.at("dim")) : 2;
    if (n < 1 || n > kMaxDim) throw ParseError("dim must be in 1..4");
    return Mat::Identity(n, n);
}

Vec vec_or_zero(const Json& j, const char* key, int n)
{
    if (!j.contains(key)) return Vec::Zero(n);
    Vec v = get_vec(j.at(key));
    if (v.size() != n) throw ParseError(std::string(key) + " must match the field dimension");
    return v;
}

Json psi_row_json(const PsiRow& r) { return Json{{"R", number(r.R)}, {"measure", number(r.measure)}, {"bound", number(r.bound)}}; }

void flatten(const Json& j, const std::string& prefix, std::ostringstream& out)
{
    if (j.is_object()) {
        for (const auto& [k, v] : j.items()) flatten(v, prefix.empty() ? k : prefix + "." + k, out);
    } else if (j.is_array()) {
        for (std::size_t i = 0; i < j.size(); ++i) flatten(j[i], prefix + "[" + std::to_string(i) + "]", out);
    } else if (j.is_number_integer()) {
        out << prefix << "," << j.dump() << "\n";
    } else if (j.is_number()) {
        out << prefix << "," << csv_number(j.get<double>()) << "\n";
    } else if (j.is_boolean()) {
        out << prefix << "," << (j.get<bool>() ? "true" : "false") << "\n";
    } else if (j.is_string()) {
        std::string s = j.get<std::string>();
        if (s.find_first_of(",\"\n") != std::string::npos) {
            std::string q = "\"";
            for (char ch : s) q += ch == '"' ? std::string("\"\"") : std::string(1, ch);
            s = q + "\"";
        }
        out << prefix << "," << s << "\n";
    } else {
        out << prefix << ",\n";
    }
}

}  // namespace

Json parse_json(const std::string& text)
{
    try {
        return Json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("malformed JSON: ") + e.what());
    }
}

Json read_json_file(const std::filesystem::path& path) { return parse_json(read_bytes(path)); }

std::string file_digest(const std::filesystem::path& path)
{
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : read_bytes(path)) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    char buf[40];
    std::snprintf(buf, sizeof buf, "fnv1a64:%016llx", static_cast<unsigned long long>(h));
    return buf;
}

Json number(double v)
{
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    return v;
}

double get_number(const Json& j)
{
    if (j.is_number()) return j.get<double>();
    if (j.is_string()) {
        const std::string s = j.get<std::string>();
        if (s == "inf") return kInf;
        if (s == "-inf") return -kInf;
        if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
    }
    throw ParseError("expected a number");
}

Json vec_json(const Vec& v)
{
    Json a = Json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(number(v[i]));
    return a;
}

Vec get_vec(const Json& j)
{
    const std::vector<double> d = get_doubles(j);
    return Eigen::Map<const Vec>(d.data(), static_cast<Eigen::Index>(d.size()));
}

Json mat_json(const Mat& m)
{
    Json a = Json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) a.push_back(vec_json(m.row(i).transpose()));
    return a;
}

Mat get_mat(const Json& j)
{
    if (!j.is_array() || j.empty()) throw ParseError("expected a non-empty array of rows");
    const Eigen::Index rows = static_cast<Eigen::Index>(j.size());
    Mat m;
    for (Eigen::Index i = 0; i < rows; ++i) {
        const Vec r = get_vec(j[static_cast<std::size_t>(i)]);
        if (i == 0) m.resize(rows, r.size());
        if (r.size() != m.cols()) throw ParseError("matrix rows must have equal length");
        m.row(i) = r.transpose();
    }
    return m;
}

ConvexBody body_from_json(const Json& j)
{
    const std::string kind = get_string(j, "kind");
    if (kind == "polytope") {
        std::vector<Vec> pts;
        for (const Json& v : field(j, "vertices")) pts.push_back(get_vec(v));
        if (pts.empty()) throw ParseError("polytope needs vertices");
        for (const Vec& p : pts)
            if (p.size() != pts[0].size()) throw ParseError("vertices must share one dimension");
        return ConvexBody::polytope(pts);
    }
    if (kind == "ellipsoid") {
        const Vec c = get_vec(field(j, "center"));
        const Mat A = get_mat(field(j, "shape"));
        if (A.rows() != c.size() || A.cols() != c.size()) throw ParseError("ellipsoid shape must be dim × dim");
        return ConvexBody::ellipsoid(c, A);
    }
    if (kind == "ball") {
        const int n = get_int(field(j, "dim"));
        if (n < 1 || n > kMaxDim) throw ParseError("dim must be in 1..4");
        const double r = get_number_or(j, "radius", 1.0);
        if (j.contains("center")) return ConvexBody::ball(n, r).translated(vec_or_zero(j, "center", n));
        return ConvexBody::ball(n, r);
    }
    if (kind == "radial") {
        const std::string label = get_string(j, "grid");
        const int n = j.contains("dim") ? get_int(j.at("dim")) : dim_of_label(label);
        SphereGrid g = sphere_grid_from_label(n, label);
        std::vector<double> radii = get_doubles(field(j, "radii"));
        if (radii.size() != g.size()) throw ParseError("radii must match the sphere grid size");
        return ConvexBody::radial(std::move(g), std::move(radii), vec_or_zero(j, "center", n));
    }
    throw ParseError("unknown body kind " + kind);
}

Json body_json(const ConvexBody& K)
{
    if (K.is_polytope()) {
        Json v = Json::array();
        for (const Vec& p : K.as_polytope().vertices) v.push_back(vec_json(p));
        return Json{{"kind", "polytope"}, {"vertices", v}};
    }
    if (K.is_ellipsoid()) {
        const Ellipsoid& E = K.as_ellipsoid();
        return Json{{"kind", "ellipsoid"}, {"center", vec_json(E.center)}, {"shape", mat_json(E.shape)}};
    }
    const RadialBody& R = K.as_radial();
    Json radii = Json::array();
    for (double r : R.radii) radii.push_back(number(r));
    return Json{{"kind", "radial"}, {"dim", K.dim()}, {"grid", R.grid.label}, {"center", vec_json(R.center)}, {"radii", radii}};
}

WeightSpec weight_from_json(const Json& j)
{
    const std::string kind = get_string(j, "kind");
    if (kind == "exp") return WeightSpec::exp(get_number_or(j, "rate", 1.0));
    if (kind == "linear") return WeightSpec::linear(get_number(field(j, "slope")));
    if (kind == "power") return WeightSpec::power(get_number(field(j, "p")));
    if (kind == "sampled") {
        std::vector<double> t = get_doubles(field(j, "t")), rho = get_doubles(field(j, "rho"));
        if (t.size() != rho.size() || t.size() < 2) throw ParseError("sampled weight needs matching t and rho arrays");
        return WeightSpec::sampled(std::move(t), std::move(rho));
    }
    throw ParseError("unknown weight kind " + kind);
}

Json weight_json(const NormalizedWeight& w)
{
    Json moments = Json::array();
    for (double m : w.moments) moments.push_back(number(m));
    return Json{{"kind", w.spec.kind_name()},
                {"param", number(w.spec.param)},
                {"value_scale", number(w.spec.value_scale)},
                {"arg_scale", number(w.spec.arg_scale)},
                {"alpha_prime_0", number(w.alpha_prime_0)},
                {"t0", number(w.t0)},
                {"degenerate_crossing", w.degenerate_crossing},
                {"strictly_decreasing", w.strictly_decreasing},
                {"support_end", number(w.support_end)},
                {"moments", moments}};
}

GridField field_from_json(const Json& j, const FieldOptions& opt)
{
    const std::string kind = get_string(j, "kind");
    if (kind == "grid") {
        const Json& box = field(j, "box");
        const int n = static_cast<int>(field(box, "lo").size());
        if (n < 1 || n > kMaxDim) throw ParseError("grid dimension must be in 1..4");
        if (!j.contains("shape")) throw ParseError("grid field needs a shape");
        const GridSpec g = box_grid(box, n, shape_for(j, n, 0));
        std::filesystem::path p = get_string(j, "values");
        if (p.is_relative()) p = opt.base_dir / p;
        const std::string bytes = read_bytes(p);
        if (bytes.size() != g.size() * sizeof(double))
            throw ParseError("values file has " + std::to_string(bytes.size()) + " bytes, expected " +
                             std::to_string(g.size() * sizeof(double)));
        std::vector<double> values(g.size());
        std::memcpy(values.data(), bytes.data(), bytes.size());
        if constexpr (std::endian::native == std::endian::big) {
            for (double& v : values) {
                auto* b = reinterpret_cast<unsigned char*>(&v);
                std::reverse(b, b + sizeof(double));
            }
        }
        return make_field(g, std::move(values), parse_flag(j));
    }

    int n = 0;
    const Mat A = matrix_or_identity(j, n);
    const Vec c = vec_or_zero(j, "center", n);
    const double offset = get_number_or(j, "offset", 0.0);
    const GridSpec g = default_box(j, A, c, shape_for(j, n, opt.grid));
    auto quad = [A, c, offset, n](std::span<const double> x) {
        const Vec d = Eigen::Map<const Vec>(x.data(), n) - c;
        return 0.5 * d.dot(A * d) + offset;
    };
    if (kind == "quadratic") return GridField::sample(g, quad, ConvexFlag::KnownConvex);
    if (kind == "quadratic_plus_bump") {
        const double delta = get_number(field(j, "delta"));
        Vec b = Vec::Zero(n);
        b[0] = 1.0;
        if (j.contains("bump_center")) b = vec_or_zero(j, "bump_center", n);
        const double s = get_number_or(j, "bump_width", 1.0);
        require(s > 0.0, "bump_width must be positive");
        return GridField::sample(g, [=](std::span<const double> x) {
            const Vec d = Eigen::Map<const Vec>(x.data(), n) - b;
            return quad(x) + delta * std::exp(-0.5 * d.squaredNorm() / (s * s));
        });
    }
    if (kind == "truncated_quadratic") {
        const double r = get_number(field(j, "radius"));
        require(r > 0.0, "radius must be positive");
        return GridField::sample(
            g,
            [=](std::span<const double> x) {
                const Vec d = Eigen::Map<const Vec>(x.data(), n) - c;
                return d.squaredNorm() <= r * r ? quad(x) : kInf;
            },
            ConvexFlag::KnownConvex);
    }
    throw ParseError("unknown field kind " + kind);
}

Json write_grid_field(const GridField& f, const std::filesystem::path& values_path)
{
    std::ofstream out(values_path, std::ios::binary);
    if (!out) throw ParseError("cannot write " + values_path.string());
    out.write(reinterpret_cast<const char*>(f.values().data()),
              static_cast<std::streamsize>(f.size() * sizeof(double)));
    const GridSpec& g = f.grid();
    Json lo = Json::array(), hi = Json::array(), shape = Json::array();
    for (int k = 0; k < g.dim(); ++k) lo.push_back(g.lo[k]), hi.push_back(g.hi[k]), shape.push_back(g.shape[k]);
    return Json{{"kind", "grid"}, {"box", {{"lo", lo}, {"hi", hi}}}, {"shape", shape}, {"values", values_path.filename().string()}};
}

Fn1 function_from_json(const Json& j)
{
    const std::string kind = get_string(j, "kind");
    if (kind == "exp") {
        const double rate = get_number_or(j, "rate", 1.0);
        return [rate](double t) { return std::exp(-rate * std::abs(t)); };
    }
    if (kind == "gaussian") {
        const double s = get_number_or(j, "scale", 1.0);
        return [s](double t) { return std::exp(-(t / s) * (t / s)); };
    }
    if (kind == "gen_gaussian") {
        const double p = get_number(field(j, "p")), c = get_number_or(j, "c", 1.0);
        require(p >= 1.0, "gen_gaussian needs p >= 1");
        return [p, c](double t) { return std::exp(-std::pow(c * std::abs(t), p)); };
    }
    if (kind == "laplace") return profiles::laplace().omega;
    if (kind == "tent") return profiles::tent().omega;
    if (kind == "profile_gaussian") return profiles::gaussian().omega;
    if (kind == "gamma") {
        const double k = get_number(field(j, "k"));
        require(k >= 0.0, "gamma needs k >= 0");
        return [k](double t) { return t > 0.0 ? std::pow(t, k) * std::exp(-t) : 0.0; };
    }
    if (kind == "sampled") {
        const std::vector<double> t = get_doubles(field(j, "t")), v = get_doubles(field(j, "values"));
        if (t.size() != v.size() || t.size() < 2) throw ParseError("sampled function needs matching t and values");
        if (!std::is_sorted(t.begin(), t.end())) throw ParseError("sampled t must be ascending");
        return [t, v](double x) {
            if (x < t.front() || x > t.back()) return 0.0;
            const auto it = std::upper_bound(t.begin(), t.end(), x);
            const std::size_t i = std::min<std::size_t>(it - t.begin(), t.size() - 1);
            const double a = v[i - 1], b = v[i], s = (x - t[i - 1]) / (t[i] - t[i - 1]);
            if (a > 0.0 && b > 0.0) return a * std::pow(b / a, s);
            return a + s * (b - a);
        };
    }
    const Fn1 base = function_from_json(field(j, "base"));
    if (kind == "scaled") {
        const double a = get_number_or(j, "a", 1.0), b = get_number_or(j, "b", 1.0);
        return [=](double t) { return a * base(b * t); };
    }
    if (kind == "shifted") {
        const double s = get_number(field(j, "shift"));
        return [=](double t) { return base(t - s); };
    }
    if (kind == "tilted") {
        const double d = get_number(field(j, "delta")), s = get_number_or(j, "scale", 1.0);
        const std::string mode = j.contains("mode") ? get_string(j, "mode") : "peak";
        if (mode == "peak") return [=](double t) { return base(t) * std::exp(d * (1.0 - std::abs(t) / s)); };
        if (mode == "exp") return [=](double t) { return base(t) * std::exp(d * t / s); };
        throw ParseError("tilted mode must be peak or exp");
    }
    if (kind == "truncated") {
        const double lo = get_number_or(j, "lo", -kInf), hi = get_number_or(j, "hi", kInf);
        return [=](double t) { return t >= lo && t <= hi ? base(t) : 0.0; };
    }
    if (kind == "power") {
        const double u = get_number(field(j, "exponent"));
        return [=](double t) { return std::pow(base(t), u); };
    }
    throw ParseError("unknown function kind " + kind);
}

QuadratureSpec quadrature_from_json(const Json& j)
{
    QuadratureSpec q;
    if (j.contains("method")) {
        const std::string m = get_string(j, "method");
        if (m == "adaptive1d") q.method = QuadMethod::Adaptive1D;
        else if (m == "radial") q.method = QuadMethod::RadialSpherical;
        else if (m == "tensor") q.method = QuadMethod::TensorGrid;
        else if (m == "montecarlo") q.method = QuadMethod::MonteCarlo;
        else throw ParseError("unknown quadrature method " + m);
    }
    q.tol = get_number_or(j, "tol", q.tol);
    if (j.contains("max_evals")) q.max_evals = field(j, "max_evals").get<long>();
    if (j.contains("seed")) q.seed = field(j, "seed").get<std::uint64_t>();
    q.validate();
    return q;
}

Json quadrature_json(const QuadratureSpec& q)
{
    static const char* names[] = {"adaptive1d", "radial", "tensor", "montecarlo"};
    return Json{{"method", names[static_cast<int>(q.method)]},
                {"tol", number(q.tol)},
                {"max_evals", q.max_evals},
                {"seed", q.seed},
                {"rng", CounterRng::name}};
}

Json to_json(const BodyMeasures& m) { return Json{{"volume", number(m.volume)}, {"centroid", vec_json(m.centroid)}}; }

Json to_json(const SantaloPoint& s)
{
    return Json{{"z", vec_json(s.z)},
                {"product", number(s.product)},
                {"gradient_norm", number(s.gradient_norm)},
                {"iterations", s.iterations}};
}

Json to_json(const SandwichReport& r)
{
    return Json{{"hypothesis_ok", r.hypothesis_ok},
                {"conclusion_ok", r.conclusion_ok},
                {"centroid_offset", number(r.centroid_offset)}};
}

Json to_json(const SantaloReport& r)
{
    return Json{{"convention", convention_name(r.convention)},
                {"z", vec_json(r.z)},
                {"int_f", number(r.int_f)},
                {"int_g", number(r.int_g)},
                {"product", number(r.product)},
                {"reference", number(r.reference)},
                {"deficit_minus", number(r.deficit_minus)},
                {"deficit_plus", number(r.deficit_plus)},
                {"boundary_effect_radius", number(r.boundary_effect_radius)}};
}

SantaloReport santalo_report_from_json(const Json& j)
{
    SantaloReport r;
    r.convention = parse_convention(get_string(j, "convention"));
    r.z = get_vec(field(j, "z"));
    r.int_f = get_number(field(j, "int_f"));
    r.int_g = get_number(field(j, "int_g"));
    r.product = get_number(field(j, "product"));
    r.reference = get_number(field(j, "reference"));
    r.deficit_minus = get_number(field(j, "deficit_minus"));
    r.deficit_plus = get_number(field(j, "deficit_plus"));
    r.boundary_effect_radius = get_number(field(j, "boundary_effect_radius"));
    return r;
}

Json to_json(const CenterResult& r)
{
    return Json{{"z", vec_json(r.z)}, {"centroid_norm", number(r.centroid_norm)}, {"iterations", r.iterations}};
}

Json to_json(const BorellReport& r)
{
    Json j{{"hypothesis_margin", number(r.hypothesis_margin)},
           {"ratio", number(r.ratio)},
           {"int_m", number(r.int_m)},
           {"int_f", number(r.int_f)},
           {"int_g", number(r.int_g)},
           {"fitted", r.fitted}};
    if (r.fitted) {
        j["fit_a"] = number(r.fit_a);
        j["fit_b"] = number(r.fit_b);
        j["l1_f"] = number(r.l1_f);
        j["l1_g"] = number(r.l1_g);
        j["stagnated"] = r.stagnated;
    }
    return j;
}

BorellReport borell_report_from_json(const Json& j)
{
    BorellReport r;
    r.hypothesis_margin = get_number(field(j, "hypothesis_margin"));
    r.ratio = get_number(field(j, "ratio"));
    r.int_m = get_number(field(j, "int_m"));
    r.int_f = get_number(field(j, "int_f"));
    r.int_g = get_number(field(j, "int_g"));
    r.fitted = field(j, "fitted").get<bool>();
    if (r.fitted) {
        r.fit_a = get_number(field(j, "fit_a"));
        r.fit_b = get_number(field(j, "fit_b"));
        r.l1_f = get_number(field(j, "l1_f"));
        r.l1_g = get_number(field(j, "l1_g"));
        r.stagnated = field(j, "stagnated").get<bool>();
    }
    return r;
}

Json to_json(const std::vector<PsiRow>& rows)
{
    Json a = Json::array();
    for (const PsiRow& r : rows) a.push_back(psi_row_json(r));
    return a;
}

Json to_json(const StabilityFit& f)
{
    Json notes = Json::array();
    for (const std::string& s : f.notes) notes.push_back(s);
    return Json{{"z", vec_json(f.z)},
                {"c", number(f.c)},
                {"xi", number(f.xi)},
                {"T", mat_json(f.T)},
                {"eps", number(f.eps)},
                {"eps_raw", number(f.eps_raw)},
                {"R_eps", number(f.R_eps)},
                {"R_capped", f.R_capped},
                {"l1_primal", number(f.l1_primal)},
                {"l1_dual", number(f.l1_dual)},
                {"quad_tol", number(f.quad_tol)},
                {"psi_measure", to_json(f.psi_measure)},
                {"stagnated", f.stagnated},
                {"notes", notes}};
}

StabilityFit stability_fit_from_json(const Json& j)
{
    StabilityFit f;
    f.z = get_vec(field(j, "z"));
    f.c = get_number(field(j, "c"));
    f.xi = get_number(field(j, "xi"));
    f.T = get_mat(field(j, "T"));
    f.eps = get_number(field(j, "eps"));
    f.eps_raw = get_number(field(j, "eps_raw"));
    f.R_eps = get_number(field(j, "R_eps"));
    f.R_capped = field(j, "R_capped").get<bool>();
    f.l1_primal = get_number(field(j, "l1_primal"));
    f.l1_dual = get_number(field(j, "l1_dual"));
    f.quad_tol = get_number(field(j, "quad_tol"));
    for (const Json& r : field(j, "psi_measure"))
        f.psi_measure.push_back({get_number(field(r, "R")), get_number(field(r, "measure")), get_number(field(r, "bound"))});
    f.stagnated = field(j, "stagnated").get<bool>();
    for (const Json& s : field(j, "notes")) f.notes.push_back(s.get<std::string>());
    return f;
}

Json to_json(const CenterCheckReport& r)
{
    return Json{{"lhs", number(r.lhs)},
                {"rhs", number(r.rhs)},
                {"eps_measured", number(r.eps_measured)},
                {"eps_in", number(r.eps_in)},
                {"pass", r.pass},
                {"in_range", r.in_range}};
}

CenterCheckReport center_check_report_from_json(const Json& j)
{
    CenterCheckReport r;
    r.lhs = get_number(field(j, "lhs"));
    r.rhs = get_number(field(j, "rhs"));
    r.eps_measured = get_number(field(j, "eps_measured"));
    r.eps_in = get_number(field(j, "eps_in"));
    r.pass = field(j, "pass").get<bool>();
    r.in_range = field(j, "in_range").get<bool>();
    return r;
}

Json to_json(const CenterSearch& r)
{
    return Json{{"pairs", r.pairs},
                {"violations", r.violations},
                {"rejected", r.rejected},
                {"worst_ratio", number(r.worst_ratio)},
                {"seed", r.seed}};
}

Json to_json(const ScanCurve& c)
{
    Json pts = Json::array();
    for (const ScanPoint& p : c.points)
        pts.push_back(Json{{"delta", number(p.delta)},
                           {"eps", number(p.eps)},
                           {"eps_raw", number(p.eps_raw)},
                           {"R", number(p.R)},
                           {"l1_primal", number(p.l1_primal)},
                           {"l1_dual", number(p.l1_dual)},
                           {"distance", number(p.distance)},
                           {"exponent_running", number(p.exponent_running)}});
    return Json{{"family", c.family},
                {"n", c.n},
                {"points", pts},
                {"fitted_exponent", number(c.fitted_exponent)},
                {"fitted_constant", number(c.fitted_constant)},
                {"eps_monotone", c.eps_monotone},
                {"distance_monotone", c.distance_monotone},
                {"degenerate", c.degenerate},
                {"bound_constant", number(c.bound_constant)},
                {"bound_ok", c.bound_ok}};
}

ScanCurve scan_curve_from_json(const Json& j)
{
    ScanCurve c;
    c.family = get_string(j, "family");
    c.n = get_int(field(j, "n"));
    for (const Json& p : field(j, "points")) {
        ScanPoint s;
        s.delta = get_number(field(p, "delta"));
        s.eps = get_number(field(p, "eps"));
        s.eps_raw = get_number(field(p, "eps_raw"));
        s.R = get_number(field(p, "R"));
        s.l1_primal = get_number(field(p, "l1_primal"));
        s.l1_dual = get_number(field(p, "l1_dual"));
        s.distance = get_number(field(p, "distance"));
        s.exponent_running = get_number(field(p, "exponent_running"));
        c.points.push_back(s);
    }
    c.fitted_exponent = get_number(field(j, "fitted_exponent"));
    c.fitted_constant = get_number(field(j, "fitted_constant"));
    c.eps_monotone = field(j, "eps_monotone").get<bool>();
    c.distance_monotone = field(j, "distance_monotone").get<bool>();
    c.degenerate = field(j, "degenerate").get<bool>();
    c.bound_constant = get_number(field(j, "bound_constant"));
    c.bound_ok = field(j, "bound_ok").get<bool>();
    return c;
}

std::string csv_number(double v)
{
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string scan_csv(const ScanCurve& c)
{
    std::ostringstream out;
    out << "delta,eps,R,l1_primal,l1_dual,exponent_running,distance\n";
    for (const ScanPoint& p : c.points)
        out << csv_number(p.delta) << ',' << csv_number(p.eps) << ',' << csv_number(p.R) << ','
            << csv_number(p.l1_primal) << ',' << csv_number(p.l1_dual) << ',' << csv_number(p.exponent_running) << ','
            << csv_number(p.distance) << '\n';
    return out.str();
}

std::string psi_csv(const std::vector<PsiRow>& rows)
{
    std::ostringstream out;
    out << "R,measure,bound\n";
    for (const PsiRow& r : rows) out << csv_number(r.R) << ',' << csv_number(r.measure) << ',' << csv_number(r.bound) << '\n';
    return out.str();
}

std::string flat_csv(const Json& j)
{
    std::ostringstream out;
    out << "key,value\n";
    flatten(j, "", out);
    return out.str();
}

}  // namespace santalo::io
