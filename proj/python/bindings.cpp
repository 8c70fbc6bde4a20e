#include "santalo/acceptance.hpp"
#include "santalo/functional.hpp"
#include "santalo/geometry.hpp"
#include "santalo/io.hpp"
#include "santalo/stability.hpp"
#include "santalo/transform.hpp"
#include "santalo/weights.hpp"

#ifdef SANTALO_HAS_CLI
#include "cli.hpp"
#endif

#include <pybind11/eigen.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cmath>
#include <memory>
#include <sstream>

namespace py = pybind11;
using namespace santalo;

namespace {

// Reports go through their JSON form so Python sees the same keys as the CLI.
// The strings "inf", "-inf" and "nan" come back as floats.
py::object to_py(const io::Json& j)
{
    switch (j.type()) {
    case io::Json::value_t::object: {
        py::dict d;
        for (const auto& [k, v] : j.items()) d[py::str(k)] = to_py(v);
        return d;
    }
    case io::Json::value_t::array: {
        py::list l;
        for (const auto& v : j) l.append(to_py(v));
        return l;
    }
    case io::Json::value_t::string: {
        const auto& s = j.get_ref<const std::string&>();
        if (s == "inf" || s == "-inf" || s == "nan") return py::float_(io::get_number(j));
        return py::str(s);
    }
    case io::Json::value_t::boolean: return py::bool_(j.get<bool>());
    case io::Json::value_t::number_integer: return py::int_(j.get<long long>());
    case io::Json::value_t::number_unsigned: return py::int_(j.get<unsigned long long>());
    case io::Json::value_t::number_float: return py::float_(j.get<double>());
    default: return py::none();
    }
}

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

GridField make_grid_field(std::vector<double> lo, std::vector<double> hi, const Array& values, bool convex)
{
    GridSpec g;
    g.lo = std::move(lo);
    g.hi = std::move(hi);
    for (py::ssize_t k = 0; k < values.ndim(); ++k) g.shape.push_back(static_cast<int>(values.shape(k)));
    if (g.lo.size() != g.shape.size() || g.hi.size() != g.shape.size())
        throw DomainError("lo and hi need one entry per array axis");
    g.validate();
    std::vector<double> v(values.data(), values.data() + values.size());
    return make_field(g, std::move(v), convex ? ConvexFlag::KnownConvex : ConvexFlag::Unknown);
}

Array field_values(const GridField& f)
{
    std::vector<py::ssize_t> shape(f.grid().shape.begin(), f.grid().shape.end());
    Array out(shape);
    std::copy(f.values().begin(), f.values().end(), out.mutable_data());
    return out;
}

// Python callables may be evaluated on worker threads: each call takes the GIL,
// and copies of the std::function share one reference to the callable.
Fn1 wrap(const py::function& f)
{
    auto holder = std::make_shared<py::function>(f);
    return [holder](double t) {
        py::gil_scoped_acquire gil;
        return (*holder)(t).cast<double>();
    };
}

template <typename F>
auto without_gil(F&& f)
{
    py::gil_scoped_release release;
    return f();
}

}  // namespace

PYBIND11_MODULE(_santalo, m)
{
    m.doc() = "Volume products, polar bodies, discrete Legendre transforms and functional Santalo stability checks.";
    m.attr("__version__") = SANTALO_VERSION;

    // Translators run newest first, so the subclass is registered last.
    auto& domain_error = py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
    py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
    py::register_exception<NoConvergence>(m, "NoConvergence", domain_error.ptr());

    py::class_<ConvexBody>(m, "ConvexBody")
        .def_static("polytope",
                    [](const Mat& points) {
                        std::vector<Vec> pts;
                        for (Eigen::Index i = 0; i < points.rows(); ++i) pts.push_back(points.row(i).transpose());
                        return ConvexBody::polytope(pts);
                    },
                    py::arg("points"), "Convex hull of the rows of `points`.")
        .def_static("ellipsoid", &ConvexBody::ellipsoid, py::arg("center"), py::arg("shape"))
        .def_static("ball", &ConvexBody::ball, py::arg("dim"), py::arg("radius") = 1.0)
        .def_static("radial_ball", &ConvexBody::radial_ball, py::arg("dim"), py::arg("radius") = 1.0,
                    py::arg("sphere_size") = 0)
        .def_property_readonly("dim", &ConvexBody::dim)
        .def_property_readonly("volume", [](const ConvexBody& K) { return body_measures(K).volume; })
        .def_property_readonly("centroid", [](const ConvexBody& K) { return body_measures(K).centroid; })
        .def_property_readonly("vertices",
                               [](const ConvexBody& K) {
                                   const auto& v = K.as_polytope().vertices;
                                   Mat out(v.size(), K.dim());
                                   for (std::size_t i = 0; i < v.size(); ++i) out.row(i) = v[i].transpose();
                                   return out;
                               })
        .def("support", &ConvexBody::support, py::arg("u"))
        .def("translated", &ConvexBody::translated, py::arg("t"))
        .def("to_dict", [](const ConvexBody& K) { return to_py(io::body_json(K)); });

    m.def("polar_body", &polar_body, py::arg("body"), py::arg("z"));
    m.def("volume_product", &volume_product, py::arg("body"), py::arg("z"));
    m.def(
        "santalo_point",
        [](const ConvexBody& K, double tol) { return to_py(io::to_json(santalo_point(K, tol))); },
        py::arg("body"), py::arg("tol") = 1e-9);
    m.def("bm_ball_upper", &bm_ball_upper, py::arg("body"));
    m.def(
        "sandwich_check",
        [](const ConvexBody& K, const ConvexBody& E, const Vec& w, double mu) {
            return to_py(io::to_json(sandwich_check({K, E, w, mu})));
        },
        py::arg("body"), py::arg("ellipsoid"), py::arg("w"), py::arg("mu"));

    py::class_<GridField>(m, "GridField")
        .def(py::init(&make_grid_field), py::arg("lo"), py::arg("hi"), py::arg("values"), py::arg("convex") = false,
             "Values on the regular grid spanning [lo, hi], one array axis per coordinate (C order).")
        .def_property_readonly("values", &field_values)
        .def_property_readonly("lo", [](const GridField& f) { return f.grid().lo; })
        .def_property_readonly("hi", [](const GridField& f) { return f.grid().hi; })
        .def_property_readonly("shape", [](const GridField& f) { return f.grid().shape; })
        .def_property_readonly("dim", &GridField::dim)
        .def("eval", [](const GridField& f, const Vec& x) { return f.eval(x); }, py::arg("x"));

    m.def(
        "conjugate_1d",
        [](const std::vector<double>& u, const std::vector<double>& F, const std::vector<double>& v) {
            std::vector<double> out(v.size());
            conjugate_1d(u, F, v, out);
            return out;
        },
        py::arg("u"), py::arg("F"), py::arg("v"), "sup_i u_i v_j - F_i for ascending u and v.");
    m.def(
        "legendre",
        [](const GridField& phi, const Vec& z, bool refined) {
            return legendre_report(phi, z, std::nullopt, refined ? LegendreMode::Refined : LegendreMode::Grid).field;
        },
        py::arg("phi"), py::arg("z"), py::arg("refined") = false);
    m.def("biconjugate", &biconjugate, py::arg("phi"), py::arg("z"));
    m.def("fenchel_young_gap", &fenchel_young_gap, py::arg("phi"), py::arg("psi"), py::arg("z"));

    py::class_<NormalizedWeight>(m, "Weight")
        .def("rho", &NormalizedWeight::rho, py::arg("t"))
        .def("moment", &NormalizedWeight::moment, py::arg("n"))
        .def("to_dict", [](const NormalizedWeight& w) { return to_py(io::weight_json(w)); });
    m.def(
        "weight",
        [](const std::string& kind, double param) {
            if (kind == "exp") return validate_weight(WeightSpec::exp(param));
            if (kind == "linear") return validate_weight(WeightSpec::linear(param));
            if (kind == "power") return validate_weight(WeightSpec::power(param));
            throw ParseError("weight kind must be exp, linear or power");
        },
        py::arg("kind") = "exp", py::arg("param") = 1.0, "Validated, normalized weight.");
    m.def(
        "sampled_weight",
        [](std::vector<double> t, std::vector<double> rho) { return validate_weight(WeightSpec::sampled(t, rho)); },
        py::arg("t"), py::arg("rho"));

    m.def(
        "functional_product",
        [](const NormalizedWeight& w, const GridField& phi, const Vec& z, const std::string& c) {
            return to_py(io::to_json(functional_product(w, phi, z, parse_convention(c))));
        },
        py::arg("weight"), py::arg("phi"), py::arg("z"), py::arg("convention") = "half-square");
    m.def(
        "ball_body", [](const GridField& f, const Vec& z) { return ball_body(f, z); }, py::arg("f"), py::arg("z"));
    m.def(
        "fm_center", [](const GridField& f, double tol) { return to_py(io::to_json(fm_center(f, tol))); },
        py::arg("f"), py::arg("tol") = 1e-8);
    m.def(
        "borell_check",
        [](const py::function& M, const py::function& F, const py::function& G) {
            const Fn1 m_ = wrap(M), f_ = wrap(F), g_ = wrap(G);
            return to_py(io::to_json(without_gil([&] { return borell_check(m_, f_, g_); })));
        },
        py::arg("M"), py::arg("F"), py::arg("G"));
    m.def(
        "borell_fit",
        [](const py::function& M, const py::function& F, const py::function& G) {
            const Fn1 m_ = wrap(M), f_ = wrap(F), g_ = wrap(G);
            return to_py(io::to_json(without_gil([&] { return borell_fit(m_, f_, g_); })));
        },
        py::arg("M"), py::arg("F"), py::arg("G"));

    m.def(
        "stability_fit_legendre",
        [](const NormalizedWeight& w, const GridField& phi, double tol) {
            FitOptions opt;
            opt.tol = tol;
            return to_py(io::to_json(stability_fit_legendre(w, phi, opt)));
        },
        py::arg("weight"), py::arg("phi"), py::arg("tol") = 1e-6);
    m.def(
        "stability_fit_functional",
        [](const NormalizedWeight& w, const GridField& f, const GridField& g, const Vec& z, double tol) {
            FitOptions opt;
            opt.tol = tol;
            return to_py(io::to_json(stability_fit_functional(w, f, g, z, opt)));
        },
        py::arg("weight"), py::arg("f"), py::arg("g"), py::arg("z"), py::arg("tol") = 1e-6);
    m.def(
        "psi_measure",
        [](const GridField& phi, const NormalizedWeight& w, double eps, const std::vector<double>& radii) {
            return to_py(io::to_json(psi_measure(phi, w, eps, radii)));
        },
        py::arg("phi"), py::arg("weight"), py::arg("eps"), py::arg("radii"));
    m.def(
        "logconcave_center_check",
        [](const py::function& h, const py::function& omega, int n, double eps) {
            const Fn1 h_ = wrap(h), o_ = wrap(omega);
            return to_py(io::to_json(without_gil([&] { return logconcave_center_check(h_, o_, n, eps); })));
        },
        py::arg("h"), py::arg("omega"), py::arg("n"), py::arg("eps"));
    m.def(
        "center_bound_search",
        [](long pairs, std::uint64_t seed, double eps_cap) {
            return to_py(io::to_json(without_gil([&] { return center_bound_search(pairs, seed, eps_cap); })));
        },
        py::arg("pairs"), py::arg("seed") = 20240917, py::arg("eps_cap") = 1e-4);
    m.def(
        "stability_scan",
        [](const std::string& family, int n, int steps, int grid) {
            ScanOptions opt;
            opt.grid = grid;
            return to_py(io::to_json(without_gil([&] { return stability_scan(family, n, steps, opt); })));
        },
        py::arg("family"), py::arg("n") = 2, py::arg("steps") = 6, py::arg("grid") = 0);

    m.def(
        "run_acceptance",
        [](bool quick, std::uint64_t seed, std::vector<int> only) {
            AcceptanceOptions opt;
            opt.quick = quick;
            opt.seed = seed;
            opt.only = std::move(only);
            const auto results = without_gil([&] { return run_acceptance(opt); });
            py::list out;
            for (const CriterionResult& r : results) {
                py::dict d;
                d["id"] = r.id;
                d["name"] = r.name;
                d["pass"] = r.pass;
                d["skipped"] = r.skipped;
                d["detail"] = r.detail;
                d["seconds"] = r.seconds;
                out.append(d);
            }
            return out;
        },
        py::arg("quick") = true, py::arg("seed") = 20240917, py::arg("only") = std::vector<int>{});

#ifdef SANTALO_HAS_CLI
    m.def(
        "run_cli",
        [](std::vector<std::string> args) {
            args.insert(args.begin(), "santalo");
            std::vector<const char*> argv;
            for (const auto& a : args) argv.push_back(a.c_str());
            std::ostringstream out, err;
            const int status = without_gil([&] { return cli::run(static_cast<int>(argv.size()), argv.data(), out, err); });
            return py::make_tuple(status, out.str(), err.str());
        },
        py::arg("args"), "Runs one CLI verb; returns (exit status, stdout, stderr).");
#endif
}
