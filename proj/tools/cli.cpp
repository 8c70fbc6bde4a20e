#include "cli.hpp"

#include "santalo/acceptance.hpp"
#include "santalo/functional.hpp"
#include "santalo/geometry.hpp"
#include "santalo/io.hpp"
#include "santalo/stability.hpp"
#include "santalo/transform.hpp"
#include "santalo/weights.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace santalo::cli {

namespace {

using io::Json;
namespace fs = std::filesystem;

constexpr const char* kCsvColumns = R"(CSV output:
  scan          delta,eps,R,l1_primal,l1_dual,exponent_running,distance (one row per delta, ascending)
  psi-measure   R,measure,bound
  legendre, biconjugate
                x0,...,x{n-1},value (one row per grid node, row-major)
  other verbs   key,value (flattened result; arrays get [i] suffixes)
Lines starting with '#' echo the tool version, inputs with digests, and settings.)";

struct Settings {
    int grid = 0;
    double tol = 1e-6;
    std::uint64_t seed = 20240917;
    std::string convention = "half-square";
    std::string format = "json";
    std::string output;
    std::string quadrature;
};

// Verb-specific flags. One struct for all verbs keeps the option binding flat.
struct Args {
    std::string input, ellipsoid, weight, phi, f, g, center, w, values_out, family = "truncated-quadratic", mode;
    std::string radii;
    double mu = 0.0, eps = 1e-4, eps_cap = 1e-4;
    int n = 2, steps = 6;
    long search = 0;
    bool quick = false;
};

class Context {
public:
    Context(std::string verb, const Settings& s) : verb_(std::move(verb)), s_(s) {}

    const Settings& settings() const { return s_; }
    Json& params() { return params_; }

    Json load(const std::string& flag, const std::string& path)
    {
        if (path.empty()) throw ParseError(flag + " is required");
        Json j = io::read_json_file(path);
        inputs_.push_back(Json{{"flag", flag}, {"path", path}, {"digest", io::file_digest(path)}});
        if (j.is_object() && j.value("kind", "") == "grid" && j.contains("values") && j["values"].is_string()) {
            fs::path v = j["values"].get<std::string>();
            if (v.is_relative()) v = fs::path(path).parent_path() / v;
            if (fs::exists(v))
                inputs_.push_back(Json{{"flag", flag + ".values"}, {"path", v.string()}, {"digest", io::file_digest(v)}});
        }
        return j;
    }

    GridField field(const std::string& flag, const std::string& path)
    {
        const Json j = load(flag, path);
        return io::field_from_json(j, {s_.grid, fs::path(path).parent_path()});
    }

    NormalizedWeight weight(const std::string& path) { return validate_weight(io::weight_from_json(load("--weight", path))); }

    ConvexBody body(const std::string& flag, const std::string& path) { return io::body_from_json(load(flag, path)); }

    Json envelope(const Json& result, const QuadratureSpec& q) const
    {
        Json defaults = Json::object();
        for (int n = 1; n <= 4; ++n) defaults[std::to_string(n)] = default_grid_size(n);
        Json settings{{"grid", s_.grid},
                      {"grid_defaults", defaults},
                      {"tol", io::number(s_.tol)},
                      {"seed", s_.seed},
                      {"convention", s_.convention},
                      {"format", s_.format},
                      {"quadrature", io::quadrature_json(q)}};
        if (!params_.empty()) settings["parameters"] = params_;
        return Json{{"tool", "santalo"},
                    {"version", SANTALO_VERSION},
                    {"verb", verb_},
                    {"inputs", inputs_},
                    {"settings", settings},
                    {"result", result}};
    }

    std::string csv_header(const QuadratureSpec& q) const
    {
        std::ostringstream s;
        s << "# santalo " << SANTALO_VERSION << " " << verb_ << "\n";
        for (const Json& in : inputs_)
            s << "# input " << in["flag"].get<std::string>() << " " << in["path"].get<std::string>() << " "
              << in["digest"].get<std::string>() << "\n";
        s << "# grid " << s_.grid << " (0: 128 for n=2, 48 for n=3)\n";
        s << "# tol " << io::csv_number(s_.tol) << "\n# seed " << s_.seed << "\n# convention " << s_.convention << "\n";
        s << "# quadrature " << io::quadrature_json(q).dump() << "\n";
        for (const auto& [k, v] : params_.items()) s << "# " << k << " " << v.dump() << "\n";
        return s.str();
    }

private:
    std::string verb_;
    Settings s_;
    Json inputs_ = Json::array();
    Json params_ = Json::object();
};

struct Output {
    Json result;
    std::string csv;  // body when the verb has a dedicated CSV layout
};

Vec parse_vec(const std::string& text, const char* what)
{
    std::vector<double> v;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        std::size_t used = 0;
        double x = 0.0;
        try {
            x = std::stod(item, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used == 0 || item.find_first_not_of(" \t", used) != std::string::npos)
            throw ParseError(std::string("cannot parse ") + what + " '" + text + "'");
        v.push_back(x);
    }
    if (v.empty()) throw ParseError(std::string(what) + " is empty");
    return Eigen::Map<Vec>(v.data(), static_cast<Eigen::Index>(v.size()));
}

Vec center_or_zero(const Args& a, int n)
{
    if (a.center.empty()) return Vec::Zero(n);
    Vec z = parse_vec(a.center, "--center");
    if (z.size() != n) throw ParseError("--center has " + std::to_string(z.size()) + " entries, expected " + std::to_string(n));
    return z;
}

std::string grid_csv(const GridField& f)
{
    std::ostringstream s;
    for (int k = 0; k < f.dim(); ++k) s << "x" << k << ",";
    s << "value\n";
    for (std::size_t i = 0; i < f.size(); ++i) {
        const Vec x = f.grid().node(i);
        for (int k = 0; k < f.dim(); ++k) s << io::csv_number(x[k]) << ",";
        s << io::csv_number(f.values()[i]) << "\n";
    }
    return s.str();
}

Json grid_result(Context& ctx, const GridField& f, const Args& a)
{
    if (!a.values_out.empty()) {
        ctx.params()["values_out"] = a.values_out;
        return io::write_grid_field(f, a.values_out);
    }
    const GridSpec& g = f.grid();
    Json values = Json::array();
    for (double v : f.values()) values.push_back(io::number(v));
    return Json{{"kind", "grid"},
                {"box", {{"lo", g.lo}, {"hi", g.hi}}},
                {"shape", g.shape},
                {"values", values}};
}

Convention convention(const Context& ctx) { return parse_convention(ctx.settings().convention); }

// f = ϱ∘(kφ) from --weight and --phi, or f read directly from --f.
GridField density(Context& ctx, const Args& a, const Vec* z)
{
    if (!a.f.empty()) return ctx.field("--f", a.f);
    const NormalizedWeight w = ctx.weight(a.weight);
    const GridField phi = ctx.field("--phi", a.phi);
    const Vec zz = z ? *z : center_or_zero(a, phi.dim());
    return functional_pair(w, phi, zz, convention(ctx)).f;
}

Output polar(Context& ctx, const Args& a)
{
    const ConvexBody K = ctx.body("--input", a.input);
    const Vec z = center_or_zero(a, K.dim());
    ctx.params()["center"] = io::vec_json(z);
    const ConvexBody P = polar_body(K, z);
    return {Json{{"body", io::body_json(P)}, {"measures", io::to_json(body_measures(P))}}, ""};
}

Output volume_product_verb(Context& ctx, const Args& a)
{
    const ConvexBody K = ctx.body("--input", a.input);
    Vec z;
    std::string at = "given";
    if (a.center.empty()) {
        z = santalo_point(K, ctx.settings().tol).z;
        at = "santalo-point";
    } else {
        z = center_or_zero(a, K.dim());
    }
    const double vk = body_measures(K).volume, vp = body_measures(polar_body(K, z)).volume;
    return {Json{{"center", io::vec_json(z)},
                 {"center_from", at},
                 {"volume", io::number(vk)},
                 {"polar_volume", io::number(vp)},
                 {"product", io::number(vk * vp)},
                 {"ball_bound", io::number(std::pow(unit_ball_volume(K.dim()), 2))}},
            ""};
}

Output santalo_point_verb(Context& ctx, const Args& a)
{
    const ConvexBody K = ctx.body("--input", a.input);
    return {io::to_json(santalo_point(K, ctx.settings().tol)), ""};
}

Output bm_ball(Context& ctx, const Args& a)
{
    const ConvexBody K = ctx.body("--input", a.input);
    const double u = bm_ball_upper(K);
    return {Json{{"log_distance_upper", io::number(u)}, {"distance_upper", io::number(std::exp(u))}}, ""};
}

Output sandwich(Context& ctx, const Args& a)
{
    const ConvexBody K = ctx.body("--input", a.input);
    const ConvexBody E = ctx.body("--ellipsoid", a.ellipsoid);
    const Vec w = a.w.empty() ? Vec::Zero(K.dim()) : parse_vec(a.w, "--w");
    ctx.params()["w"] = io::vec_json(w);
    ctx.params()["mu"] = io::number(a.mu);
    return {io::to_json(sandwich_check({K, E, w, a.mu})), ""};
}

Output legendre_verb(Context& ctx, const Args& a, bool twice)
{
    const GridField phi = ctx.field("--phi", a.phi);
    const Vec z = center_or_zero(a, phi.dim());
    ctx.params()["center"] = io::vec_json(z);
    if (twice) {
        const GridField b = biconjugate(phi, z);
        return {grid_result(ctx, b, a), grid_csv(b)};
    }
    const LegendreResult r = legendre_report(phi, z);
    Json j = grid_result(ctx, r.field, a);
    j["boundary_effect_radius"] = io::number(r.boundary_effect_radius);
    return {j, grid_csv(r.field)};
}

Output fy_gap(Context& ctx, const Args& a)
{
    const GridField phi = ctx.field("--phi", a.phi);
    const Vec z = center_or_zero(a, phi.dim());
    ctx.params()["center"] = io::vec_json(z);
    const GridField psi = legendre(phi, z);
    return {Json{{"min_gap", io::number(fenchel_young_gap(phi, psi, z))}}, ""};
}

Output weight_validate(Context& ctx, const Args& a)
{
    Json j = io::weight_json(ctx.weight(a.weight));
    j["log_concave"] = true;
    return {j, ""};
}

Output functional_product_verb(Context& ctx, const Args& a)
{
    const NormalizedWeight w = ctx.weight(a.weight);
    const GridField phi = ctx.field("--phi", a.phi);
    const Vec z = center_or_zero(a, phi.dim());
    ctx.params()["center"] = io::vec_json(z);
    return {io::to_json(functional_product(w, phi, z, convention(ctx))), ""};
}

Output ball_body_verb(Context& ctx, const Args& a)
{
    const GridField f = density(ctx, a, nullptr);
    const Vec z = center_or_zero(a, f.dim());
    ctx.params()["center"] = io::vec_json(z);
    const ConvexBody K = ball_body(f, z);
    return {Json{{"body", io::body_json(K)}, {"measures", io::to_json(body_measures(K))}}, ""};
}

Output fm_center_verb(Context& ctx, const Args& a)
{
    const GridField f = density(ctx, a, nullptr);
    return {io::to_json(fm_center(f, ctx.settings().tol)), ""};
}

std::array<Fn1, 3> borell_triple(Context& ctx, const Args& a)
{
    const Json j = ctx.load("--input", a.input);
    for (const char* k : {"M", "F", "G"})
        if (!j.contains(k)) throw ParseError(std::string("borell input needs ") + k);
    return {io::function_from_json(j["M"]), io::function_from_json(j["F"]), io::function_from_json(j["G"])};
}

Output borell(Context& ctx, const Args& a, bool fit)
{
    const auto [M, F, G] = borell_triple(ctx, a);
    return {io::to_json(fit ? borell_fit(M, F, G) : borell_check(M, F, G)), ""};
}

Output stability_fit_verb(Context& ctx, const Args& a)
{
    const std::string mode = a.mode.empty() ? "legendre" : a.mode;
    ctx.params()["mode"] = mode;
    FitOptions opt;
    opt.tol = ctx.settings().tol;
    const NormalizedWeight w = ctx.weight(a.weight);
    if (mode == "legendre") return {io::to_json(stability_fit_legendre(w, ctx.field("--phi", a.phi), opt)), ""};
    GridField f, g;
    if (!a.f.empty()) {
        f = ctx.field("--f", a.f);
        g = ctx.field("--g", a.g);
    } else {
        const GridField phi = ctx.field("--phi", a.phi);
        const FunctionalPair p = functional_pair(w, phi, center_or_zero(a, phi.dim()), convention(ctx), phi.grid());
        f = p.f;
        g = p.g;
    }
    const Vec z = center_or_zero(a, f.dim());
    ctx.params()["center"] = io::vec_json(z);
    return {io::to_json(stability_fit_functional(w, f, g, z, opt)), ""};
}

Output psi_verb(Context& ctx, const Args& a)
{
    const NormalizedWeight w = ctx.weight(a.weight);
    const GridField phi = ctx.field("--phi", a.phi);
    std::vector<double> radii;
    if (a.radii.empty()) {
        const double r = phi.grid().inscribed_radius(center_or_zero(a, phi.dim()));
        radii = {r / 4, r / 2, 3 * r / 4, r};
    } else {
        const Vec v = parse_vec(a.radii, "--radii");
        radii.assign(v.data(), v.data() + v.size());
    }
    ctx.params()["eps"] = io::number(a.eps);
    const Vec c = center_or_zero(a, phi.dim());
    ctx.params()["center"] = io::vec_json(c);
    const auto rows = psi_measure(phi, w, a.eps, radii, 1.0, c);
    return {io::to_json(rows), io::psi_csv(rows)};
}

Output center_check(Context& ctx, const Args& a)
{
    if (a.search > 0) {
        ctx.params()["pairs"] = a.search;
        ctx.params()["eps_cap"] = io::number(a.eps_cap);
        return {io::to_json(center_bound_search(a.search, ctx.settings().seed, a.eps_cap)), ""};
    }
    const Json j = ctx.load("--input", a.input);
    for (const char* k : {"h", "omega", "n", "eps"})
        if (!j.contains(k)) throw ParseError(std::string("center check input needs ") + k);
    const int n = j["n"].get<int>();
    return {io::to_json(logconcave_center_check(io::function_from_json(j["h"]), io::function_from_json(j["omega"]), n,
                                                io::get_number(j["eps"]))),
            ""};
}

Output scan(Context& ctx, const Args& a)
{
    ctx.params()["family"] = a.family;
    ctx.params()["n"] = a.n;
    ctx.params()["steps"] = a.steps;
    ScanOptions opt;
    opt.grid = ctx.settings().grid;
    opt.fit.tol = ctx.settings().tol;
    const ScanCurve c = stability_scan(a.family, a.n, a.steps, opt);
    return {io::to_json(c), io::scan_csv(c)};
}

int selftest(Context& ctx, const Args& a, bool json, std::ostream& out, std::ostream& err)
{
    if (!a.weight.empty()) ctx.weight(a.weight);  // an injected weight must validate first
    AcceptanceOptions opt;
    opt.quick = a.quick;
    opt.seed = ctx.settings().seed;
    const auto results = run_acceptance(opt);
    if (json) {
        Json rows = Json::array();
        for (const CriterionResult& r : results)
            rows.push_back(Json{{"id", r.id}, {"name", r.name}, {"pass", r.pass}, {"skipped", r.skipped}, {"detail", r.detail}});
        out << ctx.envelope(Json{{"quick", a.quick}, {"criteria", rows}}, QuadratureSpec{}).dump(2) << "\n";
    } else {
        out << acceptance_report(results, opt);
    }
    int status = 0;
    for (const CriterionResult& r : results)
        if (!r.pass) {
            err << "santalo: selftest failed: criterion " << r.id << " (" << r.name << ")\n";
            status = 1;
        }
    return status;
}

void add_common(CLI::App* sub, Settings& s)
{
    sub->add_option("--grid", s.grid, "Nodes per axis for analytic fields (default 128 for n=2, 48 for n=3)")
        ->check(CLI::NonNegativeNumber);
    sub->add_option("--tol", s.tol, "Tolerance for iterative solves and the zero-deficit cutoff")->capture_default_str();
    sub->add_option("--seed", s.seed, "Seed for randomized steps")->capture_default_str();
    sub->add_option("--convention", s.convention, "half-square: |x|^2/2, square: |x|^2")
        ->check(CLI::IsMember({"half-square", "square"}))
        ->capture_default_str();
    sub->add_option("--format", s.format, "Report format")->check(CLI::IsMember({"json", "csv"}))->capture_default_str();
    sub->add_option("--output,-o", s.output, "Write the report here instead of stdout");
    sub->add_option("--quadrature", s.quadrature, "QuadratureSpec JSON echoed in the report");
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Volume products, polar bodies and functional Santalo stability checks", "santalo"};
    app.footer(kCsvColumns);
    app.set_version_flag("--version", SANTALO_VERSION);
    app.require_subcommand(1, 1);
    Settings s;
    Args a;

    using Handler = std::function<Output(Context&, const Args&)>;
    std::map<std::string, Handler> handlers;
    auto verb = [&](const std::string& name, const std::string& help, Handler h) {
        CLI::App* sub = app.add_subcommand(name, help);
        add_common(sub, s);
        if (h) handlers[name] = std::move(h);
        return sub;
    };
    auto body_in = [&](CLI::App* sub) { sub->add_option("--input,-i", a.input, "Body JSON")->required(); };
    auto center = [&](CLI::App* sub) { sub->add_option("--center,-z", a.center, "Center as comma-separated coordinates"); };
    auto weight = [&](CLI::App* sub, bool req) {
        auto* o = sub->add_option("--weight", a.weight, "Weight JSON");
        if (req) o->required();
    };
    auto phi = [&](CLI::App* sub, bool req) {
        auto* o = sub->add_option("--phi", a.phi, "Field JSON for phi");
        if (req) o->required();
    };

    auto* p = verb("polar", "Polar body about --center", polar);
    body_in(p), center(p);
    p = verb("volume-product", "V(K) V(K^z), at the Santalo point unless --center is given", volume_product_verb);
    body_in(p), center(p);
    body_in(verb("santalo-point", "Minimizer of V(K^z)", santalo_point_verb));
    body_in(verb("bm-ball", "Upper bound on the Banach-Mazur distance to the ball", bm_ball));
    p = verb("sandwich-check", "Sandwich hypothesis and conclusion for K, E, w, mu", sandwich);
    body_in(p);
    p->add_option("--ellipsoid", a.ellipsoid, "0-symmetric ellipsoid JSON")->required();
    p->add_option("--w", a.w, "Translation w as comma-separated coordinates");
    p->add_option("--mu", a.mu, "Sandwich parameter in (0, 1/(n+1))")->required();
    p = verb("legendre", "Discrete Legendre transform", [](Context& c, const Args& x) { return legendre_verb(c, x, false); });
    phi(p, true), center(p);
    p->add_option("--values-out", a.values_out, "Write values as little-endian binary64 and emit a grid spec");
    p = verb("biconjugate", "Lower convex hull on the grid", [](Context& c, const Args& x) { return legendre_verb(c, x, true); });
    phi(p, true), center(p);
    p->add_option("--values-out", a.values_out, "Write values as little-endian binary64 and emit a grid spec");
    p = verb("fy-gap", "Minimum Fenchel-Young gap of phi and its transform", fy_gap);
    phi(p, true), center(p);
    weight(verb("weight-validate", "Check log-concavity and report moments", weight_validate), true);
    p = verb("functional-product", "Product of the integrals of rho(phi) and rho(L phi)", functional_product_verb);
    weight(p, true), phi(p, true), center(p);
    p = verb("ball-body", "Ball's body of f, from --f or from --weight and --phi", ball_body_verb);
    weight(p, false), phi(p, false), center(p);
    p->add_option("--f", a.f, "Field JSON for f");
    p = verb("fm-center", "Center z with centroid(K_{f,z}) = 0", fm_center_verb);
    weight(p, false), phi(p, false), center(p);
    p->add_option("--f", a.f, "Field JSON for f");
    verb("borell-check", "Hypothesis margin and ratio for {M, F, G}", [](Context& c, const Args& x) { return borell(c, x, false); })
        ->add_option("--input,-i", a.input, "JSON object with functions M, F, G")
        ->required();
    verb("borell-fit", "Fit a F(b t) to M", [](Context& c, const Args& x) { return borell(c, x, true); })
        ->add_option("--input,-i", a.input, "JSON object with functions M, F, G")
        ->required();
    p = verb("stability-fit", "Closest equality case to phi (legendre) or to f, g (functional)", stability_fit_verb);
    weight(p, true), phi(p, false), center(p);
    p->add_option("--mode", a.mode, "legendre or functional")->check(CLI::IsMember({"legendre", "functional"}));
    p->add_option("--f", a.f, "Field JSON for f (functional mode)");
    p->add_option("--g", a.g, "Field JSON for g (functional mode)");
    p = verb("psi-measure", "Volume of the exceptional set inside balls", psi_verb);
    weight(p, true), phi(p, true), center(p);
    p->add_option("--eps", a.eps, "Deficit used in the threshold")->capture_default_str();
    p->add_option("--radii", a.radii, "Comma-separated ball radii (default: quarters of the inscribed radius)");
    p = verb("prop31-check", "Center bound for log-concave (h, omega), or a randomized search", center_check);
    p->add_option("--input,-i", a.input, "JSON object with h, omega, n, eps");
    p->add_option("--search", a.search, "Number of random pairs to test instead");
    p->add_option("--eps-cap", a.eps_cap, "Largest hypothesis epsilon in the search")->capture_default_str();
    p = verb("scan", "Deficit and distance along a perturbation family", scan);
    p->add_option("--family", a.family, "truncated-quadratic, bump or quadratic")->capture_default_str();
    p->add_option("--n", a.n, "Dimension")->capture_default_str();
    p->add_option("--steps", a.steps, "Number of delta values")->capture_default_str();
    p = verb("selftest", "Run the acceptance suite", nullptr);
    p->add_flag("--quick", a.quick, "Reduced suite");
    weight(p, false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    }

    const std::string name = app.get_subcommands().front()->get_name();
    try {
        Context ctx(name, s);
        QuadratureSpec q;
        q.seed = s.seed;
        if (!s.quadrature.empty()) q = io::quadrature_from_json(ctx.load("--quadrature", s.quadrature));
        if (name == "selftest") {
            // The table is the default; JSON only on request.
            const bool json = app.get_subcommand(name)->count("--format") > 0 && s.format == "json";
            return selftest(ctx, a, json, out, err);
        }

        const Output o = handlers.at(name)(ctx, a);
        std::string text;
        if (s.format == "json") {
            text = ctx.envelope(o.result, q).dump(2) + "\n";
        } else {
            text = ctx.csv_header(q) + (o.csv.empty() ? io::flat_csv(o.result) : o.csv);
        }
        if (s.output.empty()) {
            out << text;
        } else {
            std::ofstream f(s.output, std::ios::binary);
            if (!f || !(f << text)) throw ParseError("cannot write " + s.output);
        }
        return 0;
    } catch (const ParseError& e) {
        err << "santalo: parse error: " << e.what() << "\n";
        return 2;
    } catch (const DomainError& e) {
        err << "santalo: " << e.what() << "\n";
        return 1;
    } catch (const Json::exception& e) {
        err << "santalo: parse error: " << e.what() << "\n";
        return 2;
    }
}

}  // namespace santalo::cli
