#include "cli.hpp"

#include "santalo/io.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

using namespace santalo;
using io::Json;
namespace fs = std::filesystem;

namespace {

struct CliRun {
    int status = -1;
    std::string out, err;
};

CliRun run_cli(std::vector<std::string> args)
{
    args.insert(args.begin(), "santalo");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    CliRun r;
    r.status = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    r.out = out.str();
    r.err = err.str();
    return r;
}

std::string data(const std::string& name) { return (fs::path(SANTALO_TEST_DATA) / name).string(); }

fs::path scratch(const std::string& name)
{
    const fs::path dir = fs::temp_directory_path() / "santalo_cli_test";
    fs::create_directories(dir);
    return dir / name;
}

const CliRun& scan_csv_run()
{
    static const CliRun r = run_cli({"scan", "--family", "truncated-quadratic", "--n", "2", "--steps", "6", "--format", "csv"});
    return r;
}

}  // namespace

TEST(Cli, PolarOfSquareIsCrossPolytope)
{
    const CliRun r = run_cli({"polar", "--input", data("square.json"), "--center", "0,0"});
    ASSERT_EQ(r.status, 0) << r.err;
    const Json j = io::parse_json(r.out);
    std::set<std::pair<long, long>> got;
    for (const Json& v : j["result"]["body"]["vertices"]) {
        const Vec p = io::get_vec(v);
        EXPECT_NEAR(p[0], std::round(p[0]), 1e-12);
        EXPECT_NEAR(p[1], std::round(p[1]), 1e-12);
        got.insert({std::lround(p[0]), std::lround(p[1])});
    }
    EXPECT_EQ(got, (std::set<std::pair<long, long>>{{1, 0}, {-1, 0}, {0, 1}, {0, -1}}));
    EXPECT_NEAR(io::get_number(j["result"]["measures"]["volume"]), 2.0, 1e-12);
}

TEST(Cli, FunctionalProductAtGaussian)
{
    const CliRun r = run_cli({"functional-product", "--weight", data("exp.json"), "--phi", data("quad.json"), "--convention",
                       "half-square", "--grid", "128"});
    ASSERT_EQ(r.status, 0) << r.err;
    const Json j = io::parse_json(r.out);
    EXPECT_NEAR(io::get_number(j["result"]["product"]), 39.478, 1e-3);
    EXPECT_LT(std::abs(io::get_number(j["result"]["deficit_minus"])), 1e-3);
}

TEST(Cli, ReportEchoesInputsAndDefaults)
{
    const CliRun r = run_cli({"functional-product", "--weight", data("exp.json"), "--phi", data("quad.json")});
    ASSERT_EQ(r.status, 0) << r.err;
    const Json j = io::parse_json(r.out);
    EXPECT_EQ(j["tool"], "santalo");
    EXPECT_EQ(j["verb"], "functional-product");
    ASSERT_EQ(j["inputs"].size(), 2u);
    EXPECT_EQ(j["inputs"][0]["digest"], io::file_digest(data("exp.json")));
    EXPECT_EQ(j["inputs"][1]["flag"], "--phi");
    const Json& s = j["settings"];
    EXPECT_EQ(s["grid_defaults"]["2"], 128);
    EXPECT_EQ(s["grid_defaults"]["3"], 48);
    EXPECT_EQ(io::get_number(s["tol"]), 1e-6);
    EXPECT_EQ(s["seed"], 20240917u);
    EXPECT_EQ(s["convention"], "half-square");
    EXPECT_EQ(s["quadrature"]["rng"], "splitmix64-counter");
}

TEST(Cli, ScanCsvHasSixRows)
{
    const CliRun& r = scan_csv_run();
    ASSERT_EQ(r.status, 0) << r.err;
    std::istringstream in(r.out);
    std::string line, header;
    int rows = 0;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        if (header.empty()) {
            header = line;
            continue;
        }
        ++rows;
    }
    EXPECT_EQ(header.rfind("delta,eps,R,l1_primal,l1_dual", 0), 0u) << header;
    EXPECT_EQ(rows, 6);
}

TEST(Cli, CorruptWeightIsDomainError)
{
    CliRun r = run_cli({"weight-validate", "--weight", data("corrupt_weight.json")});
    EXPECT_EQ(r.status, 1);
    EXPECT_NE(r.err.find("not log-concave"), std::string::npos) << r.err;
    r = run_cli({"selftest", "--quick", "--weight", data("corrupt_weight.json")});
    EXPECT_EQ(r.status, 1);
    EXPECT_NE(r.err.find("not log-concave"), std::string::npos) << r.err;
}

TEST(Cli, ParseErrorsExitTwo)
{
    EXPECT_EQ(run_cli({"polar", "--input", data("missing.json")}).status, 2);
    EXPECT_EQ(run_cli({"polar", "--input", data("square.json"), "--center", "0,zero"}).status, 2);
    EXPECT_EQ(run_cli({"polar", "--input", data("square.json"), "--format", "xml"}).status, 2);
    EXPECT_EQ(run_cli({"no-such-verb"}).status, 2);
    EXPECT_EQ(run_cli({}).status, 2);
    const fs::path bad = scratch("bad.json");
    std::ofstream(bad) << "{\"kind\": \"polytope\", \"vertices\": [[1, 1], [";
    EXPECT_EQ(run_cli({"polar", "--input", bad.string()}).status, 2);
}

TEST(Cli, DomainErrorsExitOne)
{
    const CliRun r = run_cli({"polar", "--input", data("square.json"), "--center", "3,0"});
    EXPECT_EQ(r.status, 1);
    EXPECT_FALSE(r.err.empty());
    EXPECT_EQ(run_cli({"sandwich-check", "--input", data("square.json"), "--ellipsoid", data("disk_ellipsoid.json"), "--mu",
                   "0.9"})
                  .status,
              1);
}

TEST(Cli, HelpDocumentsCsvColumns)
{
    const CliRun r = run_cli({"--help"});
    EXPECT_EQ(r.status, 0);
    EXPECT_NE(r.out.find("delta,eps,R,l1_primal,l1_dual,exponent_running,distance"), std::string::npos);
}

TEST(Cli, ReportsAreByteIdentical)
{
    const std::vector<std::string> args{"stability-fit", "--weight", data("exp.json"), "--phi", data("quad.json"), "--grid", "64"};
    const CliRun a = run_cli(args), b = run_cli(args);
    ASSERT_EQ(a.status, 0) << a.err;
    EXPECT_EQ(a.out, b.out);
    const std::vector<std::string> search{"prop31-check", "--search", "300", "--seed", "7"};
    EXPECT_EQ(run_cli(search).out, run_cli(search).out);
}

TEST(Cli, OutputFlagWritesFile)
{
    const fs::path p = scratch("product.json");
    fs::remove(p);
    const CliRun r = run_cli({"functional-product", "--weight", data("exp.json"), "--phi", data("quad.json"), "--grid", "64",
                       "--output", p.string()});
    ASSERT_EQ(r.status, 0) << r.err;
    EXPECT_TRUE(r.out.empty());
    EXPECT_EQ(io::read_json_file(p)["verb"], "functional-product");
}

// Every emitted report parses back into its type and re-serializes unchanged.
TEST(Cli, ReportsRoundTrip)
{
    auto result = [](const CliRun& r) {
        EXPECT_EQ(r.status, 0) << r.err;
        return io::parse_json(r.out)["result"];
    };
    Json j = result(run_cli({"functional-product", "--weight", data("exp.json"), "--phi", data("quad.json"), "--grid", "64"}));
    EXPECT_EQ(io::to_json(io::santalo_report_from_json(j)), j);
    j = result(run_cli({"borell-fit", "--input", data("borell_scaled.json")}));
    EXPECT_EQ(io::to_json(io::borell_report_from_json(j)), j);
    EXPECT_NEAR(io::get_number(j["fit_a"]), 0.5, 1e-3);
    EXPECT_NEAR(io::get_number(j["fit_b"]), 1.0 / 3.0, 1e-3);
    j = result(run_cli({"stability-fit", "--weight", data("exp.json"), "--phi", data("quad.json"), "--grid", "64"}));
    EXPECT_EQ(io::to_json(io::stability_fit_from_json(j)), j);
    j = result(run_cli({"prop31-check", "--input", data("center_check_gaussian.json")}));
    EXPECT_EQ(io::to_json(io::center_check_report_from_json(j)), j);
    EXPECT_TRUE(j["pass"].get<bool>());
    j = result(run_cli({"scan", "--family", "quadratic", "--n", "2", "--steps", "3", "--grid", "48"}));
    EXPECT_EQ(io::to_json(io::scan_curve_from_json(j)), j);
}

TEST(Cli, LegendreValuesOutReloads)
{
    const fs::path values = scratch("psi.bin");
    const CliRun r = run_cli({"legendre", "--phi", data("quad.json"), "--grid", "33", "--values-out", values.string()});
    ASSERT_EQ(r.status, 0) << r.err;
    const Json spec = io::parse_json(r.out)["result"];
    const GridField psi = io::field_from_json(spec, {0, values.parent_path()});
    const CliRun inline_run = run_cli({"legendre", "--phi", data("quad.json"), "--grid", "33"});
    const Json values_json = io::parse_json(inline_run.out)["result"]["values"];
    ASSERT_EQ(psi.size(), values_json.size());
    for (std::size_t i = 0; i < psi.size(); ++i) EXPECT_EQ(psi.values()[i], io::get_number(values_json[i]));
}

TEST(Cli, QuickSelftestPasses)
{
    const CliRun r = run_cli({"selftest", "--quick", "--format", "csv"});
    EXPECT_EQ(r.status, 0) << r.out << r.err;
    EXPECT_NE(r.out.find("all criteria passed"), std::string::npos);
}
