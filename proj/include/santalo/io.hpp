#pragma once

#include "santalo/functional.hpp"
#include "santalo/geometry.hpp"
#include "santalo/grid_field.hpp"
#include "santalo/quad.hpp"
#include "santalo/stability.hpp"
#include "santalo/weights.hpp"

#include <json.hpp>

#include <filesystem>
#include <string>
#include <vector>

namespace santalo::io {

using Json = nlohmann::ordered_json;

/// Reads and parses a JSON file. Missing files and malformed JSON raise ParseError.
Json read_json_file(const std::filesystem::path& path);
Json parse_json(const std::string& text);

/// FNV-1a 64 of the file bytes, as "fnv1a64:<16 hex digits>".
std::string file_digest(const std::filesystem::path& path);

// Numbers: finite values are JSON numbers; ±∞ and NaN are the strings
// "inf", "-inf", "nan".
Json number(double v);
double get_number(const Json& j);
Json vec_json(const Vec& v);
Vec get_vec(const Json& j);
Json mat_json(const Mat& m);
Mat get_mat(const Json& j);

ConvexBody body_from_json(const Json& j);
Json body_json(const ConvexBody& K);

WeightSpec weight_from_json(const Json& j);
Json weight_json(const NormalizedWeight& w);

struct FieldOptions {
    int grid = 0;  // nodes per axis when the spec has no shape; 0 for the dimension default
    std::filesystem::path base_dir;  // resolves relative "values" paths
};

/// quadratic | grid | quadratic_plus_bump | truncated_quadratic. Analytic
/// kinds default to the box of half-width √(72/λ_min(A)) about their center.
GridField field_from_json(const Json& j, const FieldOptions& opt = {});
/// Writes the values as flat little-endian binary64 and returns the grid spec JSON.
Json write_grid_field(const GridField& f, const std::filesystem::path& values_path);

/// 1D functions on the line: exp, gaussian, gen_gaussian, laplace, tent,
/// sampled (log-linear), and the combinators scaled, shifted, tilted,
/// truncated, power.
Fn1 function_from_json(const Json& j);

QuadratureSpec quadrature_from_json(const Json& j);
Json quadrature_json(const QuadratureSpec& q);

Json to_json(const BodyMeasures& m);
Json to_json(const SantaloPoint& s);
Json to_json(const SandwichReport& r);
Json to_json(const SantaloReport& r);
Json to_json(const CenterResult& r);
Json to_json(const BorellReport& r);
Json to_json(const StabilityFit& f);
Json to_json(const CenterCheckReport& r);
Json to_json(const CenterSearch& r);
Json to_json(const ScanCurve& c);
Json to_json(const std::vector<PsiRow>& rows);

SantaloReport santalo_report_from_json(const Json& j);
BorellReport borell_report_from_json(const Json& j);
StabilityFit stability_fit_from_json(const Json& j);
CenterCheckReport center_check_report_from_json(const Json& j);
ScanCurve scan_curve_from_json(const Json& j);

/// Numbers printed with 17 significant digits.
std::string csv_number(double v);

/// delta,eps,R,l1_primal,l1_dual,exponent_running,distance
std::string scan_csv(const ScanCurve& c);
/// R,measure,bound
std::string psi_csv(const std::vector<PsiRow>& rows);
/// key,value rows of a flattened JSON object; arrays get [i] suffixes.
std::string flat_csv(const Json& j);

}  // namespace santalo::io
