#ifndef ROOTFLOW_TOOLS_JSON_IO_HPP
#define ROOTFLOW_TOOLS_JSON_IO_HPP

#include "rootflow/rootflow.hpp"

#include <json.hpp>

#include <optional>
#include <string>
#include <vector>

namespace rootflow::io {

using Json = nlohmann::ordered_json;

enum class Mode { Exact, Float };

Mode parse_mode(const std::string& s);
const char* to_string(Mode m);

struct ReadOptions {
  Mode mode = Mode::Exact;
  int order = 16;
  std::optional<double> t0;                 // overrides the literal's basepoint
  std::optional<bool> polynomial_default;   // default for jets without "polynomial"
};

// Reads a JSON document; syntax errors become ParseError with line and column.
Json read_json_file(const std::string& path);
Json parse_json_text(const std::string& text, const std::string& source = "<input>");

// Scalars: a number, a rational string "p/q", or [re, im] of either.
template <class F>
F scalar_from_json(const Json& j);

// Jet literal {"t0": real, "coeffs": [scalar, ...], "polynomial": bool}, or a bare
// coefficient array. Coefficients beyond the order are dropped, missing ones are zero.
template <class F>
Jet<F> jet_from_json(const Json& j, const ReadOptions& opt);

// {"degree": n, "coeffs": [a_1, ..., a_n]} in the convention
// z^n + sum_j (-1)^j a_j z^{n-j}; "standard": true takes the ordinary
// coefficients of z^{n-1}, ..., z^0 instead.
template <class F>
PolyCurve<F> curve_from_json(const Json& j, const ReadOptions& opt);

// {"n": n, "entries": [[jet, ...], ...]}
template <class F>
MatrixCurve<F> matrix_from_json(const Json& j, const ReadOptions& opt);

struct Samples {
  std::vector<double> grid;
  std::vector<std::vector<Complex>> coeffs;                  // a_1..a_n per grid point
  std::vector<std::vector<std::vector<Complex>>> matrices;   // n x n per grid point
};

// {"grid": [...], "coeffs": [[...], ...]} (optionally "standard": true) or
// {"grid": [...], "matrices": [[[...], ...], ...]}
Samples samples_from_json(const Json& j);

Json complex_to_json(Complex z);

template <class F>
Json jet_to_json(const Jet<F>& f);

template <class F>
Json curve_to_json(const PolyCurve<F>& p);

Json trace_to_json(const std::vector<TraceStep>& trace);

template <class F>
Json desingularization_to_json(const DesingularizationResult<F>& r, const PolyCurve<F>& p);

template <class F>
Json eigen_result_to_json(const EigenResult<F>& r, const MatrixCurve<F>& a);

Json root_paths_to_json(const RootPaths& p);
Json diagnostics_to_json(const PathDiagnostics& d);

// Indented JSON that keeps arrays of scalars, such as [re, im] pairs, on one line.
std::string dump_pretty(const Json& j);

// Columns t, re(lambda_1), im(lambda_1), ...
std::string root_paths_to_csv(const RootPaths& p);

}  // namespace rootflow::io

#endif  // ROOTFLOW_TOOLS_JSON_IO_HPP
