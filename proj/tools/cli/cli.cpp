#include "cli.hpp"

#include "io/json_io.hpp"
#include "verify/acceptance.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <functional>
#include <optional>
#include <ostream>

namespace rootflow::cli {

namespace {

struct Config {
  std::string input;
  std::string out;
  std::string csv;
  std::string filter;
  std::string mode = "exact";
  std::optional<double> t0;
  int order = 16;
  double eps = kDefaultEps;
  double cluster_tol = 1e-6;
  unsigned long seed = verify::Options{}.seed;
};

io::Mode effective_mode(const Config& c) {
  if (const char* env = std::getenv("ROOTFLOW_MODE"); env && *env) return io::parse_mode(env);
  return io::parse_mode(c.mode);
}

Tolerances tolerances(const Config& c) { return {c.eps, c.cluster_tol}; }

void write_text(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty()) {
    out << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw PreconditionViolated("cannot write '" + path + "'");
  f << text;
}

void emit(const Config& c, const io::Json& j, std::ostream& out) { write_text(c.out, io::dump_pretty(j), out); }

// Runs fn in the requested mode. An exact run that needs numbers outside the
// exact field is repeated in float mode, reading the same literals as polynomials.
io::Json with_fallback(const Config& c, const std::function<io::Json(io::Mode, const io::ReadOptions&)>& fn) {
  io::ReadOptions ro;
  ro.mode = effective_mode(c);
  ro.order = c.order;
  ro.t0 = c.t0;
  if (ro.mode == io::Mode::Float) return fn(ro.mode, ro);
  try {
    return fn(ro.mode, ro);
  } catch (const NotRepresentable& e) {
    ro.mode = io::Mode::Float;
    ro.polynomial_default = true;
    io::Json j = fn(ro.mode, ro);
    j["notes"] = io::Json::array({std::string("exact run stopped (") + e.what() + "); recomputed in float mode"});
    return j;
  }
}

io::Json order_json(const OrderBound& b) {
  io::Json j;
  if (b.infinite) {
    j["order"] = nullptr;
    j["bound"] = "infinite";
  } else {
    j["order"] = b.value;
    j["bound"] = b.exact ? "exact" : "at_least";
  }
  return j;
}

template <class F>
io::Json analyze(const io::Json& doc, io::Mode mode, const io::ReadOptions& ro, const Tolerances& tol) {
  const PolyCurve<F> p = io::curve_from_json<F>(doc, ro);
  io::Json j;
  j["mode"] = io::to_string(mode);
  j["degree"] = p.degree();
  j["order"] = p.order();
  const auto b = bezoutiant(p);
  const Genericity g = genericity_check(b, tol.eps);
  try {
    j["distinct_root_count"] = distinct_root_count(p, tol.eps);
  } catch (const Error& e) {
    if (e.error_class() != ErrorClass::Genericity) throw;
    j["distinct_root_count"] = nullptr;
  }
  io::Json minors = io::Json::array();
  for (int k = 1; k <= p.degree(); ++k) {
    io::Json m;
    m["k"] = k;
    m.update(order_json(order_bound(b.delta(k), tol.eps, b.reference[static_cast<std::size_t>(k - 1)])));
    minors.push_back(std::move(m));
  }
  j["minors"] = std::move(minors);
  io::Json gj;
  gj["verdict"] = g.generic() ? "Generic" : "Undetermined";
  gj["k"] = g.k;
  gj["order"] = g.order;
  gj["truncation"] = g.truncation;
  j["genericity"] = std::move(gj);
  try {
    const auto d = differentiable_test(p, tol);
    j["differentiable"] = d.ok;
    io::Json entries = io::Json::array();
    for (const auto& e : d.entries) {
      io::Json x;
      x["factor"] = e.factor;
      x["factor_degree"] = d.factor_degrees[static_cast<std::size_t>(e.factor)];
      x["k"] = e.k;
      if (e.infinite) x["order"] = nullptr;
      else x["order"] = e.order;
      x["bound"] = e.infinite ? "infinite" : (e.bounded_below ? "at_least" : "exact");
      x["required"] = e.required;
      x["ok"] = e.ok;
      entries.push_back(std::move(x));
    }
    j["differentiability"] = std::move(entries);
  } catch (const Error& e) {
    if (e.error_class() != ErrorClass::Genericity) throw;
    j["differentiable"] = nullptr;
    j["differentiability_error"] = e.what();
  }
  return j;
}

template <class F>
io::Json desingularize_cmd(const io::Json& doc, io::Mode mode, const io::ReadOptions& ro, const Tolerances& tol) {
  const PolyCurve<F> p = io::curve_from_json<F>(doc, ro);
  const auto pair = desingularize(p, tol);
  io::Json j;
  j["mode"] = io::to_string(mode);
  j["N_plus"] = pair.plus.N;
  j["N_minus"] = pair.minus.N;
  io::Json plus = io::desingularization_to_json(pair.plus, p);
  j["roots"] = plus["roots"];
  j["trace"] = plus["trace"];
  j["plus"] = std::move(plus);
  j["minus"] = io::desingularization_to_json(pair.minus, p);
  return j;
}

template <class F>
io::Json eigen_cmd(const io::Json& doc, io::Mode mode, const io::ReadOptions& ro, const Tolerances& tol) {
  const MatrixCurve<F> a = io::matrix_from_json<F>(doc, ro);
  const auto pair = eigen_desingularize(a, tol);
  io::Json j;
  j["mode"] = io::to_string(mode);
  j["N_plus"] = pair.plus.N;
  j["N_minus"] = pair.minus.N;
  io::Json plus = io::eigen_result_to_json(pair.plus, a);
  j["eigenvalues"] = plus["eigenvalues"];
  j["eigenvectors"] = plus["eigenvectors"];
  j["plus"] = std::move(plus);
  j["minus"] = io::eigen_result_to_json(pair.minus, a);
  return j;
}

using Command = io::Json (*)(const io::Json&, io::Mode, const io::ReadOptions&, const Tolerances&);

int run_jet_command(const Config& c, Command exact, Command fl, std::ostream& out) {
  const io::Json doc = io::read_json_file(c.input);
  const Tolerances tol = tolerances(c);
  emit(c,
       with_fallback(c, [&](io::Mode m, const io::ReadOptions& ro) {
         return m == io::Mode::Exact ? exact(doc, m, ro, tol) : fl(doc, m, ro, tol);
       }),
       out);
  return kOk;
}

int run_track(const Config& c, std::ostream& out) {
  const io::Samples s = io::samples_from_json(io::read_json_file(c.input));
  if (s.coeffs.empty()) throw ParseError("track expects \"coeffs\" samples");
  const RootPaths p = track(s.grid, s.coeffs, c.eps);
  io::Json j;
  j["paths"] = io::root_paths_to_json(p);
  j["diagnostics"] = io::diagnostics_to_json(path_diagnostics(p));
  emit(c, j, out);
  if (!c.csv.empty()) write_text(c.csv, io::root_paths_to_csv(p), out);
  return kOk;
}

int run_eigen_track(const Config& c, std::ostream& out) {
  const io::Samples s = io::samples_from_json(io::read_json_file(c.input));
  if (s.matrices.empty()) throw ParseError("eigen-track expects \"matrices\" samples");
  const EigenTrack t = eigen_track(s.grid, s.matrices, c.eps);
  io::Json j;
  j["eigenvalues"] = io::root_paths_to_json(t.eigenvalues);
  io::Json vecs = io::Json::array();
  for (const auto& path : t.eigenvectors) {
    io::Json pj = io::Json::array();
    for (const auto& v : path) {
      io::Json vj = io::Json::array();
      for (const auto& z : v) vj.push_back(io::complex_to_json(z));
      pj.push_back(std::move(vj));
    }
    vecs.push_back(std::move(pj));
  }
  j["eigenvectors"] = std::move(vecs);
  j["eigenvector_variation"] = t.eigenvector_variation;
  j["max_normality_defect"] = t.max_normality_defect;
  j["warnings"] = t.warnings;
  emit(c, j, out);
  if (!c.csv.empty()) write_text(c.csv, io::root_paths_to_csv(t.eigenvalues), out);
  return kOk;
}

int run_verify(const Config& c, std::ostream& out, std::ostream& err) {
  verify::Options opt;
  opt.tol = tolerances(c);
  opt.filter = c.filter;
  opt.seed = c.seed;
  const auto results = verify::run(opt, [&](const verify::CriterionResult& r) { out << verify::format(r) << "\n" << std::flush; });
  if (results.empty()) throw PreconditionViolated("no criterion matches '" + c.filter + "'");
  int passed = 0;
  const verify::CriterionResult* first_failure = nullptr;
  for (const auto& r : results) {
    if (r.pass) ++passed;
    else if (!first_failure) first_failure = &r;
  }
  out << passed << "/" << results.size() << " criteria passed\n";
  if (first_failure) {
    err << "first failure: [" << first_failure->id << "] " << first_failure->name << "\n";
    return kVerifyFailed;
  }
  return kOk;
}

int exit_code(ErrorClass c) {
  switch (c) {
    case ErrorClass::Parse:
      return kParse;
    case ErrorClass::Precondition:
      return kPrecondition;
    case ErrorClass::Genericity:
      return kGenericity;
    case ErrorClass::Numerical:
      return kNumerical;
  }
  return kNumerical;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Config c;
  CLI::App app{"Regular parameterizations of roots of polynomial curves and eigenpairs of normal matrix curves",
               "rootflow"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "rootflow 0.1.0");

  auto numeric = [&](CLI::App* s) {
    s->add_option("--eps", c.eps, "relative zero threshold")->check(CLI::PositiveNumber);
    s->add_option("--cluster-tol", c.cluster_tol, "root clustering tolerance")->check(CLI::NonNegativeNumber);
  };
  auto jets = [&](CLI::App* s) {
    s->add_option("--input,-i", c.input, "input JSON")->required();
    s->add_option("--out,-o", c.out, "output JSON (default stdout)");
    s->add_option("--t0", c.t0, "base point, overrides the literals");
    s->add_option("--order,-K", c.order, "truncation order")->check(CLI::Range(1, 4096));
    s->add_option("--mode", c.mode, "exact or float (ROOTFLOW_MODE overrides)")
        ->check(CLI::IsMember({"exact", "float"}));
    numeric(s);
  };
  auto sampled = [&](CLI::App* s) {
    s->add_option("--input,-i", c.input, "samples JSON")->required();
    s->add_option("--out,-o", c.out, "output JSON (default stdout)");
    s->add_option("--csv", c.csv, "CSV export of the value paths");
    numeric(s);
  };

  CLI::App* analyze_app = app.add_subcommand("analyze", "distinct roots, minor orders, genericity, differentiability");
  jets(analyze_app);
  CLI::App* desing_app = app.add_subcommand("desingularize", "root jets of P(t0 +- h^N)");
  jets(desing_app);
  CLI::App* eigen_app = app.add_subcommand("eigen", "eigenpairs of a normal matrix curve");
  jets(eigen_app);
  CLI::App* track_app = app.add_subcommand("track", "continuous root paths of sampled curves");
  sampled(track_app);
  CLI::App* etrack_app = app.add_subcommand("eigen-track", "eigenvalue and eigenvector paths of sampled matrices");
  sampled(etrack_app);
  CLI::App* verify_app = app.add_subcommand("verify", "run the acceptance checks");
  verify_app->add_option("--filter", c.filter, "substring of the criterion names to run");
  verify_app->add_option("--seed", c.seed, "seed of the randomized checks");
  numeric(verify_app);

  try {
    app.parse(std::vector<std::string>(args.rbegin(), args.rend()));
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kOk : kParse;
  }

  try {
    if (analyze_app->parsed()) return run_jet_command(c, analyze<Cyclo>, analyze<Complex>, out);
    if (desing_app->parsed()) return run_jet_command(c, desingularize_cmd<Cyclo>, desingularize_cmd<Complex>, out);
    if (eigen_app->parsed()) return run_jet_command(c, eigen_cmd<Cyclo>, eigen_cmd<Complex>, out);
    if (track_app->parsed()) return run_track(c, out);
    if (etrack_app->parsed()) return run_eigen_track(c, out);
    if (verify_app->parsed()) return run_verify(c, out, err);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_code(e.error_class());
  } catch (const nlohmann::json::exception& e) {
    err << "error: ParseError: " << e.what() << "\n";
    return kParse;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kNumerical;
  }
  return kParse;
}

}  // namespace rootflow::cli
