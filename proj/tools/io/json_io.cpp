#include "json_io.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace rootflow::io {

Mode parse_mode(const std::string& s) {
  if (s == "exact") return Mode::Exact;
  if (s == "float") return Mode::Float;
  throw ParseError("unknown mode '" + s + "' (expected exact or float)");
}

const char* to_string(Mode m) { return m == Mode::Exact ? "exact" : "float"; }

Json parse_json_text(const std::string& text, const std::string& source) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    std::size_t line = 1, col = 1;
    const std::size_t end = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
    for (std::size_t i = 0; i < end; ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    std::string msg = e.what();
    if (auto p = msg.find("parse error"); p != std::string::npos) msg = msg.substr(p);
    throw ParseError(source + ":" + std::to_string(line) + ":" + std::to_string(col) + ": " + msg);
  }
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_json_text(ss.str(), path);
}

namespace {

[[noreturn]] void shape_error(const std::string& what, const Json& j) {
  std::string s = j.dump();
  if (s.size() > 60) s = s.substr(0, 57) + "...";
  throw ParseError(what + ", got " + s);
}

mpq_class rational_from_json(const Json& j) {
  if (j.is_number_integer()) return mpq_class(j.get<long>());
  if (j.is_number()) return rational_from_double(j.get<double>());
  if (j.is_string()) return parse_rational(j.get<std::string>());
  shape_error("expected a number or rational string", j);
}

const Json& member(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) shape_error(std::string("expected an object with \"") + key + "\"", j);
  return j.at(key);
}

int int_member(const Json& j, const char* key) {
  const Json& v = member(j, key);
  if (!v.is_number_integer()) shape_error(std::string("\"") + key + "\" must be an integer", v);
  return v.get<int>();
}

double zero_clean(double x) { return x + 0.0; }

}  // namespace

template <class F>
F scalar_from_json(const Json& j) {
  if (j.is_array()) {
    if (j.size() != 2) shape_error("complex numbers are [re, im]", j);
    return ScalarTraits<F>::from_gaussian(rational_from_json(j[0]), rational_from_json(j[1]));
  }
  if constexpr (!ScalarTraits<F>::exact) {
    if (j.is_number()) return Complex(j.get<double>(), 0.0);
  }
  return ScalarTraits<F>::from_rational(rational_from_json(j));
}

template <class F>
Jet<F> jet_from_json(const Json& j, const ReadOptions& opt) {
  const Json* coeffs = &j;
  double t0 = 0.0;
  bool poly = opt.polynomial_default.value_or(ScalarTraits<F>::exact);
  if (j.is_object()) {
    coeffs = &member(j, "coeffs");
    if (j.contains("t0")) {
      if (!j["t0"].is_number()) shape_error("\"t0\" must be a real number", j["t0"]);
      t0 = j["t0"].get<double>();
    }
    if (j.contains("polynomial")) {
      if (!j["polynomial"].is_boolean()) shape_error("\"polynomial\" must be true or false", j["polynomial"]);
      poly = j["polynomial"].get<bool>();
    }
  } else if (j.is_number() || j.is_string()) {
    // a bare scalar is a constant
    Jet<F> c = Jet<F>::constant(scalar_from_json<F>(j), opt.order, opt.t0.value_or(0.0));
    c.set_polynomial(poly);
    return c;
  }
  if (!coeffs->is_array() || coeffs->empty()) shape_error("jet coefficients must be a nonempty array", *coeffs);
  Jet<F> f(opt.order, opt.t0.value_or(t0), poly);
  for (std::size_t m = 0; m < coeffs->size(); ++m) {
    const F c = scalar_from_json<F>((*coeffs)[m]);
    if (static_cast<int>(m) <= opt.order) f[static_cast<int>(m)] = c;
    else if (!ScalarTraits<F>::is_zero(c, 0.0)) f.set_polynomial(false);
  }
  return f;
}

template <class F>
PolyCurve<F> curve_from_json(const Json& j, const ReadOptions& opt) {
  const int n = int_member(j, "degree");
  const Json& c = member(j, "coeffs");
  if (n < 1) throw ParseError("\"degree\" must be at least 1");
  if (!c.is_array() || static_cast<int>(c.size()) != n)
    shape_error("\"coeffs\" must list " + std::to_string(n) + " jets", c);
  ReadOptions o = opt;
  if (!o.t0 && j.contains("t0") && j["t0"].is_number()) o.t0 = j["t0"].get<double>();
  std::vector<Jet<F>> a;
  for (const auto& x : c) a.push_back(jet_from_json<F>(x, o));
  if (j.contains("standard") && j["standard"].is_boolean() && j["standard"].get<bool>())
    return PolyCurve<F>::from_standard(a);
  return PolyCurve<F>(std::move(a));
}

template <class F>
MatrixCurve<F> matrix_from_json(const Json& j, const ReadOptions& opt) {
  const int n = int_member(j, "n");
  const Json& rows = member(j, "entries");
  if (n < 1) throw ParseError("\"n\" must be at least 1");
  if (!rows.is_array() || static_cast<int>(rows.size()) != n) shape_error("\"entries\" must have n rows", rows);
  ReadOptions o = opt;
  if (!o.t0 && j.contains("t0") && j["t0"].is_number()) o.t0 = j["t0"].get<double>();
  std::vector<Jet<F>> e;
  for (const auto& row : rows) {
    if (!row.is_array() || static_cast<int>(row.size()) != n) shape_error("each row must have n entries", row);
    for (const auto& x : row) e.push_back(jet_from_json<F>(x, o));
  }
  return MatrixCurve<F>(n, std::move(e));
}

Samples samples_from_json(const Json& j) {
  Samples s;
  const Json& grid = member(j, "grid");
  if (!grid.is_array() || grid.empty()) shape_error("\"grid\" must be a nonempty array", grid);
  for (const auto& t : grid) {
    if (!t.is_number()) shape_error("grid values must be numbers", t);
    s.grid.push_back(t.get<double>());
  }
  for (std::size_t i = 1; i < s.grid.size(); ++i)
    if (!(s.grid[i] > s.grid[i - 1])) throw ParseError("\"grid\" must be strictly increasing");
  if (j.contains("coeffs")) {
    const Json& c = j["coeffs"];
    if (!c.is_array() || c.size() != s.grid.size()) shape_error("\"coeffs\" needs one row per grid point", c);
    const bool standard = j.contains("standard") && j["standard"].is_boolean() && j["standard"].get<bool>();
    for (const auto& row : c) {
      if (!row.is_array() || row.empty()) shape_error("coefficient rows must be nonempty arrays", row);
      std::vector<Complex> a;
      for (const auto& x : row) a.push_back(scalar_from_json<Complex>(x));
      if (!s.coeffs.empty() && a.size() != s.coeffs.front().size()) throw ParseError("coefficient rows differ in length");
      if (standard)
        for (std::size_t k = 0; k < a.size(); ++k)
          if (k % 2 == 0) a[k] = -a[k];
      s.coeffs.push_back(std::move(a));
    }
  } else if (j.contains("matrices")) {
    const Json& ms = j["matrices"];
    if (!ms.is_array() || ms.size() != s.grid.size()) shape_error("\"matrices\" needs one matrix per grid point", ms);
    for (const auto& m : ms) {
      if (!m.is_array() || m.empty()) shape_error("matrices must be nonempty arrays of rows", m);
      std::vector<std::vector<Complex>> rows;
      for (const auto& row : m) {
        if (!row.is_array() || row.size() != m.size()) shape_error("matrices must be square", row);
        std::vector<Complex> r;
        for (const auto& x : row) r.push_back(scalar_from_json<Complex>(x));
        rows.push_back(std::move(r));
      }
      if (!s.matrices.empty() && rows.size() != s.matrices.front().size()) throw ParseError("matrix sizes differ");
      s.matrices.push_back(std::move(rows));
    }
  } else {
    shape_error("samples need \"coeffs\" or \"matrices\"", j);
  }
  return s;
}

Json complex_to_json(Complex z) { return Json::array({zero_clean(z.real()), zero_clean(z.imag())}); }

namespace {

template <class F>
Json scalar_value(const F& x) {
  if constexpr (ScalarTraits<F>::exact) {
    Complex z = x.approx();
    const Cyclo c = x.conj();
    if (c == x) z.imag(0.0);
    else if (c == -x) z.real(0.0);
    return complex_to_json(z);
  } else {
    return complex_to_json(x);
  }
}

}  // namespace

template <class F>
Json jet_to_json(const Jet<F>& f) {
  Json j;
  j["t0"] = f.t0();
  j["order"] = f.order();
  j["polynomial"] = f.polynomial();
  Json c = Json::array();
  for (const auto& x : f.coeffs()) c.push_back(scalar_value(x));
  j["coeffs"] = std::move(c);
  if constexpr (ScalarTraits<F>::exact) {
    Json e = Json::array();
    for (const auto& x : f.coeffs()) e.push_back(x.str());
    j["exact"] = std::move(e);
  }
  return j;
}

template <class F>
Json curve_to_json(const PolyCurve<F>& p) {
  Json j;
  j["degree"] = p.degree();
  Json c = Json::array();
  for (const auto& a : p.coefficients()) c.push_back(jet_to_json(a));
  j["coeffs"] = std::move(c);
  return j;
}

Json trace_to_json(const std::vector<TraceStep>& trace) {
  Json out = Json::array();
  for (const auto& s : trace) {
    Json j;
    j["kind"] = to_string(s.kind);
    j["depth"] = s.depth;
    j["degree"] = s.degree;
    switch (s.kind) {
      case TraceStep::Kind::ShiftScale:
        j["m"] = s.m.get_str();
        j["d"] = s.d;
        j["m_tilde"] = s.m_tilde.get_str();
        break;
      case TraceStep::Kind::Split:
        j["degrees"] = Json::array({s.degree1, s.degree2});
        j["gap"] = s.gap;
        break;
      case TraceStep::Kind::ImplicitLift:
        break;
    }
    if (!s.note.empty()) j["note"] = s.note;
    out.push_back(std::move(j));
  }
  return out;
}

template <class F>
Json desingularization_to_json(const DesingularizationResult<F>& r, const PolyCurve<F>& p) {
  Json j;
  j["N"] = r.N;
  j["branch"] = r.branch;
  Json roots = Json::array();
  for (const auto& x : r.roots) roots.push_back(jet_to_json(x));
  j["roots"] = std::move(roots);
  const auto res = residual(p, r);
  if constexpr (ScalarTraits<F>::exact) {
    bool zero = true;
    for (const auto& x : res) zero = zero && x.is_zero();
    j["residual_zero"] = zero;
  } else {
    double m = 0.0;
    for (const auto& x : res) m = std::max(m, x.max_abs());
    j["residual_max"] = m;
  }
  j["trace"] = trace_to_json(r.trace);
  return j;
}

template <class F>
Json eigen_result_to_json(const EigenResult<F>& r, const MatrixCurve<F>& a) {
  Json j;
  j["N"] = r.N;
  j["branch"] = r.branch;
  Json vals = Json::array();
  for (const auto& x : r.eigenvalues) vals.push_back(jet_to_json(x));
  j["eigenvalues"] = std::move(vals);
  Json vecs = Json::array();
  for (const auto& v : r.eigenvectors) {
    Json col = Json::array();
    for (const auto& x : v) col.push_back(jet_to_json(x));
    vecs.push_back(std::move(col));
  }
  j["eigenvectors"] = std::move(vecs);
  const auto res = eigen_residual(a, r);
  if constexpr (ScalarTraits<F>::exact) {
    bool zero = true;
    for (const auto& v : res)
      for (const auto& x : v) zero = zero && x.is_zero();
    j["residual_zero"] = zero;
  } else {
    double m = 0.0;
    for (const auto& v : res)
      for (const auto& x : v) m = std::max(m, x.max_abs());
    j["residual_max"] = m;
  }
  Json tr = Json::array();
  for (const auto& s : r.trace) {
    Json t;
    t["kind"] = s.kind;
    t["depth"] = s.depth;
    t["dimension"] = s.dimension;
    if (s.kind == "eigenvalues") t["N"] = s.N;
    if (s.kind == "rescale") t["m"] = s.m;
    if (!s.note.empty()) t["note"] = s.note;
    tr.push_back(std::move(t));
  }
  j["trace"] = std::move(tr);
  return j;
}

Json root_paths_to_json(const RootPaths& p) {
  Json j;
  j["grid"] = p.grid;
  Json paths = Json::array();
  for (const auto& path : p.paths) {
    Json col = Json::array();
    for (const auto& z : path) col.push_back(complex_to_json(z));
    paths.push_back(std::move(col));
  }
  j["paths"] = std::move(paths);
  j["ambiguous_steps"] = p.ambiguous_steps;
  j["warnings"] = p.warnings;
  return j;
}

Json diagnostics_to_json(const PathDiagnostics& d) {
  Json j;
  j["total_variation"] = d.total_variation;
  j["displacement"] = d.displacement;
  j["lipschitz"] = d.lipschitz;
  j["hoelder"] = d.hoelder;
  j["hoelder_n"] = d.hoelder_n;
  Json ac = Json::array();
  for (const auto& pt : d.ac_profile) ac.push_back(Json::array({pt.delta, pt.worst}));
  j["ac_profile"] = std::move(ac);
  return j;
}

namespace {

bool flat_array(const Json& j) {
  return j.is_array() && std::none_of(j.begin(), j.end(), [](const Json& x) { return x.is_structured(); });
}

void dump_into(const Json& j, int indent, std::string& out) {
  const std::string pad(static_cast<std::size_t>(indent + 2), ' ');
  if (j.is_object() && !j.empty()) {
    out += "{\n";
    std::size_t i = 0;
    for (auto it = j.begin(); it != j.end(); ++it, ++i) {
      out += pad + Json(it.key()).dump() + ": ";
      dump_into(it.value(), indent + 2, out);
      out += i + 1 < j.size() ? ",\n" : "\n";
    }
    out += std::string(static_cast<std::size_t>(indent), ' ') + "}";
  } else if (j.is_array() && !j.empty() && !flat_array(j)) {
    out += "[\n";
    for (std::size_t i = 0; i < j.size(); ++i) {
      out += pad;
      dump_into(j[i], indent + 2, out);
      out += i + 1 < j.size() ? ",\n" : "\n";
    }
    out += std::string(static_cast<std::size_t>(indent), ' ') + "]";
  } else if (j.is_array()) {
    out += "[";
    for (std::size_t i = 0; i < j.size(); ++i) out += (i ? ", " : "") + j[i].dump();
    out += "]";
  } else {
    out += j.dump();
  }
}

}  // namespace

std::string dump_pretty(const Json& j) {
  std::string out;
  dump_into(j, 0, out);
  return out + "\n";
}

std::string root_paths_to_csv(const RootPaths& p) {
  std::string out = "t";
  for (int j = 1; j <= p.count(); ++j) out += ",re_" + std::to_string(j) + ",im_" + std::to_string(j);
  out += "\n";
  char buf[64];
  for (int i = 0; i < p.points(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g", p.grid[static_cast<std::size_t>(i)]);
    out += buf;
    for (int j = 0; j < p.count(); ++j) {
      const Complex z = p.paths[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)];
      std::snprintf(buf, sizeof buf, ",%.17g,%.17g", zero_clean(z.real()), zero_clean(z.imag()));
      out += buf;
    }
    out += "\n";
  }
  return out;
}

#define ROOTFLOW_IO_INSTANTIATE(F)                                                         \
  template F scalar_from_json<F>(const Json&);                                             \
  template Jet<F> jet_from_json<F>(const Json&, const ReadOptions&);                       \
  template PolyCurve<F> curve_from_json<F>(const Json&, const ReadOptions&);               \
  template MatrixCurve<F> matrix_from_json<F>(const Json&, const ReadOptions&);            \
  template Json jet_to_json(const Jet<F>&);                                                \
  template Json curve_to_json(const PolyCurve<F>&);                                        \
  template Json desingularization_to_json(const DesingularizationResult<F>&, const PolyCurve<F>&); \
  template Json eigen_result_to_json(const EigenResult<F>&, const MatrixCurve<F>&);

ROOTFLOW_IO_INSTANTIATE(Cyclo)
ROOTFLOW_IO_INSTANTIATE(Complex)

#undef ROOTFLOW_IO_INSTANTIATE

}  // namespace rootflow::io
