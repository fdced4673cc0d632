#include "cli/cli.hpp"

#include <doctest.h>
#include <json.hpp>

#include <unistd.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using Json = nlohmann::json;

namespace {

struct Run {
  int code = 0;
  std::string out;
  std::string err;
  Json json() const { return Json::parse(out); }
};

Run run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  Run r;
  r.code = rootflow::cli::run(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

fs::path scratch() {
  static const fs::path dir = [] {
    const fs::path d = fs::temp_directory_path() / ("rootflow_cli_test_" + std::to_string(::getpid()));
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

std::string write(const std::string& name, const std::string& text) {
  const fs::path p = scratch() / name;
  std::ofstream(p) << text;
  return p.string();
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

const std::string kZ2t = R"({"degree": 2, "standard": true, "coeffs": [0, {"coeffs": [0, -1]}]})";

}  // namespace

TEST_CASE("analyze z^2 - t") {
  const auto r = run({"analyze", "-i", write("z2t.json", kZ2t)});
  REQUIRE(r.code == rootflow::cli::kOk);
  const Json j = r.json();
  CHECK(j["mode"] == "exact");
  CHECK(j["degree"] == 2);
  CHECK(j["distinct_root_count"] == 1);
  CHECK(j["genericity"]["verdict"] == "Generic");
  CHECK(j["genericity"]["k"] == 2);
  CHECK(j["genericity"]["order"] == 1);
  CHECK(j["differentiable"] == false);
  CHECK(j["minors"][1]["order"] == 1);
}

TEST_CASE("analyze (z - t)(z - 2t)") {
  // a_1 = 3t, a_2 = 2t^2
  const auto r = run({"analyze", "-i", write("lin.json", R"({"degree": 2, "coeffs": [[0, 3], [0, 0, 2]]})")});
  REQUIRE(r.code == 0);
  const Json j = r.json();
  CHECK(j["differentiable"] == true);
  CHECK(j["genericity"]["order"] == 2);
}

TEST_CASE("output is byte stable") {
  const std::string in = write("stable.json", kZ2t);
  for (const char* cmd : {"analyze", "desingularize"}) {
    const auto a = run({cmd, "-i", in});
    const auto b = run({cmd, "-i", in});
    CHECK(a.code == 0);
    CHECK(a.out == b.out);
  }
}

TEST_CASE("desingularize z^2 - t") {
  const auto r = run({"desingularize", "-i", write("d.json", kZ2t), "-K", "6"});
  REQUIRE(r.code == 0);
  const Json j = r.json();
  CHECK(j["N_plus"] == 2);
  CHECK(j["N_minus"] == 2);
}

TEST_CASE("eigen [[0, t], [t, 0]]") {
  const auto r = run({"eigen", "-i", write("m.json", R"({"n": 2, "entries": [[0, [0, 1]], [[0, 1], 0]]})")});
  REQUIRE(r.code == 0);
  CHECK(r.json()["N_plus"] == 1);
}

TEST_CASE("exit codes") {
  CHECK(run({"analyze", "-i", write("bad.json", R"({"degree": 2, "coeffs": [0)")}).code == rootflow::cli::kParse);
  CHECK(run({"analyze"}).code == rootflow::cli::kParse);
  CHECK(run({"frobnicate"}).code == rootflow::cli::kParse);
  CHECK(run({"analyze", "-i", write("shape.json", R"({"degree": 3, "coeffs": [0]})")}).code == rootflow::cli::kParse);
  CHECK(run({"analyze", "-i", write("k.json", kZ2t), "-K", "0"}).code == rootflow::cli::kParse);
  // a matrix where a curve is expected
  CHECK(run({"desingularize", "-i", write("mat_as_curve.json", R"({"n": 1, "entries": [[0]]})")}).code ==
        rootflow::cli::kParse);
  const auto nn = run({"eigen", "-i", write("nn.json", R"({"n": 2, "entries": [[0, [0, 1]], [0, 0]]})")});
  CHECK(nn.code == rootflow::cli::kPrecondition);
  CHECK(nn.err.find("NotNormal") != std::string::npos);
  const auto flat = run({"desingularize", "--mode", "float", "-i",
                         write("flat.json", R"({"degree": 2, "standard": true,
                                "coeffs": [{"coeffs": [0], "polynomial": false}, {"coeffs": [0], "polynomial": false}]})")});
  CHECK(flat.code == rootflow::cli::kGenericity);
}

TEST_CASE("verify") {
  const auto all = run({"verify", "--filter", "desing"});
  CHECK(all.code == 0);
  CHECK(all.out.find("2/2 criteria passed") != std::string::npos);
  CHECK(run({"verify", "--filter", "no-such-criterion"}).code == rootflow::cli::kPrecondition);
  const auto loose = run({"verify", "--filter", "pullback", "--eps", "1"});
  CHECK(loose.code == rootflow::cli::kVerifyFailed);
  CHECK(loose.err.find("first failure") != std::string::npos);
}

TEST_CASE("--out and --csv") {
  const std::string out = (scratch() / "out.json").string();
  const auto r = run({"analyze", "-i", write("o.json", kZ2t), "-o", out});
  CHECK(r.code == 0);
  CHECK(r.out.empty());
  CHECK(Json::parse(slurp(out))["degree"] == 2);

  const std::string csv = (scratch() / "paths.csv").string();
  const std::string samples =
      R"({"grid": [0, 0.25, 0.5, 0.75, 1], "coeffs": [[0, 0], [0, -0.25], [0, -0.5], [0, -0.75], [0, -1]]})";
  const auto t = run({"track", "-i", write("s.json", samples), "--csv", csv});
  REQUIRE(t.code == 0);
  const std::string text = slurp(csv);
  CHECK(std::count(text.begin(), text.end(), '\n') == 6);
  CHECK(t.json()["paths"]["paths"].size() == 2);
}

TEST_CASE("ROOTFLOW_MODE overrides --mode") {
  const std::string in = write("env.json", kZ2t);
  ::setenv("ROOTFLOW_MODE", "float", 1);
  const auto r = run({"analyze", "-i", in, "--mode", "exact"});
  ::unsetenv("ROOTFLOW_MODE");
  REQUIRE(r.code == 0);
  CHECK(r.json()["mode"] == "float");
  CHECK(run({"analyze", "-i", in}).json()["mode"] == "exact");
}
