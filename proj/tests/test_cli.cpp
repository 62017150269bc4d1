#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "bsde/json_io.hpp"

using namespace bsde;
namespace fs = std::filesystem;

namespace {

struct Workdir {
  fs::path root;
  Workdir() {
    root = fs::temp_directory_path() / ("bsde_cli_" + std::to_string(::getpid()));
    fs::create_directories(root);
  }
  ~Workdir() { fs::remove_all(root); }
  std::string path(const std::string& name) const { return (root / name).string(); }
  std::string write(const std::string& name, const std::string& text) const {
    std::ofstream(path(name)) << text;
    return path(name);
  }
};

struct Run {
  int code;
  std::string err;
};

Run cli(const Workdir& w, const std::string& args, const std::string& env = "") {
  const std::string errfile = w.path("stderr.txt");
  const std::string cmd = env + " \"" BSDE_CLI_PATH "\" " + args + " > " + w.path("stdout.txt") + " 2> " + errfile;
  const int status = std::system(cmd.c_str());
  std::stringstream err;
  err << std::ifstream(errfile).rdbuf();
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, err.str()};
}

std::string slurp(const std::string& path) {
  std::stringstream s;
  s << std::ifstream(path).rdbuf();
  return s.str();
}

const char* kSpecN2 = R"({"source_dim": 2, "target_g": 3, "factors": [{"kind": "connecting_lambda", "m": 1}]})";

}  // namespace

TEST_CASE("embed: connecting example through files") {
  Workdir w;
  const auto spec = w.write("spec.json", kSpecN2);
  const auto pt = w.write("z.json", R"({"kind": "I", "p": 2, "q": 1, "re": [[0.3], [0.4]], "im": [[0], [0]]})");
  REQUIRE(cli(w, "embed --spec " + spec + " --point " + pt + " --out " + w.path("y.json")).code == 0);
  const ComplexMatrix y = point_from_json(read_json_file(w.path("y.json"))).matrix();
  ComplexMatrix expected(3, 3);
  expected << 0, 0.3, 0.4, 0.3, 0, 0, 0.4, 0, 0;
  CHECK(max_abs(ComplexMatrix(y - expected)) <= 1e-15);
}

TEST_CASE("embed: zero point, malformed input, over budget, outside point") {
  Workdir w;
  const auto spec = w.write("spec.json", kSpecN2);
  const auto zero = w.write("z.json", R"({"kind": "I", "p": 2, "q": 1, "re": [[0], [0]], "im": [[0], [0]]})");
  REQUIRE(cli(w, "embed --spec " + spec + " --point " + zero + " --out " + w.path("y.json")).code == 0);
  CHECK(max_abs(point_from_json(read_json_file(w.path("y.json"))).matrix()) == 0.0);

  const auto bad = w.write("bad.json", R"({"source_dim": 2, "target_g": 3, "factors": [{"kind": 7}]})");
  const Run r = cli(w, "embed --spec " + bad + " --point " + zero + " --out " + w.path("y2.json"));
  CHECK(r.code == 2);
  CHECK(r.err.find("factors[0].kind") != std::string::npos);

  const auto broken = w.write("broken.json", "{not json");
  CHECK(cli(w, "embed --spec " + broken + " --point " + zero + " --out " + w.path("y3.json")).code == 2);

  const auto over = w.write("over.json", R"({"source_dim": 2, "target_g": 2, "factors": [{"kind": "connecting_lambda"}]})");
  CHECK(cli(w, "embed --spec " + over + " --point " + zero + " --out " + w.path("y4.json")).code == 1);

  const auto outside = w.write("far.json", R"({"kind": "I", "p": 2, "q": 1, "re": [[0.8], [0.8]], "im": [[0], [0]]})");
  CHECK(cli(w, "embed --spec " + spec + " --point " + outside + " --out " + w.path("y5.json")).code == 1);
}

TEST_CASE("verify: passing run, determinism, budget error, usage error") {
  Workdir w;
  const auto spec = w.write("spec.json", kSpecN2);
  REQUIRE(cli(w, "verify --spec " + spec + " --samples 40 --report " + w.path("a.json")).code == 0);
  REQUIRE(cli(w, "verify --spec " + spec + " --samples 40 --report " + w.path("b.json")).code == 0);
  CHECK(slurp(w.path("a.json")) == slurp(w.path("b.json")));
  const auto report = read_json_file(w.path("a.json"));
  CHECK(report["pass"] == true);
  for (const auto& s : report["suites"]) CHECK(s["max_residual"].get<double>() <= 1e-8);

  const auto over = w.write("over.json", R"({"source_dim": 2, "target_g": 2, "factors": [{"kind": "connecting_lambda"}]})");
  const Run r = cli(w, "verify --spec " + over + " --report " + w.path("c.json"));
  CHECK(r.code == 2);
  CHECK(r.err.find("BudgetExceeded") != std::string::npos);

  CHECK(cli(w, "verify --spec " + spec + " --suites retraction,bogus --report " + w.path("d.json")).code == 2);
  CHECK(cli(w, "verify --spec " + spec + " --samples 0 --report " + w.path("d.json")).code == 2);
  CHECK(cli(w, "frobnicate").code == 2);
}

TEST_CASE("verify: BSDE_TOL below psd_margin is a usage error") {
  Workdir w;
  const auto spec = w.write("spec.json", R"({"source_dim": 4, "target_g": 10, "factors": [{"kind": "connecting_lambda", "m": 2}]})");
  const Run r = cli(w, "verify --spec " + spec + " --samples 50 --suites retraction --report " + w.path("r.json"),
                    "BSDE_TOL=1e-17");
  // psd_margin (1e-10) > eq_tol is rejected as a usage error before any suite runs.
  CHECK(r.code == 2);
}

TEST_CASE("enumerate examples") {
  Workdir w;
  REQUIRE(cli(w, "enumerate --source-dim 2 --max-g 2 --out " + w.path("e2.json")).code == 0);
  const auto e2 = read_json_file(w.path("e2.json"));
  CHECK(e2["specs"].empty());
  CHECK(e2["minimal_g"] == 3);

  REQUIRE(cli(w, "enumerate --source-dim 5 --max-g 10 --out " + w.path("e5.json")).code == 0);
  const auto e5 = read_json_file(w.path("e5.json"));
  bool has_lambda_iii = false;
  for (const auto& s : e5["specs"])
    for (const auto& f : s["factors"]) has_lambda_iii = has_lambda_iii || (f["kind"] == "lambda_III" && f["m"] == 3);
  CHECK(has_lambda_iii);

  REQUIRE(cli(w, "enumerate --source-dim 1 --max-g 1 --out " + w.path("e1.json")).code == 0);
  const auto e1 = read_json_file(w.path("e1.json"));
  REQUIRE(e1["specs"].size() == 1);
  CHECK(e1["specs"][0]["factors"][0]["kind"] == "lambda_III");

  CHECK(cli(w, "enumerate --source-dim 0 --max-g 3 --out " + w.path("e0.json")).code == 2);
}

TEST_CASE("cayley: center, round trip, asymmetric input") {
  Workdir w;
  const auto center = w.write("c.json", R"({"kind": "Siegel", "p": 2, "q": 2, "re": [[0, 0], [0, 0]], "im": [[1, 0], [0, 1]]})");
  REQUIRE(cli(w, "cayley --point " + center + " --direction to-bounded --out " + w.path("w.json")).code == 0);
  CHECK(max_abs(point_from_json(read_json_file(w.path("w.json"))).matrix()) <= 1e-15);

  const auto w0 = w.write("w0.json",
                          R"({"kind": "III", "p": 2, "q": 2, "re": [[0.3, 0.1], [0.1, -0.2]], "im": [[0.1, 0.05], [0.05, 0]]})");
  REQUIRE(cli(w, "cayley --point " + w0 + " --direction to-siegel --out " + w.path("s.json")).code == 0);
  REQUIRE(cli(w, "cayley --point " + w.path("s.json") + " --direction to-bounded --out " + w.path("back.json")).code == 0);
  const ComplexMatrix a = point_from_json(read_json_file(w0)).matrix();
  const ComplexMatrix b = point_from_json(read_json_file(w.path("back.json"))).matrix();
  CHECK(max_abs(ComplexMatrix(a - b)) <= 1e-9);

  const auto asym = w.write("asym.json", R"({"kind": "Siegel", "p": 2, "q": 2, "re": [[0, 0.5], [0, 0]], "im": [[1, 0], [0, 1]]})");
  const Run r = cli(w, "cayley --point " + asym + " --direction to-bounded --out " + w.path("x.json"));
  CHECK(r.code == 1);
  CHECK(r.err.find("symmetr") != std::string::npos);

  CHECK(cli(w, "cayley --point " + w0 + " --direction to-bounded --out " + w.path("x.json")).code == 2);
  CHECK(cli(w, "cayley --point " + w0 + " --direction sideways --out " + w.path("x.json")).code == 2);
}
