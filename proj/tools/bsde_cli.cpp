// bsde: build ball -> Siegel space embeddings, run their property suites,
// enumerate admissible direct sums and apply the Cayley transform.
//
// Exit codes: 0 success / all suites pass, 1 mathematical failure, 2 usage or
// schema error.

#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>
#include <sstream>
#include <string>

#include "bsde/embeddings.hpp"
#include "bsde/harness.hpp"
#include "bsde/json_io.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kMathFailure = 1;
constexpr int kUsage = 2;

int exit_code_for(const bsde::Error& e) {
  switch (e.kind()) {
    case bsde::ErrorKind::Schema:
    case bsde::ErrorKind::InvalidSpec:
    case bsde::ErrorKind::BudgetExceeded:
    case bsde::ErrorKind::ShapeMismatch:
    case bsde::ErrorKind::DimensionMismatch:
    case bsde::ErrorKind::DegreeOutOfRange:
      return kUsage;
    default:
      return kMathFailure;
  }
}

bsde::Tolerance default_tolerance() {
  bsde::Tolerance tol;
  if (const char* env = std::getenv("BSDE_TOL")) {
    try {
      tol.eq_tol = std::stod(env);
    } catch (const std::exception&) {
      throw bsde::Error(bsde::ErrorKind::Schema, std::string("BSDE_TOL is not a number: ") + env);
    }
  }
  return tol;
}

std::vector<std::string> split_csv(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, ','))
    if (!item.empty()) out.push_back(item);
  return out;
}

int cmd_embed(const std::string& spec_path, const std::string& point_path, const std::string& out_path) {
  const bsde::Tolerance tol = default_tolerance();
  tol.validate();
  const bsde::EmbeddingSpec spec = bsde::spec_from_json(bsde::read_json_file(spec_path));
  try {
    spec.validate();
  } catch (const bsde::Error& e) {
    // An over-budget spec is a domain violation for embed (but a usage error for verify).
    if (e.kind() == bsde::ErrorKind::BudgetExceeded) throw bsde::Error(bsde::ErrorKind::DomainViolation, e.what());
    throw;
  }
  const bsde::BallPoint z = bsde::ball_from_json(bsde::read_json_file(point_path));
  if (z.dim() != spec.source_dim) {
    throw bsde::Error(bsde::ErrorKind::Schema, "point has dimension " + std::to_string(z.dim()) +
                                                   " but spec source_dim is " + std::to_string(spec.source_dim));
  }
  bsde::write_json_file(out_path, bsde::point_to_json(bsde::direct_sum_embed(spec, z, tol)));
  return kOk;
}

int cmd_verify(const std::string& spec_path, bsde::HarnessConfig config, const std::string& suites,
               std::optional<double> eq_tol, const std::string& report_path) {
  config.tol = default_tolerance();
  if (eq_tol) config.tol.eq_tol = *eq_tol;
  if (!suites.empty()) config.suites = split_csv(suites);
  config.validate();
  const bsde::EmbeddingSpec spec = bsde::spec_from_json(bsde::read_json_file(spec_path));
  spec.validate();
  const bsde::Report report = bsde::run_harness(spec, config);
  bsde::write_json_file(report_path, report.to_json());
  for (const auto& s : report.suites)
    std::cout << (s.pass ? "PASS " : "FAIL ") << s.name << " max_residual=" << s.max_residual
              << " threshold=" << s.threshold << "\n";
  return report.pass() ? kOk : kMathFailure;
}

int cmd_enumerate(std::size_t n, std::size_t g_max, const std::string& out_path) {
  const auto result = bsde::enumerate_specs(n, g_max);
  nlohmann::json specs = nlohmann::json::array();
  for (const auto& s : result.specs) specs.push_back(bsde::spec_to_json(s));
  bsde::write_json_file(out_path, {{"source_dim", n},
                                   {"max_g", g_max},
                                   {"minimal_g", result.minimal_g},
                                   {"count", result.specs.size()},
                                   {"specs", specs}});
  return kOk;
}

int cmd_cayley(const std::string& point_path, const std::string& direction, const std::string& out_path) {
  const bsde::Tolerance tol = default_tolerance();
  tol.validate();
  const bsde::DomainPoint pt = bsde::point_from_json(bsde::read_json_file(point_path));
  const auto dir = direction == "to-bounded" ? bsde::CayleyDirection::ToBounded : bsde::CayleyDirection::ToSiegel;
  const auto expected = dir == bsde::CayleyDirection::ToBounded ? bsde::DomainKind::SiegelUpper
                                                                : bsde::DomainKind::TypeIII;
  if (pt.kind() != expected) {
    throw bsde::Error(bsde::ErrorKind::Schema, "direction " + direction + " expects a point of kind \"" +
                                                   bsde::to_string(expected) + "\"");
  }
  bsde::write_json_file(out_path, bsde::point_to_json(bsde::cayley(pt, dir, tol)));
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Holomorphic embeddings of complex balls into Siegel space, with matched retractions"};
  app.require_subcommand(1);

  std::string spec_path, point_path, out_path, report_path, suites, direction;
  bsde::HarnessConfig config;
  std::optional<double> eq_tol;
  std::size_t source_dim = 0, max_g = 0;

  auto* embed = app.add_subcommand("embed", "Embed a ball point through a spec");
  embed->add_option("--spec", spec_path, "EmbeddingSpec JSON")->required();
  embed->add_option("--point", point_path, "Ball point JSON (kind I, one column)")->required();
  embed->add_option("--out", out_path, "Output point JSON")->required();

  auto* verify = app.add_subcommand("verify", "Run the property suites for a spec");
  verify->add_option("--spec", spec_path, "EmbeddingSpec JSON")->required();
  verify->add_option("--samples", config.samples, "Samples per suite")->check(CLI::PositiveNumber);
  verify->add_option("--seed", config.seed, "Seed");
  verify->add_option("--tol", eq_tol, "Equality tolerance (overrides BSDE_TOL)");
  verify->add_option("--radius-cap", config.radius_cap, "Sampling radius cap in (0, 1)");
  verify->add_option("--suites", suites, "Comma-separated suites");
  verify->add_option("--report", report_path, "Report JSON")->required();

  auto* enumerate = app.add_subcommand("enumerate", "List admissible direct-sum specs");
  enumerate->add_option("--source-dim", source_dim, "Ball dimension N")->required()->check(CLI::PositiveNumber);
  enumerate->add_option("--max-g", max_g, "Genus budget")->required()->check(CLI::PositiveNumber);
  enumerate->add_option("--out", out_path, "Output JSON")->required();

  auto* cayley = app.add_subcommand("cayley", "Cayley transform between Siegel space and III_g");
  cayley->add_option("--point", point_path, "Point JSON")->required();
  cayley->add_option("--direction", direction, "to-bounded | to-siegel")
      ->required()
      ->check(CLI::IsMember({"to-bounded", "to-siegel"}));
  cayley->add_option("--out", out_path, "Output point JSON")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*embed) return cmd_embed(spec_path, point_path, out_path);
    if (*verify) return cmd_verify(spec_path, config, suites, eq_tol, report_path);
    if (*enumerate) return cmd_enumerate(source_dim, max_g, out_path);
    if (*cayley) return cmd_cayley(point_path, direction, out_path);
  } catch (const bsde::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kMathFailure;
  }
  return kUsage;
}
