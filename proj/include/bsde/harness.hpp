#pragma once

// Seeded property suites over one embedding spec, and the JSON report they
// produce. A report is a pure function of (spec, config): no timestamps, no
// thread-dependent ordering.

#include <json.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "bsde/embeddings.hpp"

namespace bsde {

inline constexpr int kReportSchema = 1;

/// Canonical suite order.
const std::vector<std::string>& all_suites();

struct HarnessConfig {
  std::uint64_t seed = 0;
  std::size_t samples = 200;
  double radius_cap = 0.95;
  Tolerance tol;
  std::vector<std::string> suites = all_suites();

  /// Throws Schema for unknown suite names or out-of-range values.
  void validate() const;
};

struct SuiteResult {
  std::string name;
  bool pass = false;
  std::size_t samples = 0;
  double max_residual = 0.0;
  double threshold = 0.0;
  std::size_t worst_index = 0;
  nlohmann::json worst_input;  // null when no sample was drawn
  std::string detail;
};

struct Report {
  EmbeddingSpec spec;
  HarnessConfig config;
  std::vector<SuiteResult> suites;
  nlohmann::json informational = nlohmann::json::array();

  bool pass() const;
  nlohmann::json to_json() const;
};

SuiteResult run_suite(const std::string& name, const EmbeddingSpec& spec, const HarnessConfig& config);

/// Runs the configured suites in canonical order.
Report run_harness(const EmbeddingSpec& spec, const HarnessConfig& config);

/// Measured sigma^2 units conj(a(M)) a(M^c) for every degree of Lambda(C^{p+1}).
nlohmann::json sigma_square_record(std::size_t p);

/// Induced action of a diagonal phase on lambda_embed coordinates:
/// entry (i, j) picks up phi_{row index} * conj(phi_{column index}) where
/// phi_M is the product of the phases over M (phase 1 on e_{p+1}).
ComplexMatrix induced_phase_action(const ComplexVector& phases, std::size_t m, LambdaTarget target,
                                   const ComplexMatrix& image);

}  // namespace bsde
