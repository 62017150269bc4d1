#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace bsde {

enum class ErrorKind {
  NotHermitian,
  NoConvergence,
  SingularSystem,
  RankDeficient,
  ShapeMismatch,
  DimensionMismatch,
  DomainViolation,
  SingularCayley,
  IllConditioned,
  NotAPermutation,
  DegreeOutOfRange,
  InvalidMultiIndex,
  InvalidSpec,
  BudgetExceeded,
  NormalizationSingular,
  NonlinearityDetected,
  SpecMismatch,
  Schema,
};

constexpr std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NotHermitian: return "NotHermitian";
    case ErrorKind::NoConvergence: return "NoConvergence";
    case ErrorKind::SingularSystem: return "SingularSystem";
    case ErrorKind::RankDeficient: return "RankDeficient";
    case ErrorKind::ShapeMismatch: return "ShapeMismatch";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::DomainViolation: return "DomainViolation";
    case ErrorKind::SingularCayley: return "SingularCayley";
    case ErrorKind::IllConditioned: return "IllConditioned";
    case ErrorKind::NotAPermutation: return "NotAPermutation";
    case ErrorKind::DegreeOutOfRange: return "DegreeOutOfRange";
    case ErrorKind::InvalidMultiIndex: return "InvalidMultiIndex";
    case ErrorKind::InvalidSpec: return "InvalidSpec";
    case ErrorKind::BudgetExceeded: return "BudgetExceeded";
    case ErrorKind::NormalizationSingular: return "NormalizationSingular";
    case ErrorKind::NonlinearityDetected: return "NonlinearityDetected";
    case ErrorKind::SpecMismatch: return "SpecMismatch";
    case ErrorKind::Schema: return "Schema";
  }
  return "Unknown";
}

/// Every failure raised by the library carries a machine-readable kind; the
/// message always starts with the kind name so diagnostics can be grepped.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& detail)
      : std::runtime_error(std::string(to_string(kind)) + ": " + detail), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace bsde
