#pragma once

// Holomorphic totally geodesic embeddings B^N -> III_g.
//
// A factor is one of
//   StandardI         B^N -> I_{1,N} (first row) -> III_{N+1} (connecting map)
//   StandardIII       B^1 = III_1, a 1 x 1 diagonal block
//   ConnectingLambda  Lambda^m: B^N -> I_{r,s}, then the connecting map into III_{r+s}
//   LambdaIII         Lambda^m: B^N -> III_r, only for N = 1 (mod 4), m = (N+1)/2
// and an embedding is a direct sum of factors placed as diagonal blocks,
// padded with zeros up to the target genus.

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "bsde/domains.hpp"
#include "bsde/exterior.hpp"

namespace bsde {

enum class FactorKind { StandardI, StandardIII, ConnectingLambda, LambdaIII };

std::string to_string(FactorKind kind);
std::optional<FactorKind> parse_factor_kind(const std::string& name);

struct FactorSpec {
  FactorKind kind = FactorKind::ConnectingLambda;
  std::size_t m = 1;

  /// Size of the diagonal block this factor occupies for source dimension p.
  std::size_t cost(std::size_t p) const;
  /// Throws InvalidSpec / DegreeOutOfRange if the factor does not exist for p.
  void validate(std::size_t p) const;

  auto operator<=>(const FactorSpec&) const = default;
};

struct EmbeddingSpec {
  std::size_t source_dim = 1;
  std::size_t target_g = 1;
  std::vector<FactorSpec> factors;

  std::size_t total_cost() const;
  /// InvalidSpec for malformed factors, BudgetExceeded if the cost exceeds target_g.
  void validate() const;
  /// Factors sorted by (kind, m).
  EmbeddingSpec canonical() const;
  std::string to_string() const;

  bool operator==(const EmbeddingSpec&) const = default;
};

/// Diagonal block occupied by one factor inside the g x g target.
struct BlockRange {
  std::size_t offset = 0;
  std::size_t size = 0;
  FactorSpec factor;
};

std::vector<BlockRange> block_layout(const EmbeddingSpec& spec);

/// z -> p x q matrix whose first row starts with z (requires N <= q).
DomainPoint standard_embed_I(const BallPoint& z, std::size_t p, std::size_t q);

/// k x k symmetric z -> upper-left corner of an l x l zero matrix (k < l).
DomainPoint corner_embed_III(const DomainPoint& z, std::size_t l);

/// Z (p x q) -> [[0_{q x q}, Z^T], [Z, 0_{p x p}]] in III_{p+q}.
DomainPoint connecting_embed(const DomainPoint& z);

enum class LambdaTarget { TypeI, TypeIII };

/// Exterior-power embedding. The image of z is the point of
/// D(Lambda^m V, F^(m)) whose negative subspace is Lambda^{m-1}(V_+) ^ V_-,
/// with V_- = span(sum_i z_i e_i + e_{p+1}) and V_+ its F-orthocomplement.
/// Coordinates are normalized so the negative block of each basis vector is
/// the identity. TypeI output is r x s; TypeIII output re-indexes the
/// positive rows through sigma and requires the balanced case.
DomainPoint lambda_embed(const BallPoint& z, std::size_t m, LambdaTarget target, const Tolerance& tol = {});

/// Symmetric block of side factor.cost(N) carrying the image of z.
ComplexMatrix factor_block(const FactorSpec& factor, const BallPoint& z, const Tolerance& tol = {});

DomainPoint direct_sum_embed(const EmbeddingSpec& spec, const BallPoint& z, const Tolerance& tol = {});

/// Upper triangle (i <= j) of a symmetric g x g matrix, row-major.
ComplexVector flatten_symmetric(const ComplexMatrix& m);
ComplexMatrix unflatten_symmetric(const ComplexVector& v, std::size_t g);

struct BuiltEmbedding {
  EmbeddingSpec spec;
  /// g(g+1)/2 x N, flattened symmetric coordinates of the image.
  ComplexMatrix linear_map;
  std::vector<BlockRange> blocks;
  /// Largest |direct_sum_embed(z) - L z| seen while checking linearity.
  double linearity_residual = 0.0;

  DomainPoint apply(const BallPoint& z) const;
  std::size_t rank(const Tolerance& tol = {}) const;
};

inline constexpr double kLinearizationProbe = 0.25;
inline constexpr std::size_t kLinearityChecks = 50;

/// Assembles L column by column from direct_sum_embed(eps e_k) / eps and
/// verifies direct_sum_embed(z) = L z on seeded interior points; throws
/// NonlinearityDetected otherwise.
BuiltEmbedding linearize(const EmbeddingSpec& spec, const Tolerance& tol = {}, std::uint64_t seed = 0);

/// Factors a direct sum may be assembled from for source dimension N:
/// ConnectingLambda for m = 1..N and LambdaIII in the balanced case.
std::vector<FactorSpec> catalog_factors(std::size_t source_dim);

struct SpecEnumeration {
  std::vector<EmbeddingSpec> specs;  // target_g = g_max, canonical order
  std::size_t minimal_g = 0;         // cheapest catalog factor
};

/// All multisets of catalog factors with total cost <= g_max.
SpecEnumeration enumerate_specs(std::size_t source_dim, std::size_t g_max);

}  // namespace bsde
