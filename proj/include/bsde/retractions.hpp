#pragma once

// Holomorphic left inverses of the embeddings in embeddings.hpp. Each one is
// built from coordinate selection, fixed linear maps and averaging, so the
// composite p : III_g -> B^N is holomorphic and p o i = id.

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "bsde/embeddings.hpp"

namespace bsde {

/// Type-erased retraction record: which construction it is, where it maps
/// from and to, and the evaluator itself.
struct Retraction {
  std::string provenance;
  DomainShape source;
  DomainShape target;
  std::function<DomainPoint(const DomainPoint&)> evaluate;
};

/// First N entries of row 1.
BallPoint retract_corner_I(const DomainPoint& y, std::size_t n, const Tolerance& tol = {});

/// Upper-left k x k block of a TypeIII point.
DomainPoint retract_corner_III(const DomainPoint& y, std::size_t k, const Tolerance& tol = {});

/// Lower-left p x q block Z of Y = [[W1, Z^T], [Z, W2]] in III_{p+q}.
DomainPoint retract_offdiag(const DomainPoint& y, std::size_t p, std::size_t q, const Tolerance& tol = {});

/// Diagonal average w -> (tr(w) / u) I_u onto the line {zeta I_u}.
ComplexMatrix scalar_line_retraction(const ComplexMatrix& w);

/// Retraction for the exterior-power embedding Lambda^m : B^p -> I_{r,s} or III_r.
///
/// The primary evaluator is the orthogonal projection (Frobenius inner product
/// on matrix entries) onto the image plane followed by coordinate recovery,
/// z = L^+ vec(y). The axis evaluator is the corner-then-average construction
/// along the direction e_1: gather the u x u submatrix carrying the image of
/// e_1, undo its phases, then apply scalar_line_retraction.
class LambdaRetraction {
 public:
  LambdaRetraction(std::size_t p, std::size_t m, LambdaTarget target, const Tolerance& tol = {});

  std::size_t source_dim() const { return p_; }
  std::size_t degree() const { return m_; }
  LambdaTarget target() const { return target_; }
  DomainShape target_shape() const;
  /// u = C(p-1, m-1): size of the block carrying the image of the e_1 axis.
  std::size_t axis_block_size() const { return axis_rows_.size(); }
  /// Entry-wise linear map z -> vec(lambda_embed(z)) (column-major entries).
  const ComplexMatrix& linear_map() const { return linear_map_; }

  BallPoint apply(const DomainPoint& y) const;
  /// Corner-then-average evaluator; returns (t, 0, ..., 0).
  BallPoint apply_axis_average(const DomainPoint& y) const;
  /// The u x u submatrix q_1(y), phases removed.
  ComplexMatrix axis_corner(const DomainPoint& y) const;

 private:
  void check_input(const DomainPoint& y) const;

  std::size_t p_;
  std::size_t m_;
  LambdaTarget target_;
  Tolerance tol_;
  ComplexMatrix linear_map_;
  ComplexMatrix pseudo_inverse_;
  std::vector<Eigen::Index> axis_rows_;
  std::vector<Eigen::Index> axis_cols_;
  std::vector<cdouble> axis_phases_;
};

BallPoint retract_lambda(const DomainPoint& y, std::size_t p, std::size_t m, const Tolerance& tol = {});

/// p = p_a o p_b for a direct-sum embedding: cut out each factor's diagonal
/// block, retract it to B^N with the matched retraction, then average the
/// resulting ball points with equal weights.
class DirectSumRetraction {
 public:
  explicit DirectSumRetraction(EmbeddingSpec spec, const Tolerance& tol = {});

  const EmbeddingSpec& spec() const { return spec_; }
  BallPoint apply(const DomainPoint& y) const;
  /// Retraction of one diagonal block (III_{size}) back to B^N.
  BallPoint retract_block(std::size_t factor_index, const DomainPoint& block) const;
  /// The per-factor ball points before averaging.
  std::vector<BallPoint> factor_points(const DomainPoint& y) const;

 private:
  EmbeddingSpec spec_;
  Tolerance tol_;
  std::vector<BlockRange> blocks_;
  std::vector<std::shared_ptr<const LambdaRetraction>> lambda_;  // null for non-Lambda factors
};

BallPoint retract_direct_sum(const DomainPoint& y, const EmbeddingSpec& spec, const Tolerance& tol = {});

/// Every retraction stage used by a spec, as uniform records: the block
/// projections p_b, the per-factor retractions and the composite p.
std::vector<Retraction> retraction_stages(const EmbeddingSpec& spec, const Tolerance& tol = {});

struct SandwichRecord {
  double d_ball = 0.0;     // d_{B^N}(x, y)
  double d_target = 0.0;   // d_{III_g}(i(x), i(y))
  double d_back = 0.0;     // d_{B^N}(p(i(x)), p(i(y)))
  bool embedding_decreasing = false;   // d_target <= d_ball + slack
  bool retraction_decreasing = false;  // d_back <= d_target + slack
  double gap = 0.0;        // |d_ball - d_target|
};

/// Distances before and after embedding, and after retracting back. Both
/// maps are holomorphic, hence distance-decreasing, which forces equality.
SandwichRecord isometry_sandwich(const EmbeddingSpec& spec, const BallPoint& x, const BallPoint& y,
                                 const Tolerance& tol = {});
SandwichRecord isometry_sandwich(const DirectSumRetraction& retraction, const BallPoint& x, const BallPoint& y,
                                 const Tolerance& tol = {});

}  // namespace bsde
