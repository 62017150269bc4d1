#include "bsde/retractions.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace bsde {

BallPoint retract_corner_I(const DomainPoint& y, std::size_t n, const Tolerance& tol) {
  if (y.kind() != DomainKind::TypeI) throw Error(ErrorKind::ShapeMismatch, "retract_corner_I expects TypeI");
  const ComplexMatrix& ym = y.matrix();
  if (n < 1 || static_cast<Eigen::Index>(n) > ym.cols()) {
    std::ostringstream os;
    os << "cannot read B^" << n << " coordinates from a row of length " << ym.cols();
    throw Error(ErrorKind::DimensionMismatch, os.str());
  }
  require_interior(y, tol, "retract_corner_I input");
  return BallPoint(ym.row(0).head(static_cast<Eigen::Index>(n)).transpose());
}

namespace {

DomainPoint principal_block(const DomainPoint& y, std::size_t offset, std::size_t size) {
  const auto off = static_cast<Eigen::Index>(offset);
  const auto n = static_cast<Eigen::Index>(size);
  return DomainPoint::type_iii(y.matrix().block(off, off, n, n));
}

}  // namespace

DomainPoint retract_corner_III(const DomainPoint& y, std::size_t k, const Tolerance& tol) {
  if (y.kind() != DomainKind::TypeIII) throw Error(ErrorKind::ShapeMismatch, "retract_corner_III expects TypeIII");
  if (k < 1 || static_cast<Eigen::Index>(k) >= y.matrix().rows())
    throw Error(ErrorKind::DimensionMismatch, "retract_corner_III needs 1 <= k < l");
  require_interior(y, tol, "retract_corner_III input");
  return principal_block(y, 0, k);
}

DomainPoint retract_offdiag(const DomainPoint& y, std::size_t p, std::size_t q, const Tolerance& tol) {
  if (y.kind() != DomainKind::TypeIII) throw Error(ErrorKind::ShapeMismatch, "retract_offdiag expects TypeIII");
  if (p < 1 || q < 1 || static_cast<Eigen::Index>(p + q) != y.matrix().rows()) {
    std::ostringstream os;
    os << "retract_offdiag: " << y.matrix().rows() << " != p + q = " << p + q;
    throw Error(ErrorKind::DimensionMismatch, os.str());
  }
  require_interior(y, tol, "retract_offdiag input");
  return DomainPoint::type_i(
      y.matrix().bottomLeftCorner(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(q)));
}

ComplexMatrix scalar_line_retraction(const ComplexMatrix& w) {
  if (w.rows() != w.cols() || w.rows() < 1)
    throw Error(ErrorKind::DimensionMismatch, "scalar_line_retraction needs a nonempty square matrix");
  const cdouble mean = w.trace() / static_cast<double>(w.rows());
  return ComplexMatrix::Identity(w.rows(), w.cols()) * mean;
}

namespace {

ComplexVector vec(const ComplexMatrix& m) {
  return Eigen::Map<const ComplexVector>(m.data(), m.size());
}

}  // namespace

LambdaRetraction::LambdaRetraction(std::size_t p, std::size_t m, LambdaTarget target, const Tolerance& tol)
    : p_(p), m_(m), target_(target), tol_(tol) {
  const Signature sig = signature(p, m);
  const auto rows = static_cast<Eigen::Index>(sig.r);
  const auto cols = static_cast<Eigen::Index>(target == LambdaTarget::TypeIII ? sig.r : sig.s);
  const auto n = static_cast<Eigen::Index>(p);

  linear_map_.resize(rows * cols, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    ComplexVector probe = ComplexVector::Zero(n);
    probe(k) = kLinearizationProbe;
    linear_map_.col(k) = vec(lambda_embed(BallPoint(probe), m, target, tol).matrix()) / kLinearizationProbe;
  }

  const RealVector sv = singular_values(linear_map_);
  if (!(sv(sv.size() - 1) > tol.psd_margin * std::max(1.0, sv(0))))
    throw Error(ErrorKind::IllConditioned, "exterior-power image plane is degenerate");
  const ComplexMatrix gram = linear_map_.adjoint() * linear_map_;
  pseudo_inverse_ = gram.ldlt().solve(linear_map_.adjoint());

  // The e_1 axis maps onto a phased partial permutation with u unit entries.
  for (Eigen::Index e = 0; e < linear_map_.rows(); ++e) {
    const cdouble v = linear_map_(e, 0);
    if (std::abs(v) > 0.5) {
      axis_rows_.push_back(e % rows);
      axis_cols_.push_back(e / rows);
      axis_phases_.push_back(v / std::abs(v));
    }
  }
  const std::size_t u = binomial(p - 1, m - 1);
  auto distinct = [](std::vector<Eigen::Index> v) {
    std::sort(v.begin(), v.end());
    return std::adjacent_find(v.begin(), v.end()) == v.end();
  };
  if (axis_rows_.size() != u || !distinct(axis_rows_) || !distinct(axis_cols_)) {
    std::ostringstream os;
    os << "axis image is not a partial permutation with " << u << " entries (found " << axis_rows_.size() << ")";
    throw Error(ErrorKind::IllConditioned, os.str());
  }
}

DomainShape LambdaRetraction::target_shape() const {
  const Signature sig = signature(p_, m_);
  return target_ == LambdaTarget::TypeIII ? DomainShape::type_iii(sig.r) : DomainShape::type_i(sig.r, sig.s);
}

void LambdaRetraction::check_input(const DomainPoint& y) const {
  if (y.shape() != target_shape()) {
    std::ostringstream os;
    os << "lambda retraction for p=" << p_ << " m=" << m_ << " expects a " << target_shape().rows() << "x"
       << target_shape().cols() << " " << to_string(target_shape().kind) << " point, got " << y.matrix().rows()
       << "x" << y.matrix().cols() << " " << to_string(y.kind());
    throw Error(ErrorKind::ShapeMismatch, os.str());
  }
  require_interior(y, tol_, "lambda retraction input");
}

BallPoint LambdaRetraction::apply(const DomainPoint& y) const {
  check_input(y);
  return BallPoint(pseudo_inverse_ * vec(y.matrix()));
}

ComplexMatrix LambdaRetraction::axis_corner(const DomainPoint& y) const {
  check_input(y);
  const auto u = static_cast<Eigen::Index>(axis_rows_.size());
  ComplexMatrix w(u, u);
  for (Eigen::Index a = 0; a < u; ++a)
    for (Eigen::Index b = 0; b < u; ++b)
      w(a, b) = std::conj(axis_phases_[static_cast<std::size_t>(a)]) *
                y.matrix()(axis_rows_[static_cast<std::size_t>(a)], axis_cols_[static_cast<std::size_t>(b)]);
  return w;
}

BallPoint LambdaRetraction::apply_axis_average(const DomainPoint& y) const {
  const ComplexMatrix line = scalar_line_retraction(axis_corner(y));
  ComplexVector out = ComplexVector::Zero(static_cast<Eigen::Index>(p_));
  out(0) = line(0, 0);
  return BallPoint(std::move(out));
}

BallPoint retract_lambda(const DomainPoint& y, std::size_t p, std::size_t m, const Tolerance& tol) {
  const LambdaTarget target = y.kind() == DomainKind::TypeIII ? LambdaTarget::TypeIII : LambdaTarget::TypeI;
  return LambdaRetraction(p, m, target, tol).apply(y);
}

DirectSumRetraction::DirectSumRetraction(EmbeddingSpec spec, const Tolerance& tol)
    : spec_(std::move(spec)), tol_(tol) {
  spec_.validate();
  blocks_ = block_layout(spec_);
  for (const auto& b : blocks_) {
    switch (b.factor.kind) {
      case FactorKind::ConnectingLambda:
        lambda_.push_back(std::make_shared<const LambdaRetraction>(spec_.source_dim, b.factor.m, LambdaTarget::TypeI, tol));
        break;
      case FactorKind::LambdaIII:
        lambda_.push_back(
            std::make_shared<const LambdaRetraction>(spec_.source_dim, b.factor.m, LambdaTarget::TypeIII, tol));
        break;
      default:
        lambda_.push_back(nullptr);
    }
  }
}

BallPoint DirectSumRetraction::retract_block(std::size_t factor_index, const DomainPoint& block) const {
  const BlockRange& b = blocks_.at(factor_index);
  const std::size_t n = spec_.source_dim;
  switch (b.factor.kind) {
    case FactorKind::StandardI:
      return retract_corner_I(retract_offdiag(block, 1, n, tol_), n, tol_);
    case FactorKind::StandardIII:
      require_interior(block, tol_, "standard_III block");
      return BallPoint(ComplexVector::Constant(1, block.matrix()(0, 0)));
    case FactorKind::ConnectingLambda: {
      const Signature sig = signature(n, b.factor.m);
      return lambda_[factor_index]->apply(retract_offdiag(block, sig.r, sig.s, tol_));
    }
    case FactorKind::LambdaIII:
      return lambda_[factor_index]->apply(block);
  }
  throw Error(ErrorKind::SpecMismatch, "unknown factor kind");
}

std::vector<BallPoint> DirectSumRetraction::factor_points(const DomainPoint& y) const {
  if (y.kind() != DomainKind::TypeIII || static_cast<std::size_t>(y.matrix().rows()) != spec_.target_g) {
    std::ostringstream os;
    os << "spec targets III_" << spec_.target_g << " but the point is " << to_string(y.kind()) << " of size "
       << y.matrix().rows();
    throw Error(ErrorKind::SpecMismatch, os.str());
  }
  require_interior(y, tol_, "direct-sum retraction input");
  std::vector<BallPoint> out;
  out.reserve(blocks_.size());
  for (std::size_t i = 0; i < blocks_.size(); ++i)
    out.push_back(retract_block(i, principal_block(y, blocks_[i].offset, blocks_[i].size)));
  return out;
}

BallPoint DirectSumRetraction::apply(const DomainPoint& y) const {
  const auto points = factor_points(y);
  ComplexVector sum = ComplexVector::Zero(static_cast<Eigen::Index>(spec_.source_dim));
  for (const auto& pt : points) sum += pt.coords;
  return BallPoint(sum / static_cast<double>(points.size()));
}

BallPoint retract_direct_sum(const DomainPoint& y, const EmbeddingSpec& spec, const Tolerance& tol) {
  return DirectSumRetraction(spec, tol).apply(y);
}

std::vector<Retraction> retraction_stages(const EmbeddingSpec& spec, const Tolerance& tol) {
  auto full = std::make_shared<const DirectSumRetraction>(spec, tol);
  const std::size_t n = spec.source_dim;
  const DomainShape ball = DomainShape::type_i(n, 1);
  const DomainShape target = DomainShape::type_iii(spec.target_g);
  std::vector<Retraction> out;
  const auto blocks = block_layout(spec);
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    const BlockRange b = blocks[i];
    const DomainShape block_shape = DomainShape::type_iii(b.size);
    const std::string tag = to_string(b.factor.kind) + ":" + std::to_string(b.factor.m);
    out.push_back({"p_b block " + std::to_string(i) + " (" + tag + ")", target, block_shape,
                   [b, tol](const DomainPoint& y) {
                     require_interior(y, tol, "p_b input");
                     return principal_block(y, b.offset, b.size);
                   }});
    if (b.factor.kind == FactorKind::ConnectingLambda) {
      const Signature sig = signature(n, b.factor.m);
      out.push_back({"p_2 offdiag (" + tag + ")", block_shape, DomainShape::type_i(sig.r, sig.s),
                     [sig, tol](const DomainPoint& y) { return retract_offdiag(y, sig.r, sig.s, tol); }});
      auto lam = std::make_shared<const LambdaRetraction>(n, b.factor.m, LambdaTarget::TypeI, tol);
      out.push_back({"p_3 lambda (" + tag + ")", lam->target_shape(), ball,
                     [lam](const DomainPoint& y) { return lam->apply(y).as_domain_point(); }});
    }
    if (b.factor.kind == FactorKind::StandardI) {
      out.push_back({"p_2 offdiag (" + tag + ")", block_shape, DomainShape::type_i(1, n),
                     [n, tol](const DomainPoint& y) { return retract_offdiag(y, 1, n, tol); }});
      out.push_back({"p_1 corner_I (" + tag + ")", DomainShape::type_i(1, n), ball,
                     [n, tol](const DomainPoint& y) { return retract_corner_I(y, n, tol).as_domain_point(); }});
    }
    out.push_back({"p_s block " + std::to_string(i) + " (" + tag + ")", block_shape, ball,
                   [full, i](const DomainPoint& y) { return full->retract_block(i, y).as_domain_point(); }});
  }
  out.push_back({"p = p_a o p_b", target, ball,
                 [full](const DomainPoint& y) { return full->apply(y).as_domain_point(); }});
  return out;
}

SandwichRecord isometry_sandwich(const DirectSumRetraction& retraction, const BallPoint& x, const BallPoint& y,
                                 const Tolerance& tol) {
  const EmbeddingSpec& spec = retraction.spec();
  if (x.dim() != spec.source_dim || y.dim() != spec.source_dim)
    throw Error(ErrorKind::ShapeMismatch, "sandwich points must lie in B^source_dim");
  const DomainPoint ix = direct_sum_embed(spec, x, tol);
  const DomainPoint iy = direct_sum_embed(spec, y, tol);
  SandwichRecord rec;
  rec.d_ball = ball_distance(x, y, tol);
  rec.d_target = kobayashi_distance(ix, iy, tol);
  rec.d_back = ball_distance(retraction.apply(ix), retraction.apply(iy), tol);
  const double slack = 10.0 * tol.eq_tol;
  rec.embedding_decreasing = rec.d_target <= rec.d_ball + slack;
  rec.retraction_decreasing = rec.d_back <= rec.d_target + slack;
  rec.gap = std::abs(rec.d_ball - rec.d_target);
  return rec;
}

SandwichRecord isometry_sandwich(const EmbeddingSpec& spec, const BallPoint& x, const BallPoint& y,
                                 const Tolerance& tol) {
  return isometry_sandwich(DirectSumRetraction(spec, tol), x, y, tol);
}

}  // namespace bsde
