#include "bsde/embeddings.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

#include "bsde/sampling.hpp"

namespace bsde {

std::string to_string(FactorKind kind) {
  switch (kind) {
    case FactorKind::StandardI: return "standard_I";
    case FactorKind::StandardIII: return "standard_III";
    case FactorKind::ConnectingLambda: return "connecting_lambda";
    case FactorKind::LambdaIII: return "lambda_III";
  }
  return "?";
}

std::optional<FactorKind> parse_factor_kind(const std::string& name) {
  for (auto k : {FactorKind::StandardI, FactorKind::StandardIII, FactorKind::ConnectingLambda, FactorKind::LambdaIII})
    if (to_string(k) == name) return k;
  return std::nullopt;
}

void FactorSpec::validate(std::size_t p) const {
  if (p < 1) throw Error(ErrorKind::InvalidSpec, "source dimension must be >= 1");
  switch (kind) {
    case FactorKind::StandardI:
      if (m != 1) throw Error(ErrorKind::InvalidSpec, "standard_I factors have m = 1");
      return;
    case FactorKind::StandardIII:
      if (m != 1) throw Error(ErrorKind::InvalidSpec, "standard_III factors have m = 1");
      if (p != 1) throw Error(ErrorKind::InvalidSpec, "standard_III factors need source_dim = 1 (B^1 = III_1)");
      return;
    case FactorKind::ConnectingLambda:
      signature(p, m);
      return;
    case FactorKind::LambdaIII:
      signature(p, m);
      if (!is_balanced_type_iii(p, m)) {
        std::ostringstream os;
        os << "lambda_III needs source_dim = 1 (mod 4) and m = (source_dim+1)/2, got source_dim=" << p << " m=" << m;
        throw Error(ErrorKind::InvalidSpec, os.str());
      }
      return;
  }
}

std::size_t FactorSpec::cost(std::size_t p) const {
  validate(p);
  switch (kind) {
    case FactorKind::StandardI: return p + 1;
    case FactorKind::StandardIII: return 1;
    case FactorKind::ConnectingLambda: {
      const auto sig = signature(p, m);
      return sig.r + sig.s;
    }
    case FactorKind::LambdaIII: return signature(p, m).r;
  }
  return 0;
}

std::size_t EmbeddingSpec::total_cost() const {
  std::size_t total = 0;
  for (const auto& f : factors) total += f.cost(source_dim);
  return total;
}

void EmbeddingSpec::validate() const {
  if (source_dim < 1) throw Error(ErrorKind::InvalidSpec, "source_dim must be >= 1");
  if (target_g < 1) throw Error(ErrorKind::InvalidSpec, "target_g must be >= 1");
  if (factors.empty()) throw Error(ErrorKind::InvalidSpec, "spec needs at least one factor");
  const std::size_t cost = total_cost();
  if (cost > target_g) {
    std::ostringstream os;
    os << "factor cost " << cost << " exceeds target_g " << target_g;
    throw Error(ErrorKind::BudgetExceeded, os.str());
  }
}

EmbeddingSpec EmbeddingSpec::canonical() const {
  EmbeddingSpec out = *this;
  std::sort(out.factors.begin(), out.factors.end());
  return out;
}

std::string EmbeddingSpec::to_string() const {
  std::ostringstream os;
  os << "N=" << source_dim << " g=" << target_g << " [";
  for (std::size_t i = 0; i < factors.size(); ++i)
    os << (i ? ", " : "") << bsde::to_string(factors[i].kind) << ":" << factors[i].m;
  os << "]";
  return os.str();
}

std::vector<BlockRange> block_layout(const EmbeddingSpec& spec) {
  std::vector<BlockRange> out;
  std::size_t offset = 0;
  for (const auto& f : spec.factors) {
    const std::size_t size = f.cost(spec.source_dim);
    out.push_back({offset, size, f});
    offset += size;
  }
  return out;
}

namespace {

void require_interior_ball(const BallPoint& z, const Tolerance& tol) {
  require_interior(z.as_domain_point(), tol, "source ball point");
}

}  // namespace

DomainPoint standard_embed_I(const BallPoint& z, std::size_t p, std::size_t q) {
  if (z.dim() > q || p < 1) {
    std::ostringstream os;
    os << "cannot place a point of B^" << z.dim() << " in the first row of a " << p << "x" << q << " matrix";
    throw Error(ErrorKind::DimensionMismatch, os.str());
  }
  ComplexMatrix out = ComplexMatrix::Zero(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(q));
  out.row(0).head(z.coords.size()) = z.coords.transpose();
  return DomainPoint::type_i(std::move(out));
}

DomainPoint corner_embed_III(const DomainPoint& z, std::size_t l) {
  if (z.kind() != DomainKind::TypeIII) throw Error(ErrorKind::ShapeMismatch, "corner_embed_III expects TypeIII");
  const auto k = z.matrix().rows();
  if (static_cast<std::size_t>(k) >= l) throw Error(ErrorKind::DimensionMismatch, "corner_embed_III needs k < l");
  ComplexMatrix out = ComplexMatrix::Zero(static_cast<Eigen::Index>(l), static_cast<Eigen::Index>(l));
  out.topLeftCorner(k, k) = z.matrix();
  return DomainPoint::type_iii(std::move(out));
}

DomainPoint connecting_embed(const DomainPoint& z) {
  if (z.kind() != DomainKind::TypeI) throw Error(ErrorKind::ShapeMismatch, "connecting_embed expects TypeI");
  const ComplexMatrix& zm = z.matrix();
  const auto p = zm.rows();
  const auto q = zm.cols();
  ComplexMatrix out = ComplexMatrix::Zero(p + q, p + q);
  out.topRightCorner(q, p) = zm.transpose();
  out.bottomLeftCorner(p, q) = zm;
  return DomainPoint::type_iii(std::move(out));
}

DomainPoint lambda_embed(const BallPoint& z, std::size_t m, LambdaTarget target, const Tolerance& tol) {
  const std::size_t p = z.dim();
  const Signature sig = signature(p, m);
  if (target == LambdaTarget::TypeIII && !is_balanced_type_iii(p, m))
    throw Error(ErrorKind::InvalidSpec, "TypeIII output needs p = 1 (mod 4) and m = (p+1)/2");
  require_interior_ball(z, tol);

  const auto dim = static_cast<Eigen::Index>(p + 1);
  // V_- = span(v_minus); V_+ = span(f_i), f_i = e_i + conj(z_i) e_{p+1}, which
  // are F-orthogonal to v_minus.
  ComplexVector v_minus(dim);
  v_minus.head(static_cast<Eigen::Index>(p)) = z.coords;
  v_minus(dim - 1) = 1.0;
  ComplexMatrix plus_basis = ComplexMatrix::Zero(dim, static_cast<Eigen::Index>(p));
  for (Eigen::Index i = 0; i < static_cast<Eigen::Index>(p); ++i) {
    plus_basis(i, i) = 1.0;
    plus_basis(dim - 1, i) = std::conj(z.coords(i));
  }

  // One column per (m-1)-subset J of {1..p}: f_J ^ v_minus. Enumerated via the
  // negatives of the wedge basis, which are exactly J + {p+1} in lex order.
  const auto basis = wedge_basis(p, m);
  const auto r = static_cast<Eigen::Index>(sig.r);
  const auto s = static_cast<Eigen::Index>(sig.s);
  ComplexMatrix coeffs(r + s, s);
  ComplexMatrix factors(dim, static_cast<Eigen::Index>(m));
  for (Eigen::Index j = 0; j < s; ++j) {
    const auto& neg = basis->negatives[static_cast<std::size_t>(j)].indices();
    for (std::size_t a = 0; a + 1 < m; ++a) factors.col(static_cast<Eigen::Index>(a)) = plus_basis.col(neg[a] - 1);
    factors.col(static_cast<Eigen::Index>(m) - 1) = v_minus;
    coeffs.col(j) = wedge_coefficients(factors);
  }
  const ComplexMatrix positive_block = coeffs.topRows(r);
  const ComplexMatrix negative_block = coeffs.bottomRows(s);
  ComplexMatrix image;
  try {
    image = solve_right(positive_block, negative_block, tol);
  } catch (const Error& e) {
    throw Error(ErrorKind::NormalizationSingular, e.what());
  }

  if (target == LambdaTarget::TypeI) return DomainPoint::type_i(std::move(image));

  // Row i of the TypeIII coordinates pairs with sigma(e_{N_i}) = a(N_i) e_{N_i^c},
  // N_i the i-th negative index.
  ComplexMatrix sym(s, s);
  for (Eigen::Index i = 0; i < s; ++i) {
    const MultiIndex& neg = basis->negatives[static_cast<std::size_t>(i)];
    const auto row = static_cast<Eigen::Index>(basis->positive_index(complement(neg, p)));
    sym.row(i) = image.row(row) / sigma_sign(neg, p);
  }
  return DomainPoint(DomainShape::type_iii(static_cast<std::size_t>(s)), std::move(sym));
}

ComplexMatrix factor_block(const FactorSpec& factor, const BallPoint& z, const Tolerance& tol) {
  const std::size_t p = z.dim();
  factor.validate(p);
  switch (factor.kind) {
    case FactorKind::StandardI:
      return connecting_embed(standard_embed_I(z, 1, p)).matrix();
    case FactorKind::StandardIII:
      require_interior_ball(z, tol);
      return ComplexMatrix::Constant(1, 1, z.coords(0));
    case FactorKind::ConnectingLambda:
      return connecting_embed(lambda_embed(z, factor.m, LambdaTarget::TypeI, tol)).matrix();
    case FactorKind::LambdaIII:
      return lambda_embed(z, factor.m, LambdaTarget::TypeIII, tol).matrix();
  }
  throw Error(ErrorKind::InvalidSpec, "unknown factor kind");
}

DomainPoint direct_sum_embed(const EmbeddingSpec& spec, const BallPoint& z, const Tolerance& tol) {
  spec.validate();
  if (z.dim() != spec.source_dim) throw Error(ErrorKind::DimensionMismatch, "point dimension != source_dim");
  require_interior_ball(z, tol);
  const auto g = static_cast<Eigen::Index>(spec.target_g);
  ComplexMatrix out = ComplexMatrix::Zero(g, g);
  for (const auto& block : block_layout(spec)) {
    const auto off = static_cast<Eigen::Index>(block.offset);
    const auto size = static_cast<Eigen::Index>(block.size);
    out.block(off, off, size, size) = factor_block(block.factor, z, tol);
  }
  return DomainPoint::type_iii(std::move(out));
}

ComplexVector flatten_symmetric(const ComplexMatrix& m) {
  if (m.rows() != m.cols()) throw Error(ErrorKind::DimensionMismatch, "flatten_symmetric needs a square matrix");
  const auto g = m.rows();
  ComplexVector out(g * (g + 1) / 2);
  Eigen::Index k = 0;
  for (Eigen::Index i = 0; i < g; ++i)
    for (Eigen::Index j = i; j < g; ++j) out(k++) = m(i, j);
  return out;
}

ComplexMatrix unflatten_symmetric(const ComplexVector& v, std::size_t g) {
  const auto n = static_cast<Eigen::Index>(g);
  if (v.size() != n * (n + 1) / 2) throw Error(ErrorKind::DimensionMismatch, "flattened length != g(g+1)/2");
  ComplexMatrix out(n, n);
  Eigen::Index k = 0;
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i; j < n; ++j) {
      out(i, j) = v(k);
      out(j, i) = v(k);
      ++k;
    }
  return out;
}

DomainPoint BuiltEmbedding::apply(const BallPoint& z) const {
  if (z.dim() != spec.source_dim) throw Error(ErrorKind::DimensionMismatch, "point dimension != source_dim");
  return DomainPoint::type_iii(unflatten_symmetric(linear_map * z.coords, spec.target_g));
}

std::size_t BuiltEmbedding::rank(const Tolerance& tol) const {
  const RealVector sv = singular_values(linear_map);
  std::size_t r = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > tol.eq_tol * std::max(1.0, sv(0))) ++r;
  return r;
}

BuiltEmbedding linearize(const EmbeddingSpec& spec, const Tolerance& tol, std::uint64_t seed) {
  spec.validate();
  BuiltEmbedding built;
  built.spec = spec;
  built.blocks = block_layout(spec);
  const auto n = static_cast<Eigen::Index>(spec.source_dim);
  const auto g = static_cast<Eigen::Index>(spec.target_g);
  built.linear_map.resize(g * (g + 1) / 2, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    ComplexVector probe = ComplexVector::Zero(n);
    probe(k) = kLinearizationProbe;
    built.linear_map.col(k) =
        flatten_symmetric(direct_sum_embed(spec, BallPoint(probe), tol).matrix()) / kLinearizationProbe;
  }

  CounterRng rng(seed, 0x11ea7u);
  double worst = 0.0;
  for (std::size_t t = 0; t < kLinearityChecks; ++t) {
    const BallPoint z = sample_ball(spec.source_dim, 0.95, rng);
    const ComplexVector direct = flatten_symmetric(direct_sum_embed(spec, z, tol).matrix());
    const double residual = max_abs(ComplexVector(direct - built.linear_map * z.coords));
    worst = std::max(worst, residual);
    if (residual > tol.eq_tol) {
      std::ostringstream os;
      os << "spec " << spec.to_string() << ": |embed(z) - L z| = " << residual << " at z = ";
      for (Eigen::Index i = 0; i < z.coords.size(); ++i) os << (i ? ", " : "") << z.coords(i);
      throw Error(ErrorKind::NonlinearityDetected, os.str());
    }
  }
  built.linearity_residual = worst;
  return built;
}

std::vector<FactorSpec> catalog_factors(std::size_t source_dim) {
  std::vector<FactorSpec> out;
  for (std::size_t m = 1; m <= source_dim; ++m) out.push_back({FactorKind::ConnectingLambda, m});
  for (std::size_t m = 1; m <= source_dim; ++m)
    if (is_balanced_type_iii(source_dim, m)) out.push_back({FactorKind::LambdaIII, m});
  std::sort(out.begin(), out.end());
  return out;
}

SpecEnumeration enumerate_specs(std::size_t source_dim, std::size_t g_max) {
  SpecEnumeration result;
  if (source_dim < 1) throw Error(ErrorKind::InvalidSpec, "source_dim must be >= 1");
  const auto catalog = catalog_factors(source_dim);
  result.minimal_g = catalog.front().cost(source_dim);
  for (const auto& f : catalog) result.minimal_g = std::min(result.minimal_g, f.cost(source_dim));

  // Multisets as non-decreasing sequences over the sorted catalog.
  std::vector<FactorSpec> current;
  std::function<void(std::size_t, std::size_t)> extend = [&](std::size_t first, std::size_t budget) {
    if (!current.empty()) result.specs.push_back({source_dim, g_max, current});
    for (std::size_t i = first; i < catalog.size(); ++i) {
      const std::size_t c = catalog[i].cost(source_dim);
      if (c > budget) continue;
      current.push_back(catalog[i]);
      extend(i, budget - c);
      current.pop_back();
    }
  };
  extend(0, g_max);
  std::sort(result.specs.begin(), result.specs.end(),
            [](const EmbeddingSpec& a, const EmbeddingSpec& b) { return a.factors < b.factors; });
  return result;
}

}  // namespace bsde
