#include "bsde/domains.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace bsde {

std::string to_string(DomainKind kind) {
  switch (kind) {
    case DomainKind::TypeI: return "I";
    case DomainKind::TypeIII: return "III";
    case DomainKind::SiegelUpper: return "Siegel";
  }
  return "?";
}

std::string to_string(MembershipStatus status) {
  switch (status) {
    case MembershipStatus::Interior: return "Interior";
    case MembershipStatus::Boundary: return "Boundary";
    case MembershipStatus::Outside: return "Outside";
  }
  return "?";
}

DomainShape DomainShape::type_i(std::size_t rows, std::size_t cols) {
  if (rows < 1 || cols < 1) throw Error(ErrorKind::DimensionMismatch, "TypeI needs rows, cols >= 1");
  DomainShape s;
  s.kind = DomainKind::TypeI;
  s.p = std::max(rows, cols);
  s.q = std::min(rows, cols);
  s.transposed = rows < cols;
  return s;
}

DomainShape DomainShape::type_iii(std::size_t k) {
  if (k < 1) throw Error(ErrorKind::DimensionMismatch, "TypeIII needs k >= 1");
  return {DomainKind::TypeIII, k, k, false};
}

DomainShape DomainShape::siegel(std::size_t k) {
  if (k < 1) throw Error(ErrorKind::DimensionMismatch, "SiegelUpper needs k >= 1");
  return {DomainKind::SiegelUpper, k, k, false};
}

DomainPoint::DomainPoint(DomainShape shape, ComplexMatrix z) : shape_(shape), z_(std::move(z)) {
  require_valid(z_, "domain point");
  if (static_cast<std::size_t>(z_.rows()) != shape_.rows() ||
      static_cast<std::size_t>(z_.cols()) != shape_.cols()) {
    std::ostringstream os;
    os << "matrix is " << z_.rows() << "x" << z_.cols() << " but shape " << to_string(shape_.kind) << " expects "
       << shape_.rows() << "x" << shape_.cols();
    throw Error(ErrorKind::ShapeMismatch, os.str());
  }
}

DomainPoint DomainPoint::type_i(ComplexMatrix z) {
  auto shape = DomainShape::type_i(static_cast<std::size_t>(z.rows()), static_cast<std::size_t>(z.cols()));
  return DomainPoint(shape, std::move(z));
}

DomainPoint DomainPoint::type_iii(ComplexMatrix z) {
  if (z.rows() != z.cols()) throw Error(ErrorKind::ShapeMismatch, "TypeIII point must be square");
  auto shape = DomainShape::type_iii(static_cast<std::size_t>(z.rows()));
  return DomainPoint(shape, std::move(z));
}

DomainPoint DomainPoint::siegel(ComplexMatrix z) {
  if (z.rows() != z.cols()) throw Error(ErrorKind::ShapeMismatch, "Siegel point must be square");
  auto shape = DomainShape::siegel(static_cast<std::size_t>(z.rows()));
  return DomainPoint(shape, std::move(z));
}

DomainPoint DomainPoint::ball(const ComplexVector& coords) {
  return type_i(ComplexMatrix(coords));
}

ComplexMatrix DomainPoint::normalized() const {
  if (shape_.kind == DomainKind::TypeI && shape_.transposed) return z_.transpose();
  return z_;
}

BallPoint::BallPoint(ComplexVector c) : coords(std::move(c)) {
  if (coords.size() < 1) throw Error(ErrorKind::DimensionMismatch, "ball point needs dimension >= 1");
  if (!all_finite(coords)) throw Error(ErrorKind::DomainViolation, "ball point has non-finite entries");
}

namespace {

Membership classify(double margin, double asymmetry, const Tolerance& tol) {
  Membership m;
  m.margin = margin;
  m.asymmetry = asymmetry;
  if (asymmetry > tol.eq_tol) {
    m.status = MembershipStatus::Outside;
  } else if (margin > tol.psd_margin) {
    m.status = MembershipStatus::Interior;
  } else if (margin >= -tol.eq_tol) {
    m.status = MembershipStatus::Boundary;
  } else {
    m.status = MembershipStatus::Outside;
  }
  return m;
}

}  // namespace

Membership membership_check(const DomainPoint& pt, const Tolerance& tol) {
  const ComplexMatrix& z = pt.matrix();
  switch (pt.kind()) {
    case DomainKind::TypeI: {
      const ComplexMatrix zn = pt.normalized();
      const auto q = zn.cols();
      const ComplexMatrix gram = ComplexMatrix::Identity(q, q) - zn.adjoint() * zn;
      return classify(hermitian_eigenvalues(gram, tol)(0), 0.0, tol);
    }
    case DomainKind::TypeIII: {
      const double asym = max_abs(ComplexMatrix(z - z.transpose()));
      const auto k = z.rows();
      ComplexMatrix gram = ComplexMatrix::Identity(k, k) - z.adjoint() * z;
      gram = (gram + gram.adjoint()) / 2.0;
      return classify(hermitian_eigenvalues(gram, tol)(0), asym, tol);
    }
    case DomainKind::SiegelUpper: {
      const double asym = max_abs(ComplexMatrix(z - z.transpose()));
      // Im Z as a Hermitian matrix: (Z - Z*)/(2i); equals the real part-wise
      // imaginary part when Z is symmetric.
      ComplexMatrix im = (z - z.adjoint()) / cdouble(0.0, 2.0);
      im = (im + im.adjoint()) / 2.0;
      return classify(hermitian_eigenvalues(im, tol)(0), asym, tol);
    }
  }
  throw Error(ErrorKind::ShapeMismatch, "unknown domain kind");
}

void require_interior(const DomainPoint& pt, const Tolerance& tol, const std::string& what) {
  const Membership m = membership_check(pt, tol);
  if (m.interior()) return;
  std::ostringstream os;
  os << what << " is not an Interior point of " << to_string(pt.kind()) << ": status " << to_string(m.status)
     << ", margin " << m.margin;
  if (m.asymmetry > tol.eq_tol) os << ", symmetry violated (max |z - z^T| = " << m.asymmetry << ")";
  throw Error(ErrorKind::DomainViolation, os.str());
}

namespace {

void require_symmetric(const ComplexMatrix& z, const Tolerance& tol) {
  const double asym = max_abs(ComplexMatrix(z - z.transpose()));
  if (asym > tol.eq_tol) {
    std::ostringstream os;
    os << "symmetry violated: max |z - z^T| = " << asym;
    throw Error(ErrorKind::DomainViolation, os.str());
  }
}

ComplexMatrix checked_inverse(const ComplexMatrix& m, const Tolerance& tol, ErrorKind kind, const char* what) {
  const RealVector sv = singular_values(m);
  const double smin = sv(sv.size() - 1);
  if (!(smin > 0) || sv(0) / smin > 1.0 / tol.psd_margin) {
    std::ostringstream os;
    os << what << " is ill-conditioned (smallest singular value " << smin << ")";
    throw Error(kind, os.str());
  }
  return m.partialPivLu().inverse();
}

}  // namespace

DomainPoint cayley(const DomainPoint& pt, CayleyDirection direction, const Tolerance& tol) {
  const ComplexMatrix& z = pt.matrix();
  const auto k = z.rows();
  const ComplexMatrix id = ComplexMatrix::Identity(k, k);
  const cdouble i(0.0, 1.0);
  if (direction == CayleyDirection::ToBounded) {
    if (pt.kind() != DomainKind::SiegelUpper)
      throw Error(ErrorKind::ShapeMismatch, "cayley to-bounded expects a Siegel point");
    require_symmetric(z, tol);
    require_interior(pt, tol, "Siegel input");
    const ComplexMatrix inv = checked_inverse(z + i * id, tol, ErrorKind::SingularCayley, "Z + iI");
    ComplexMatrix w = (z - i * id) * inv;
    w = (w + w.transpose()) / 2.0;
    return DomainPoint::type_iii(std::move(w));
  }
  if (pt.kind() != DomainKind::TypeIII)
    throw Error(ErrorKind::ShapeMismatch, "cayley to-siegel expects a TypeIII point");
  require_symmetric(z, tol);
  require_interior(pt, tol, "TypeIII input");
  const ComplexMatrix inv = checked_inverse(id - z, tol, ErrorKind::SingularCayley, "I - W");
  ComplexMatrix out = i * inv * (id + z);
  out = (out + out.transpose()) / 2.0;
  return DomainPoint::siegel(std::move(out));
}

namespace {

DomainPoint as_bounded(const DomainPoint& pt, const Tolerance& tol) {
  if (pt.kind() == DomainKind::SiegelUpper) return cayley(pt, CayleyDirection::ToBounded, tol);
  return pt;
}

}  // namespace

Transvection::Transvection(const DomainPoint& a, const Tolerance& tol) : a_(a), tol_(tol) {
  if (a.kind() == DomainKind::SiegelUpper)
    throw Error(ErrorKind::ShapeMismatch, "transvection acts on bounded models only");
  const Membership m = membership_check(a, tol);
  if (!m.interior()) {
    std::ostringstream os;
    os << "transvection base is not Interior (margin " << m.margin << ")";
    throw Error(ErrorKind::IllConditioned, os.str());
  }
  const ComplexMatrix& am = a.matrix();
  const ComplexMatrix left = ComplexMatrix::Identity(am.rows(), am.rows()) - am * am.adjoint();
  const ComplexMatrix right = ComplexMatrix::Identity(am.cols(), am.cols()) - am.adjoint() * am;
  left_ = hermitian_function(left, [](double v) { return 1.0 / std::sqrt(v); }, tol);
  right_ = hermitian_function(right, [](double v) { return std::sqrt(v); }, tol);
}

DomainPoint Transvection::apply(const DomainPoint& z) const {
  if (z.shape() != a_.shape()) throw Error(ErrorKind::ShapeMismatch, "transvection applied to a different shape");
  const ComplexMatrix& am = a_.matrix();
  const ComplexMatrix& zm = z.matrix();
  const ComplexMatrix denom = ComplexMatrix::Identity(am.cols(), am.cols()) - am.adjoint() * zm;
  const ComplexMatrix inv = checked_inverse(denom, tol_, ErrorKind::IllConditioned, "I - a*Z");
  ComplexMatrix out = left_ * (zm - am) * inv * right_;
  if (z.kind() == DomainKind::TypeIII) out = (out + out.transpose()) / 2.0;
  return DomainPoint(z.shape(), std::move(out));
}

Transvection transvection_to_origin(const DomainPoint& a, const Tolerance& tol) {
  return Transvection(a, tol);
}

double kobayashi_distance(const DomainPoint& x, const DomainPoint& y, const Tolerance& tol) {
  if (x.shape() != y.shape()) throw Error(ErrorKind::ShapeMismatch, "distance between points of different shapes");
  const DomainPoint xb = as_bounded(x, tol);
  const DomainPoint yb = as_bounded(y, tol);
  require_interior(xb, tol, "first point");
  require_interior(yb, tol, "second point");
  const DomainPoint moved = Transvection(xb, tol).apply(yb);
  const double s = spectral_norm(moved.matrix());
  if (!(s < 1.0)) throw Error(ErrorKind::IllConditioned, "transvected point left the unit ball");
  return std::atanh(s);
}

double ball_distance(const BallPoint& x, const BallPoint& y, const Tolerance& tol) {
  return kobayashi_distance(x.as_domain_point(), y.as_domain_point(), tol);
}

double kobayashi_infinitesimal_ball(const BallPoint& x, const ComplexVector& v) {
  if (v.size() != x.coords.size()) throw Error(ErrorKind::DimensionMismatch, "tangent vector dimension");
  const double r2 = x.coords.squaredNorm();
  if (!(r2 < 1.0)) throw Error(ErrorKind::DomainViolation, "base point outside the ball");
  const double denom = 1.0 - r2;
  const double inner = std::norm(x.coords.dot(v));
  return std::sqrt(v.squaredNorm() / denom + inner / (denom * denom));
}

}  // namespace bsde
