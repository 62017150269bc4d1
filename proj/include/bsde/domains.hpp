#pragma once

// Classical domains in Harish-Chandra coordinates:
//   TypeI  I_{p,q}   = { Z in M_{p,q} : I - Z*Z > 0 }
//   TypeIII III_k    = { Z symmetric k x k : I - Z*Z > 0 }
//   SiegelUpper S_k  = { Z symmetric k x k : Im Z > 0 }
// plus the Cayley transform S_k <-> III_k, Moebius transvections of type I
// domains and the (closed form) Kobayashi distance.

#include <cstddef>
#include <optional>
#include <string>

#include "bsde/matrix_kernel.hpp"

namespace bsde {

enum class DomainKind { TypeI, TypeIII, SiegelUpper };

std::string to_string(DomainKind kind);

/// Shape of a domain. TypeI is normalized to p >= q; a point whose stored
/// matrix is q x p (fewer rows than columns) carries transposed = true.
struct DomainShape {
  DomainKind kind = DomainKind::TypeI;
  std::size_t p = 1;
  std::size_t q = 1;
  bool transposed = false;

  static DomainShape type_i(std::size_t rows, std::size_t cols);
  static DomainShape type_iii(std::size_t k);
  static DomainShape siegel(std::size_t k);

  std::size_t rows() const { return kind == DomainKind::TypeI && transposed ? q : p; }
  std::size_t cols() const { return kind == DomainKind::TypeI ? (transposed ? p : q) : p; }
  std::size_t ambient_dim() const { return kind == DomainKind::TypeI ? p * q : p * (p + 1) / 2; }

  bool operator==(const DomainShape&) const = default;
};

/// A point of a classical domain. Construction only checks dimensions and
/// finiteness; membership is a separate query.
class DomainPoint {
 public:
  DomainPoint(DomainShape shape, ComplexMatrix z);

  static DomainPoint type_i(ComplexMatrix z);
  static DomainPoint type_iii(ComplexMatrix z);
  static DomainPoint siegel(ComplexMatrix z);
  /// The ball B^n as I_{n,1}: coordinates become an n x 1 column.
  static DomainPoint ball(const ComplexVector& coords);

  const DomainShape& shape() const { return shape_; }
  DomainKind kind() const { return shape_.kind; }
  /// Coordinates in the orientation the point was created with.
  const ComplexMatrix& matrix() const { return z_; }
  /// Coordinates with rows >= cols (TypeI); identical to matrix() otherwise.
  ComplexMatrix normalized() const;

 private:
  DomainShape shape_;
  ComplexMatrix z_;
};

/// A point of the complex unit ball B^n.
struct BallPoint {
  ComplexVector coords;

  BallPoint() = default;
  explicit BallPoint(ComplexVector c);

  std::size_t dim() const { return static_cast<std::size_t>(coords.size()); }
  double norm() const { return coords.norm(); }
  DomainPoint as_domain_point() const { return DomainPoint::ball(coords); }
};

enum class MembershipStatus { Interior, Boundary, Outside };

std::string to_string(MembershipStatus status);

struct Membership {
  MembershipStatus status = MembershipStatus::Outside;
  /// Smallest eigenvalue of the defining positivity matrix.
  double margin = 0.0;
  /// max |z - z^T| for symmetric kinds, 0 for TypeI.
  double asymmetry = 0.0;

  bool interior() const { return status == MembershipStatus::Interior; }
};

/// Interior iff the defining positivity matrix has smallest eigenvalue above
/// psd_margin (and, for symmetric kinds, z = z^T within eq_tol). Boundary when
/// that eigenvalue lies within eq_tol of zero, Outside otherwise.
Membership membership_check(const DomainPoint& pt, const Tolerance& tol = {});

/// Throws DomainViolation unless pt is Interior; `what` names the point.
void require_interior(const DomainPoint& pt, const Tolerance& tol, const std::string& what);

enum class CayleyDirection { ToBounded, ToSiegel };

/// ToBounded: W = (Z - iI)(Z + iI)^{-1}, S_k -> III_k with iI -> 0.
/// ToSiegel:  Z = i(I - W)^{-1}(I + W), the inverse.
DomainPoint cayley(const DomainPoint& pt, CayleyDirection direction, const Tolerance& tol = {});

/// The automorphism g_a(Z) = (I - aa*)^{-1/2} (Z - a) (I - a*Z)^{-1} (I - a*a)^{1/2}
/// of I_{p,q}, sending a to the origin. Symmetric a preserves III_k.
class Transvection {
 public:
  Transvection(const DomainPoint& a, const Tolerance& tol = {});

  DomainPoint apply(const DomainPoint& z) const;
  const DomainPoint& base() const { return a_; }

 private:
  DomainPoint a_;
  ComplexMatrix left_;   // (I - aa*)^{-1/2}
  ComplexMatrix right_;  // (I - a*a)^{1/2}
  Tolerance tol_;
};

Transvection transvection_to_origin(const DomainPoint& a, const Tolerance& tol = {});

/// Kobayashi distance: max_i artanh s_i over the singular values of g_x(y).
/// TypeIII points are measured inside I_{k,k}; Siegel points are first sent
/// to III_k by the Cayley transform.
double kobayashi_distance(const DomainPoint& x, const DomainPoint& y, const Tolerance& tol = {});

double ball_distance(const BallPoint& x, const BallPoint& y, const Tolerance& tol = {});

/// Infinitesimal Kobayashi (= Poincare-Bergman) norm of v at x in B^n,
/// normalized to |v| at the origin:
///   sqrt(|v|^2 / (1-|x|^2) + |<x,v>|^2 / (1-|x|^2)^2).
double kobayashi_infinitesimal_ball(const BallPoint& x, const ComplexVector& v);

}  // namespace bsde
