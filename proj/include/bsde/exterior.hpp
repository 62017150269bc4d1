#pragma once

// Combinatorics of the exterior power Lambda^m(C^{p+1}) carrying the form
// F = diag(1, ..., 1, -1): ordered wedge bases, permutation signs, the
// semi-linear conjugation sigma(e_M) = a(M) e_{M^c} and the induced form
// F^(m)(x_1 ^ ... ^ x_m, y_1 ^ ... ^ y_m) = det F(x_i, y_j).
//
// Indices are 1-based throughout, matching the usual e_1, ..., e_{p+1} labels.

#include <compare>
#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "bsde/matrix_kernel.hpp"

namespace bsde {

std::size_t binomial(std::size_t n, std::size_t k);

/// Strictly increasing tuple of indices in [1, p+1], i.e. e_{i_1 ... i_m}.
class MultiIndex {
 public:
  MultiIndex() = default;
  /// Throws InvalidMultiIndex unless strictly increasing and within [1, p+1].
  MultiIndex(std::vector<int> indices, std::size_t p);

  const std::vector<int>& indices() const { return indices_; }
  std::size_t degree() const { return indices_.size(); }
  bool contains(int i) const;
  std::string to_string() const;

  auto operator<=>(const MultiIndex&) const = default;

 private:
  std::vector<int> indices_;
};

/// Complement of M in {1, ..., p+1}, increasing.
MultiIndex complement(const MultiIndex& m, std::size_t p);

/// Sign of a permutation of {1, ..., n} (parity of the inversion count).
int perm_sign(std::span<const int> permutation);

/// a(M) = -i * eps(M^c, M) * eta(M), with eps the sign of the concatenation
/// (M^c, M) and eta(M) = -1 when p+1 is in M, +1 otherwise.
cdouble sigma_sign(const MultiIndex& m, std::size_t p);

/// The unit by which sigma^2 (sigma semi-linear) acts on e_M:
/// conj(a(M)) * a(M^c).
cdouble sigma_square_unit(const MultiIndex& m, std::size_t p);

/// Basis of Lambda^m(C^{p+1}) split by the sign of F^(m):
/// positives (p+1 not in M) first, then negatives, each lexicographic.
struct WedgeBasis {
  std::size_t p = 0;
  std::size_t m = 0;
  std::vector<MultiIndex> positives;
  std::vector<MultiIndex> negatives;

  std::size_t size() const { return positives.size() + negatives.size(); }
  /// Basis element at the global position (positives, then negatives).
  const MultiIndex& at(std::size_t k) const;
  /// Global position of M; throws InvalidMultiIndex if M has the wrong degree.
  std::size_t index_of(const MultiIndex& m) const;
  /// Position of M within positives or negatives.
  std::size_t positive_index(const MultiIndex& m) const;
  std::size_t negative_index(const MultiIndex& m) const;
  /// F^(m)(e_M, e_M) for the element at global position k.
  int diagonal_sign(std::size_t k) const { return k < positives.size() ? 1 : -1; }
};

/// Memoized construction; safe for concurrent readers.
std::shared_ptr<const WedgeBasis> wedge_basis(std::size_t p, std::size_t m);

struct Signature {
  std::size_t r = 0;  // positive
  std::size_t s = 0;  // negative
  bool operator==(const Signature&) const = default;
};

/// (C(p, m), C(p, m-1)); DegreeOutOfRange unless 1 <= m <= p.
Signature signature(std::size_t p, std::size_t m);

/// r = s and the wedge pairing is alternating: p = 1 (mod 4), m = (p+1)/2.
bool is_balanced_type_iii(std::size_t p, std::size_t m);

/// F(x, y) = sum_{i <= p} conj(x_i) y_i - conj(x_{p+1}) y_{p+1} on C^{p+1}.
cdouble base_form(const ComplexVector& x, const ComplexVector& y);

/// Coefficients of x_1 ^ ... ^ x_m over wedge_basis(p, m), where the x_k are
/// the columns of `vectors` ((p+1) x m). Entry for e_M is the minor on rows M.
ComplexVector wedge_coefficients(const ComplexMatrix& vectors);

/// F^(m)(x, y) for coefficient vectors over wedge_basis(p, m), extended
/// sesquilinearly from the orthogonal basis.
cdouble induced_form(std::size_t p, std::size_t m, const ComplexVector& x, const ComplexVector& y);

/// det(F(x_i, y_j)) for decomposable arguments given as (p+1) x m columns.
cdouble induced_form_decomposable(const ComplexMatrix& xs, const ComplexMatrix& ys);

}  // namespace bsde
