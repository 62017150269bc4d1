#include "bsde/exterior.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <sstream>
#include <utility>

namespace bsde {

std::size_t binomial(std::size_t n, std::size_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  std::size_t out = 1;
  for (std::size_t i = 1; i <= k; ++i) out = out * (n - k + i) / i;
  return out;
}

MultiIndex::MultiIndex(std::vector<int> indices, std::size_t p) : indices_(std::move(indices)) {
  for (std::size_t k = 0; k < indices_.size(); ++k) {
    const int v = indices_[k];
    if (v < 1 || v > static_cast<int>(p) + 1 || (k > 0 && indices_[k - 1] >= v)) {
      throw Error(ErrorKind::InvalidMultiIndex,
                  to_string() + " is not strictly increasing within [1, " + std::to_string(p + 1) + "]");
    }
  }
}

bool MultiIndex::contains(int i) const {
  return std::binary_search(indices_.begin(), indices_.end(), i);
}

std::string MultiIndex::to_string() const {
  std::ostringstream os;
  os << "(";
  for (std::size_t k = 0; k < indices_.size(); ++k) os << (k ? "," : "") << indices_[k];
  os << ")";
  return os.str();
}

MultiIndex complement(const MultiIndex& m, std::size_t p) {
  std::vector<int> out;
  for (int i = 1; i <= static_cast<int>(p) + 1; ++i)
    if (!m.contains(i)) out.push_back(i);
  return MultiIndex(std::move(out), p);
}

int perm_sign(std::span<const int> permutation) {
  const std::size_t n = permutation.size();
  std::vector<bool> seen(n + 1, false);
  for (int v : permutation) {
    if (v < 1 || static_cast<std::size_t>(v) > n || seen[static_cast<std::size_t>(v)])
      throw Error(ErrorKind::NotAPermutation, "sequence is not a permutation of 1..n");
    seen[static_cast<std::size_t>(v)] = true;
  }
  std::size_t inversions = 0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (permutation[i] > permutation[j]) ++inversions;
  return inversions % 2 ? -1 : 1;
}

cdouble sigma_sign(const MultiIndex& m, std::size_t p) {
  const MultiIndex mc = complement(m, p);
  std::vector<int> concat = mc.indices();
  concat.insert(concat.end(), m.indices().begin(), m.indices().end());
  const int eps = perm_sign(concat);
  const int eta = m.contains(static_cast<int>(p) + 1) ? -1 : 1;
  return cdouble(0.0, -1.0) * double(eps * eta);
}

cdouble sigma_square_unit(const MultiIndex& m, std::size_t p) {
  return std::conj(sigma_sign(m, p)) * sigma_sign(complement(m, p), p);
}

const MultiIndex& WedgeBasis::at(std::size_t k) const {
  return k < positives.size() ? positives.at(k) : negatives.at(k - positives.size());
}

std::size_t WedgeBasis::positive_index(const MultiIndex& idx) const {
  auto it = std::lower_bound(positives.begin(), positives.end(), idx);
  if (it == positives.end() || *it != idx)
    throw Error(ErrorKind::InvalidMultiIndex, idx.to_string() + " is not a positive basis element");
  return static_cast<std::size_t>(it - positives.begin());
}

std::size_t WedgeBasis::negative_index(const MultiIndex& idx) const {
  auto it = std::lower_bound(negatives.begin(), negatives.end(), idx);
  if (it == negatives.end() || *it != idx)
    throw Error(ErrorKind::InvalidMultiIndex, idx.to_string() + " is not a negative basis element");
  return static_cast<std::size_t>(it - negatives.begin());
}

std::size_t WedgeBasis::index_of(const MultiIndex& idx) const {
  if (idx.degree() != m) throw Error(ErrorKind::InvalidMultiIndex, idx.to_string() + " has the wrong degree");
  if (idx.contains(static_cast<int>(p) + 1)) return positives.size() + negative_index(idx);
  return positive_index(idx);
}

namespace {

void combinations(int lo, int hi, std::size_t k, std::vector<int>& cur, std::vector<std::vector<int>>& out) {
  if (cur.size() == k) {
    out.push_back(cur);
    return;
  }
  for (int v = lo; v <= hi; ++v) {
    cur.push_back(v);
    combinations(v + 1, hi, k, cur, out);
    cur.pop_back();
  }
}

WedgeBasis build_basis(std::size_t p, std::size_t m) {
  WedgeBasis b;
  b.p = p;
  b.m = m;
  std::vector<std::vector<int>> all;
  std::vector<int> cur;
  combinations(1, static_cast<int>(p) + 1, m, cur, all);
  for (auto& c : all) {
    MultiIndex idx(std::move(c), p);
    if (idx.contains(static_cast<int>(p) + 1))
      b.negatives.push_back(std::move(idx));
    else
      b.positives.push_back(std::move(idx));
  }
  return b;
}

}  // namespace

std::shared_ptr<const WedgeBasis> wedge_basis(std::size_t p, std::size_t m) {
  if (m < 1 || m > p + 1) throw Error(ErrorKind::DegreeOutOfRange, "wedge degree must lie in [1, p+1]");
  static std::mutex mutex;
  static std::map<std::pair<std::size_t, std::size_t>, std::shared_ptr<const WedgeBasis>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[{p, m}];
  if (!slot) slot = std::make_shared<const WedgeBasis>(build_basis(p, m));
  return slot;
}

Signature signature(std::size_t p, std::size_t m) {
  if (m < 1 || m > p) {
    std::ostringstream os;
    os << "degree m=" << m << " outside [1, p=" << p << "]";
    throw Error(ErrorKind::DegreeOutOfRange, os.str());
  }
  return {binomial(p, m), binomial(p, m - 1)};
}

bool is_balanced_type_iii(std::size_t p, std::size_t m) {
  return p % 4 == 1 && 2 * m == p + 1;
}

cdouble base_form(const ComplexVector& x, const ComplexVector& y) {
  if (x.size() != y.size() || x.size() < 2) throw Error(ErrorKind::DimensionMismatch, "base_form operands");
  const auto n = x.size();
  return x.head(n - 1).dot(y.head(n - 1)) - std::conj(x(n - 1)) * y(n - 1);
}

ComplexVector wedge_coefficients(const ComplexMatrix& vectors) {
  if (vectors.rows() < 2 || vectors.cols() < 1 || vectors.cols() > vectors.rows())
    throw Error(ErrorKind::DimensionMismatch, "wedge_coefficients needs (p+1) x m with 1 <= m <= p+1");
  const std::size_t p = static_cast<std::size_t>(vectors.rows()) - 1;
  const std::size_t m = static_cast<std::size_t>(vectors.cols());
  const auto basis = wedge_basis(p, m);
  ComplexVector out(static_cast<Eigen::Index>(basis->size()));
  ComplexMatrix minor(vectors.cols(), vectors.cols());
  for (std::size_t k = 0; k < basis->size(); ++k) {
    const auto& rows = basis->at(k).indices();
    for (std::size_t a = 0; a < m; ++a) minor.row(static_cast<Eigen::Index>(a)) = vectors.row(rows[a] - 1);
    out(static_cast<Eigen::Index>(k)) = minor.determinant();
  }
  return out;
}

cdouble induced_form(std::size_t p, std::size_t m, const ComplexVector& x, const ComplexVector& y) {
  const auto basis = wedge_basis(p, m);
  const auto n = static_cast<Eigen::Index>(basis->size());
  if (x.size() != n || y.size() != n)
    throw Error(ErrorKind::DimensionMismatch, "coefficient vectors do not match the wedge basis");
  const auto np = static_cast<Eigen::Index>(basis->positives.size());
  return x.head(np).dot(y.head(np)) - x.tail(n - np).dot(y.tail(n - np));
}

cdouble induced_form_decomposable(const ComplexMatrix& xs, const ComplexMatrix& ys) {
  if (xs.rows() != ys.rows() || xs.cols() != ys.cols())
    throw Error(ErrorKind::DimensionMismatch, "decomposable operands differ in shape");
  ComplexMatrix gram(xs.cols(), ys.cols());
  for (Eigen::Index i = 0; i < xs.cols(); ++i)
    for (Eigen::Index j = 0; j < ys.cols(); ++j) gram(i, j) = base_form(xs.col(i), ys.col(j));
  return gram.determinant();
}

}  // namespace bsde
