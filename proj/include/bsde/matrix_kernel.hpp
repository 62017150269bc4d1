#pragma once

// Dense complex linear algebra shared by every module. Everything here is a
// thin, checked layer over Eigen's deterministic decompositions.

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <sstream>

#include "bsde/errors.hpp"

namespace bsde {

template <typename Real>
using CMatrix = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Real>
using CVector = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, 1>;
template <typename Real>
using RVector = Eigen::Matrix<Real, Eigen::Dynamic, 1>;

using ComplexMatrix = CMatrix<double>;
using ComplexVector = CVector<double>;
using RealVector = RVector<double>;
using cdouble = std::complex<double>;

/// Numerical tolerance regime. Threaded explicitly through every check.
struct Tolerance {
  double eq_tol = 1e-9;      // residual bound for equality assertions
  double psd_margin = 1e-10;  // minimum eigenvalue for strict positivity

  void validate() const {
    if (!(0.0 < psd_margin && psd_margin < eq_tol && eq_tol < 1.0)) {
      std::ostringstream os;
      os << "tolerance requires 0 < psd_margin < eq_tol < 1, got psd_margin=" << psd_margin
         << " eq_tol=" << eq_tol;
      throw Error(ErrorKind::InvalidSpec, os.str());
    }
  }
};

template <typename Derived>
typename Eigen::NumTraits<typename Derived::Scalar>::Real max_abs(const Eigen::MatrixBase<Derived>& m) {
  if (m.size() == 0) return 0;
  return m.cwiseAbs().maxCoeff();
}

template <typename Derived>
bool all_finite(const Eigen::MatrixBase<Derived>& m) {
  for (Eigen::Index j = 0; j < m.cols(); ++j)
    for (Eigen::Index i = 0; i < m.rows(); ++i)
      if (!std::isfinite(std::real(m(i, j))) || !std::isfinite(std::imag(m(i, j)))) return false;
  return true;
}

/// Enforces the ComplexMatrix invariants: nonempty, all entries finite.
template <typename Real>
void require_valid(const CMatrix<Real>& m, const char* what = "matrix") {
  if (m.rows() < 1 || m.cols() < 1)
    throw Error(ErrorKind::DimensionMismatch, std::string(what) + " must have at least one row and column");
  if (!all_finite(m)) throw Error(ErrorKind::DomainViolation, std::string(what) + " has non-finite entries");
}

template <typename Real>
Real hermitian_defect(const CMatrix<Real>& m) {
  return max_abs(m - m.adjoint());
}

template <typename Real>
struct HermitianEigen {
  RVector<Real> values;  // ascending
  CMatrix<Real> vectors;
};

/// Eigen-decomposition of a Hermitian matrix. The input is symmetrized before
/// solving so that representation noise up to eq_tol is absorbed.
template <typename Real>
HermitianEigen<Real> hermitian_eigen(const CMatrix<Real>& m, const Tolerance& tol = {}) {
  if (m.rows() != m.cols())
    throw Error(ErrorKind::DimensionMismatch, "hermitian_eigen needs a square matrix");
  const Real defect = hermitian_defect(m);
  if (defect > tol.eq_tol) {
    std::ostringstream os;
    os << "max |m - m*| = " << defect << " exceeds eq_tol " << tol.eq_tol;
    throw Error(ErrorKind::NotHermitian, os.str());
  }
  const CMatrix<Real> sym = (m + m.adjoint()) / Real(2);
  Eigen::SelfAdjointEigenSolver<CMatrix<Real>> solver(sym);
  if (solver.info() != Eigen::Success)
    throw Error(ErrorKind::NoConvergence, "self-adjoint eigensolver did not converge");
  return {solver.eigenvalues(), solver.eigenvectors()};
}

template <typename Real>
RVector<Real> hermitian_eigenvalues(const CMatrix<Real>& m, const Tolerance& tol = {}) {
  return hermitian_eigen(m, tol).values;
}

/// Singular values in descending order; count = min(rows, cols).
template <typename Real>
RVector<Real> singular_values(const CMatrix<Real>& m) {
  Eigen::JacobiSVD<CMatrix<Real>> svd(m);
  if (svd.info() != Eigen::Success) throw Error(ErrorKind::NoConvergence, "SVD did not converge");
  return svd.singularValues();
}

template <typename Real>
Real spectral_norm(const CMatrix<Real>& m) {
  return singular_values(m)(0);
}

/// Returns X with X * b = a.
template <typename Real>
CMatrix<Real> solve_right(const CMatrix<Real>& a, const CMatrix<Real>& b, const Tolerance& tol = {}) {
  if (b.rows() != b.cols()) throw Error(ErrorKind::DimensionMismatch, "solve_right needs square b");
  if (a.cols() != b.rows()) throw Error(ErrorKind::DimensionMismatch, "solve_right: a.cols != b.rows");
  const RVector<Real> sv = singular_values(b);
  const Real smax = sv(0);
  const Real smin = sv(sv.size() - 1);
  if (!(smin > 0) || smax / smin > Real(1) / tol.psd_margin) {
    std::ostringstream os;
    os << "condition number " << (smin > 0 ? smax / smin : INFINITY) << " exceeds 1/psd_margin";
    throw Error(ErrorKind::SingularSystem, os.str());
  }
  // X b = a  <=>  b^T X^T = a^T
  const CMatrix<Real> bt = b.transpose();
  return bt.partialPivLu().solve(CMatrix<Real>(a.transpose())).transpose();
}

/// Orthonormal basis of the column span of m, column j having the direction
/// of the Gram-Schmidt residual of column j (so a single column is just
/// normalized).
template <typename Real>
CMatrix<Real> orthonormal_column_basis(const CMatrix<Real>& m, const Tolerance& tol = {}) {
  if (m.cols() > m.rows()) throw Error(ErrorKind::RankDeficient, "more columns than rows");
  const RVector<Real> sv = singular_values(m);
  if (!(sv(sv.size() - 1) > tol.psd_margin)) {
    std::ostringstream os;
    os << "smallest singular value " << sv(sv.size() - 1) << " <= psd_margin";
    throw Error(ErrorKind::RankDeficient, os.str());
  }
  Eigen::HouseholderQR<CMatrix<Real>> qr(m);
  CMatrix<Real> q = qr.householderQ() * CMatrix<Real>::Identity(m.rows(), m.cols());
  const CMatrix<Real>& r = qr.matrixQR();
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    const std::complex<Real> d = r(j, j);
    const Real mag = std::abs(d);
    if (mag > 0) q.col(j) *= d / mag;
  }
  return q;
}

/// f(m) for Hermitian m via its spectral decomposition; f acts on eigenvalues.
template <typename Real, typename F>
CMatrix<Real> hermitian_function(const CMatrix<Real>& m, F&& f, const Tolerance& tol = {}) {
  const auto eig = hermitian_eigen(m, tol);
  RVector<Real> mapped(eig.values.size());
  for (Eigen::Index i = 0; i < mapped.size(); ++i) mapped(i) = f(eig.values(i));
  return eig.vectors * mapped.template cast<std::complex<Real>>().asDiagonal() * eig.vectors.adjoint();
}

}  // namespace bsde
