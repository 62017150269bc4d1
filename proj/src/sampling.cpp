#include "bsde/sampling.hpp"

#include <cmath>
#include <numbers>

namespace bsde {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

std::uint64_t CounterRng::next_u64() {
  const std::uint64_t key = splitmix64(seed_ ^ splitmix64(stream_ + 0x632BE59BD9B4E019ULL));
  return splitmix64(key + counter_++ * 0xD1B54A32D192ED03ULL);
}

double CounterRng::uniform() {
  // 53 random bits, shifted off zero.
  return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

double CounterRng::normal() {
  const double u1 = uniform();
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

cdouble CounterRng::complex_normal() {
  const double re = normal();
  const double im = normal();
  return {re * std::numbers::sqrt2 / 2.0, im * std::numbers::sqrt2 / 2.0};
}

namespace {

ComplexVector gaussian_direction(std::size_t n, CounterRng& rng) {
  ComplexVector v(static_cast<Eigen::Index>(n));
  do {
    for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = rng.complex_normal();
  } while (v.norm() < 1e-12);
  return v / v.norm();
}

}  // namespace

BallPoint sample_sphere(std::size_t n, double radius, CounterRng& rng) {
  return BallPoint(gaussian_direction(n, rng) * radius);
}

BallPoint sample_ball(std::size_t n, double radius_cap, CounterRng& rng) {
  const ComplexVector dir = gaussian_direction(n, rng);
  const double r = radius_cap * std::pow(rng.uniform(), 1.0 / (2.0 * static_cast<double>(n)));
  return BallPoint(dir * r);
}

ComplexMatrix sample_type_i(std::size_t rows, std::size_t cols, double radius_cap, CounterRng& rng) {
  ComplexMatrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (Eigen::Index j = 0; j < m.cols(); ++j)
    for (Eigen::Index i = 0; i < m.rows(); ++i) m(i, j) = rng.complex_normal();
  const double norm = spectral_norm(m);
  const double target = radius_cap * rng.uniform();
  return norm > 0 ? ComplexMatrix(m * (target / norm)) : m;
}

ComplexMatrix sample_type_iii(std::size_t k, double radius_cap, CounterRng& rng) {
  ComplexMatrix m(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k));
  for (Eigen::Index j = 0; j < m.cols(); ++j)
    for (Eigen::Index i = 0; i < m.rows(); ++i) m(i, j) = rng.complex_normal();
  m = (m + m.transpose()).eval() / 2.0;
  const double norm = spectral_norm(m);
  const double target = radius_cap * rng.uniform();
  return norm > 0 ? ComplexMatrix(m * (target / norm)) : m;
}

DomainPoint sample_siegel(std::size_t k, double radius_cap, CounterRng& rng, const Tolerance& tol) {
  return cayley(DomainPoint::type_iii(sample_type_iii(k, radius_cap, rng)), CayleyDirection::ToSiegel, tol);
}

ComplexMatrix sample_unitary(std::size_t n, CounterRng& rng, const Tolerance& tol) {
  ComplexMatrix g(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (Eigen::Index j = 0; j < g.cols(); ++j)
    for (Eigen::Index i = 0; i < g.rows(); ++i) g(i, j) = rng.complex_normal();
  return orthonormal_column_basis(g, tol);
}

}  // namespace bsde
