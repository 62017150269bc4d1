#pragma once

// Counter-based seeded sampling. Every draw is a pure function of
// (seed, stream, counter), so results are reproducible across platforms and
// independent of evaluation order.

#include <cstdint>

#include "bsde/domains.hpp"

namespace bsde {

std::uint64_t splitmix64(std::uint64_t x);

class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t stream) : seed_(seed), stream_(stream) {}

  std::uint64_t next_u64();
  /// Uniform in (0, 1).
  double uniform();
  /// Standard normal (Box-Muller; the second variate is discarded).
  double normal();
  /// Standard complex Gaussian: re, im ~ N(0, 1/2).
  cdouble complex_normal();

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t counter_ = 0;
};

/// Direction uniform on the sphere, radius r with r^{2n} uniform on [0, cap^{2n}]
/// (the uniform distribution on the ball of radius cap).
BallPoint sample_ball(std::size_t n, double radius_cap, CounterRng& rng);

/// A point of the sphere of radius exactly `radius`.
BallPoint sample_sphere(std::size_t n, double radius, CounterRng& rng);

/// Random p x q matrix with spectral norm uniform in [0, radius_cap].
ComplexMatrix sample_type_i(std::size_t rows, std::size_t cols, double radius_cap, CounterRng& rng);

/// Random symmetric k x k matrix with spectral norm uniform in [0, radius_cap].
ComplexMatrix sample_type_iii(std::size_t k, double radius_cap, CounterRng& rng);

/// Random Siegel point: cayley image of sample_type_iii.
DomainPoint sample_siegel(std::size_t k, double radius_cap, CounterRng& rng, const Tolerance& tol = {});

/// Random unitary from the orthonormalized columns of a Gaussian matrix.
ComplexMatrix sample_unitary(std::size_t n, CounterRng& rng, const Tolerance& tol = {});

}  // namespace bsde
