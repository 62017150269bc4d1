#include <doctest.h>

#include <cmath>

#include "bsde/domains.hpp"
#include "bsde/sampling.hpp"

using namespace bsde;

namespace {

const cdouble I(0.0, 1.0);

DomainPoint column(std::initializer_list<cdouble> values) {
  ComplexVector v(static_cast<Eigen::Index>(values.size()));
  Eigen::Index k = 0;
  for (auto x : values) v(k++) = x;
  return DomainPoint::ball(v);
}

}  // namespace

TEST_CASE("DomainShape normalizes TypeI to p >= q") {
  const DomainShape s = DomainShape::type_i(2, 5);
  CHECK(s.p == 5);
  CHECK(s.q == 2);
  CHECK(s.transposed);
  CHECK(s.rows() == 2);
  CHECK(s.cols() == 5);
  CHECK(s.ambient_dim() == 10);
  CHECK(DomainShape::type_iii(4).ambient_dim() == 10);
}

TEST_CASE("DomainPoint rejects non-finite and mis-shaped input") {
  ComplexMatrix bad = ComplexMatrix::Zero(2, 2);
  bad(0, 0) = NAN;
  CHECK_THROWS_AS(DomainPoint::type_iii(bad), Error);
  CHECK_THROWS_AS(DomainPoint(DomainShape::type_iii(3), ComplexMatrix::Zero(2, 2)), Error);
  CHECK_THROWS_AS(DomainPoint::type_iii(ComplexMatrix::Zero(2, 3)), Error);
}

TEST_CASE("membership_check examples") {
  const Membership origin = membership_check(DomainPoint::type_iii(ComplexMatrix::Zero(3, 3)));
  CHECK(origin.status == MembershipStatus::Interior);
  CHECK(origin.margin == doctest::Approx(1.0));

  CHECK(membership_check(column({1.0, 0.0})).status == MembershipStatus::Boundary);
  CHECK(membership_check(column({1.5, 0.0})).status == MembershipStatus::Outside);

  ComplexMatrix z = ComplexMatrix::Zero(2, 2);
  z(0, 0) = 0.9;
  z(1, 1) = 0.9;
  const Membership m = membership_check(DomainPoint::type_iii(z));
  CHECK(m.status == MembershipStatus::Interior);
  CHECK(m.margin == doctest::Approx(0.19));
}

TEST_CASE("membership uses the normalized orientation") {
  ComplexMatrix row(1, 3);
  row << 0.3, 0.4, 0.0;
  const Membership m = membership_check(DomainPoint::type_i(row));
  CHECK(m.interior());
  CHECK(m.margin == doctest::Approx(0.75));
}

TEST_CASE("membership flags asymmetric TypeIII input") {
  ComplexMatrix z = ComplexMatrix::Zero(2, 2);
  z(0, 1) = 0.1;
  const Membership m = membership_check(DomainPoint::type_iii(z));
  CHECK(m.status == MembershipStatus::Outside);
  CHECK(m.asymmetry == doctest::Approx(0.1));
}

TEST_CASE("Siegel membership") {
  CHECK(membership_check(DomainPoint::siegel(I * ComplexMatrix::Identity(2, 2))).interior());
  CHECK(membership_check(DomainPoint::siegel(ComplexMatrix::Identity(2, 2))).status == MembershipStatus::Boundary);
  CHECK(membership_check(DomainPoint::siegel(-I * ComplexMatrix::Identity(2, 2))).status ==
        MembershipStatus::Outside);
}

TEST_CASE("cayley: center to origin and explicit diagonal point") {
  const Tolerance tol;
  for (Eigen::Index g : {1, 2, 3}) {
    const DomainPoint w = cayley(DomainPoint::siegel(I * ComplexMatrix::Identity(g, g)), CayleyDirection::ToBounded);
    CHECK(max_abs(w.matrix()) <= tol.eq_tol);
  }
  ComplexMatrix z = ComplexMatrix::Zero(2, 2);
  z(0, 0) = cdouble(1.0, 1.0);
  z(1, 1) = I;
  const DomainPoint w = cayley(DomainPoint::siegel(z), CayleyDirection::ToBounded);
  // Oracle: (1+i - i)/(1+i + i) = 1/(1+2i) = (1 - 2i)/5; the second entry maps to 0.
  CHECK(std::abs(w.matrix()(0, 0) - cdouble(0.2, -0.4)) <= tol.eq_tol);
  CHECK(std::abs(w.matrix()(1, 1)) <= tol.eq_tol);
  const Membership m = membership_check(w);
  CHECK(m.interior());
  CHECK(m.margin == doctest::Approx(0.8));
}

TEST_CASE("cayley round trip and closure") {
  const Tolerance tol;
  CounterRng rng(42, 7);
  for (std::size_t g : {1, 2, 3, 5}) {
    for (int t = 0; t < 50; ++t) {
      const DomainPoint w = DomainPoint::type_iii(sample_type_iii(g, 0.95, rng));
      const DomainPoint s = cayley(w, CayleyDirection::ToSiegel, tol);
      CHECK(membership_check(s, tol).interior());
      const DomainPoint back = cayley(s, CayleyDirection::ToBounded, tol);
      CHECK(membership_check(back, tol).interior());
      CHECK(max_abs(ComplexMatrix(back.matrix() - w.matrix())) <= 10 * tol.eq_tol);
    }
  }
}

TEST_CASE("cayley rejects wrong kind and asymmetric input") {
  CHECK_THROWS_AS(cayley(DomainPoint::type_iii(ComplexMatrix::Zero(2, 2)), CayleyDirection::ToBounded), Error);
  ComplexMatrix z = I * ComplexMatrix::Identity(2, 2);
  z(0, 1) = 0.5;
  try {
    cayley(DomainPoint::siegel(z), CayleyDirection::ToBounded);
    FAIL("expected DomainViolation");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::DomainViolation);
    CHECK(std::string(e.what()).find("symmetry") != std::string::npos);
  }
}

TEST_CASE("transvection sends its base to the origin") {
  const Tolerance tol;
  CounterRng rng(5, 8);
  const DomainPoint zero = DomainPoint::type_i(ComplexMatrix::Zero(3, 2));
  const DomainPoint x = DomainPoint::type_i(sample_type_i(3, 2, 0.9, rng));
  const Transvection identity = transvection_to_origin(zero, tol);
  CHECK(max_abs(ComplexMatrix(identity.apply(x).matrix() - x.matrix())) <= tol.eq_tol);

  for (int t = 0; t < 30; ++t) {
    const DomainPoint a = DomainPoint::type_i(sample_type_i(3, 2, 0.95, rng));
    const Transvection g = transvection_to_origin(a, tol);
    CHECK(max_abs(g.apply(a).matrix()) <= tol.eq_tol);
    const DomainPoint y = DomainPoint::type_i(sample_type_i(3, 2, 0.95, rng));
    CHECK(membership_check(g.apply(y), tol).interior());
  }
}

TEST_CASE("transvection of a symmetric base preserves symmetry") {
  const Tolerance tol;
  CounterRng rng(6, 9);
  for (int t = 0; t < 20; ++t) {
    const DomainPoint a = DomainPoint::type_iii(sample_type_iii(3, 0.9, rng));
    const DomainPoint y = DomainPoint::type_iii(sample_type_iii(3, 0.9, rng));
    const ComplexMatrix out = transvection_to_origin(a, tol).apply(y).matrix();
    CHECK(membership_check(DomainPoint::type_iii(out), tol).interior());
  }
}

TEST_CASE("kobayashi_distance closed-form examples") {
  const Tolerance tol;
  const DomainPoint o = column({0.0});
  CHECK(kobayashi_distance(o, o, tol) == 0.0);
  CHECK(kobayashi_distance(o, column({0.5}), tol) == doctest::Approx(std::atanh(0.5)).epsilon(1e-12));
  CHECK(kobayashi_distance(o, column({0.5}), tol) == doctest::Approx(0.549306).epsilon(1e-6));

  ComplexMatrix d = ComplexMatrix::Zero(2, 2);
  d(0, 0) = 0.5;
  d(1, 1) = 0.3;
  const double dist = kobayashi_distance(DomainPoint::type_i(ComplexMatrix::Zero(2, 2)), DomainPoint::type_i(d), tol);
  // Lower bound: the entry (1,1) projection to the disk is holomorphic.
  CHECK(dist >= std::atanh(0.5) - tol.eq_tol);
  // Upper bound: the disk map zeta -> diag(zeta, 0.6 zeta) hits d at zeta = 0.5.
  CHECK(dist <= std::atanh(0.5) + tol.eq_tol);
}

TEST_CASE("kobayashi_distance properties on seeded samples") {
  const Tolerance tol;
  CounterRng rng(17, 10);
  for (std::size_t rows = 1; rows <= 4; ++rows) {
    for (std::size_t cols = 1; cols <= 4; ++cols) {
      for (int t = 0; t < 10; ++t) {
        const DomainPoint x = DomainPoint::type_i(sample_type_i(rows, cols, 0.9, rng));
        const DomainPoint y = DomainPoint::type_i(sample_type_i(rows, cols, 0.9, rng));
        const DomainPoint w = DomainPoint::type_i(sample_type_i(rows, cols, 0.9, rng));
        const double dxy = kobayashi_distance(x, y, tol);
        CHECK(std::abs(dxy - kobayashi_distance(y, x, tol)) <= 10 * tol.eq_tol);
        CHECK(dxy <= kobayashi_distance(x, w, tol) + kobayashi_distance(w, y, tol) + 10 * tol.eq_tol);
        // Transvection invariance.
        const Transvection g = transvection_to_origin(w, tol);
        CHECK(std::abs(dxy - kobayashi_distance(g.apply(x), g.apply(y), tol)) <= 10 * tol.eq_tol);
        // Deleting a column is holomorphic, hence does not increase distance.
        if (cols > 1) {
          const DomainPoint xs = DomainPoint::type_i(x.matrix().leftCols(cols - 1));
          const DomainPoint ys = DomainPoint::type_i(y.matrix().leftCols(cols - 1));
          CHECK(kobayashi_distance(xs, ys, tol) <= dxy + 10 * tol.eq_tol);
        }
      }
    }
  }
}

TEST_CASE("kobayashi_distance: zero iff equal, errors on mismatch") {
  const Tolerance tol;
  const DomainPoint x = column({0.2, cdouble(0.1, 0.3)});
  CHECK(kobayashi_distance(x, x, tol) <= tol.eq_tol);
  CHECK(kobayashi_distance(x, column({0.2, cdouble(0.1, 0.31)}), tol) > 1e-3);
  CHECK_THROWS_AS(kobayashi_distance(x, column({0.1}), tol), Error);
  CHECK_THROWS_AS(kobayashi_distance(x, column({1.0, 0.0}), tol), Error);
}

TEST_CASE("Siegel points are measured through the Cayley transform") {
  const Tolerance tol;
  CounterRng rng(8, 11);
  const DomainPoint a = DomainPoint::type_iii(sample_type_iii(2, 0.8, rng));
  const DomainPoint b = DomainPoint::type_iii(sample_type_iii(2, 0.8, rng));
  const double bounded = kobayashi_distance(a, b, tol);
  const double siegel = kobayashi_distance(cayley(a, CayleyDirection::ToSiegel, tol),
                                           cayley(b, CayleyDirection::ToSiegel, tol), tol);
  CHECK(std::abs(bounded - siegel) <= 10 * tol.eq_tol);
}

TEST_CASE("kobayashi_infinitesimal_ball") {
  ComplexVector e1 = ComplexVector::Zero(2);
  e1(0) = 1.0;
  const BallPoint origin(ComplexVector::Zero(2));
  CHECK(kobayashi_infinitesimal_ball(origin, e1) == doctest::Approx(1.0));
  CHECK(kobayashi_infinitesimal_ball(origin, ComplexVector(2.0 * e1)) == doctest::Approx(2.0));
  ComplexVector x = ComplexVector::Zero(2);
  x(0) = 0.5;
  CHECK(kobayashi_infinitesimal_ball(BallPoint(x), e1) == doctest::Approx(4.0 / 3.0));

  // Cross-check via the distance: d(x, x + h v) / h -> metric norm.
  const Tolerance tol;
  const double h = 1e-6;
  ComplexVector v(2);
  v << cdouble(0.3, -0.2), cdouble(0.1, 0.5);
  ComplexVector base(2);
  base << cdouble(0.2, 0.1), cdouble(-0.4, 0.2);
  const double fd = ball_distance(BallPoint(base), BallPoint(ComplexVector(base + h * v)), tol) / h;
  CHECK(fd == doctest::Approx(kobayashi_infinitesimal_ball(BallPoint(base), v)).epsilon(1e-5));
}
