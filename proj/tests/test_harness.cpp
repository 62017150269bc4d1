#include <doctest.h>

#include "bsde/harness.hpp"
#include "bsde/json_io.hpp"
#include "bsde/sampling.hpp"

using namespace bsde;

namespace {

FactorSpec connecting(std::size_t m) { return {FactorKind::ConnectingLambda, m}; }
FactorSpec lambda_iii(std::size_t m) { return {FactorKind::LambdaIII, m}; }

HarnessConfig small_config(std::size_t samples = 30) {
  HarnessConfig c;
  c.samples = samples;
  return c;
}

}  // namespace

TEST_CASE("CounterRng is a pure function of seed, stream and counter") {
  CounterRng a(5, 2), b(5, 2), c(5, 3), d(6, 2);
  for (int i = 0; i < 10; ++i) {
    const auto va = a.next_u64();
    CHECK(va == b.next_u64());
    CHECK(va != c.next_u64());
    CHECK(va != d.next_u64());
  }
  CHECK(splitmix64(0) == 0xE220A8397B1DCDAFULL);
  CounterRng u(1, 1);
  for (int i = 0; i < 1000; ++i) {
    const double x = u.uniform();
    CHECK(x > 0.0);
    CHECK(x < 1.0);
  }
}

TEST_CASE("samplers respect their caps") {
  CounterRng rng(2, 2);
  for (int i = 0; i < 200; ++i) {
    CHECK(sample_ball(4, 0.7, rng).norm() <= 0.7);
    CHECK(sample_sphere(3, 0.5, rng).norm() == doctest::Approx(0.5));
    CHECK(spectral_norm(sample_type_i(3, 2, 0.8, rng)) <= 0.8 + 1e-12);
    const ComplexMatrix s = sample_type_iii(3, 0.8, rng);
    CHECK(max_abs(ComplexMatrix(s - s.transpose())) <= 1e-15);
    CHECK(spectral_norm(s) <= 0.8 + 1e-12);
  }
}

TEST_CASE("config validation") {
  HarnessConfig c;
  CHECK_NOTHROW(c.validate());
  c.suites = {"retraction", "nope"};
  try {
    c.validate();
    FAIL("expected Schema");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Schema);
    CHECK(std::string(e.what()).find("nope") != std::string::npos);
  }
  HarnessConfig r;
  r.radius_cap = 1.0;
  CHECK_THROWS_AS(r.validate(), Error);
  HarnessConfig s;
  s.samples = 0;
  CHECK_THROWS_AS(s.validate(), Error);
}

TEST_CASE("every suite passes on representative specs") {
  for (const auto& spec : {EmbeddingSpec{1, 2, {lambda_iii(1), lambda_iii(1)}}, EmbeddingSpec{2, 6, {connecting(1), connecting(2)}},
                           EmbeddingSpec{3, 12, {connecting(2), connecting(1)}},
                           EmbeddingSpec{5, 16, {connecting(1), lambda_iii(3)}}}) {
    const Report report = run_harness(spec, small_config());
    REQUIRE(report.suites.size() == all_suites().size());
    for (std::size_t k = 0; k < report.suites.size(); ++k) {
      const auto& s = report.suites[k];
      CHECK(s.name == all_suites()[k]);
      INFO(spec.to_string(), " ", s.name, " residual ", s.max_residual, " ", s.detail);
      CHECK(s.pass);
      CHECK(s.max_residual <= s.threshold);
    }
    CHECK(report.pass());
  }
}

TEST_CASE("suite subset keeps canonical order") {
  HarnessConfig c = small_config(5);
  c.suites = {"symmetry", "retraction"};
  const Report report = run_harness({2, 3, {connecting(1)}}, c);
  REQUIRE(report.suites.size() == 2);
  CHECK(report.suites[0].name == "retraction");
  CHECK(report.suites[1].name == "symmetry");
}

TEST_CASE("report JSON shape and determinism") {
  const EmbeddingSpec spec{2, 6, {connecting(1), connecting(2)}};
  const auto a = run_harness(spec, small_config(10)).to_json();
  const auto b = run_harness(spec, small_config(10)).to_json();
  CHECK(a.dump() == b.dump());
  CHECK(a["schema"] == kReportSchema);
  CHECK(a["pass"] == true);
  CHECK(a["environment"]["seed"] == 0);
  CHECK(a["environment"]["samples"] == 10);
  CHECK(a["suites"].size() == all_suites().size());
  CHECK(a["informational"][0]["name"] == "sigma_square_units");

  HarnessConfig other = small_config(10);
  other.seed = 1;
  CHECK(run_harness(spec, other).to_json()["suites"][0]["max_residual"] != a["suites"][0]["max_residual"]);
}

TEST_CASE("sigma^2 record at p = 5") {
  const auto rec = sigma_square_record(5);
  REQUIRE(rec["degrees"].size() == 5);
  for (std::size_t m = 1; m <= 5; ++m) {
    const auto& units = rec["degrees"][m - 1]["units"];
    REQUIRE(units.size() == 1);
    CHECK(units[0]["re"].get<double>() == (m % 2 == 1 ? 1.0 : -1.0));
    CHECK(units[0]["count"].get<std::size_t>() == binomial(6, m));
  }
}

TEST_CASE("induced phase action matches lambda_embed on rotated points") {
  const Tolerance tol;
  CounterRng rng(51, 1);
  for (std::size_t p = 1; p <= 4; ++p) {
    for (std::size_t m = 1; m <= p; ++m) {
      const BallPoint z = sample_ball(p, 0.9, rng);
      ComplexVector phases(static_cast<Eigen::Index>(p));
      for (Eigen::Index k = 0; k < phases.size(); ++k) phases(k) = std::polar(1.0, 6.0 * rng.uniform());
      const ComplexMatrix lhs =
          lambda_embed(BallPoint(ComplexVector(phases.cwiseProduct(z.coords))), m, LambdaTarget::TypeI, tol).matrix();
      const ComplexMatrix rhs =
          induced_phase_action(phases, m, LambdaTarget::TypeI, lambda_embed(z, m, LambdaTarget::TypeI, tol).matrix());
      CHECK(max_abs(ComplexMatrix(lhs - rhs)) <= 10 * tol.eq_tol);
    }
  }
}

TEST_CASE("suite threshold follows eq_tol") {
  HarnessConfig c = small_config(10);
  c.tol.eq_tol = 1e-15;
  c.tol.psd_margin = 1e-16;
  c.suites = {"retraction"};
  const Report report = run_harness({4, 10, {connecting(2)}}, c);
  CHECK(report.suites[0].max_residual <= 1e-13);
  CHECK(report.suites[0].threshold == doctest::Approx(1e-14));
}

TEST_CASE("JSON round trips") {
  const EmbeddingSpec spec{3, 12, {connecting(1), connecting(2)}};
  CHECK(spec_from_json(spec_to_json(spec)) == spec);
  nlohmann::json no_m = {{"source_dim", 2}, {"target_g", 3}, {"factors", {{{"kind", "connecting_lambda"}}}}};
  CHECK(spec_from_json(no_m).factors[0].m == 1);
  nlohmann::json bad = {{"source_dim", 2}, {"target_g", 3}, {"factors", {{{"kind", "bogus"}}}}};
  try {
    spec_from_json(bad);
    FAIL("expected Schema");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Schema);
    CHECK(std::string(e.what()).find("factors[0].kind") != std::string::npos);
  }

  CounterRng rng(52, 2);
  const DomainPoint pt = DomainPoint::type_iii(sample_type_iii(3, 0.8, rng));
  CHECK(max_abs(ComplexMatrix(point_from_json(point_to_json(pt)).matrix() - pt.matrix())) == 0.0);
  const BallPoint b = sample_ball(3, 0.8, rng);
  CHECK((ball_from_json(ball_to_json(b)).coords - b.coords).norm() == 0.0);
}
