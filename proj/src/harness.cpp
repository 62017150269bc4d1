#include "bsde/harness.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <numbers>
#include <set>
#include <sstream>

#include "bsde/json_io.hpp"
#include "bsde/retractions.hpp"
#include "bsde/sampling.hpp"

namespace bsde {

using nlohmann::json;

const std::vector<std::string>& all_suites() {
  static const std::vector<std::string> names = {"retraction", "membership", "isometry",   "signature",
                                                 "symmetry",   "linearity",  "equivariance"};
  return names;
}

void HarnessConfig::validate() const {
  if (samples < 1) throw Error(ErrorKind::Schema, "samples must be >= 1");
  if (!(radius_cap > 0.0 && radius_cap < 1.0)) throw Error(ErrorKind::Schema, "radius_cap must lie in (0, 1)");
  tol.validate();
  for (const auto& s : suites)
    if (std::find(all_suites().begin(), all_suites().end(), s) == all_suites().end())
      throw Error(ErrorKind::Schema, "unknown suite \"" + s + "\"");
}

bool Report::pass() const {
  return std::all_of(suites.begin(), suites.end(), [](const SuiteResult& s) { return s.pass; });
}

json Report::to_json() const {
  json env{{"seed", config.seed},
           {"samples", config.samples},
           {"radius_cap", config.radius_cap},
           {"eq_tol", config.tol.eq_tol},
           {"psd_margin", config.tol.psd_margin},
           {"suites", config.suites},
           {"spec", spec_to_json(spec)}};
  json suite_list = json::array();
  for (const auto& s : suites) {
    suite_list.push_back({{"name", s.name},
                          {"pass", s.pass},
                          {"samples", s.samples},
                          {"max_residual", s.max_residual},
                          {"threshold", s.threshold},
                          {"worst_index", s.worst_index},
                          {"worst_input", s.worst_input},
                          {"detail", s.detail}});
  }
  return json{{"schema", kReportSchema},
              {"pass", pass()},
              {"environment", env},
              {"suites", suite_list},
              {"informational", informational}};
}

namespace {

/// Keeps the largest residual; ties go to the smaller sample index.
struct WorstCase {
  double residual = 0.0;
  std::size_t index = 0;
  json input;
  bool seen = false;

  void offer(double r, std::size_t i, const std::function<json()>& make_input) {
    if (!seen || r > residual) {
      residual = r;
      index = i;
      input = make_input();
      seen = true;
    }
  }
};

std::uint64_t suite_stream(const std::string& name) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : name) h = (h ^ c) * 1099511628211ULL;
  return h;
}

json pair_input(const BallPoint& x, const BallPoint& y) {
  return json{{"x", ball_to_json(x)}, {"y", ball_to_json(y)}};
}

json point_input(const BallPoint& z) {
  return json{{"point", ball_to_json(z)}};
}

SuiteResult finish(std::string name, std::size_t samples, double threshold, const WorstCase& worst,
                   std::string detail, bool extra_ok = true) {
  SuiteResult r;
  r.name = std::move(name);
  r.samples = samples;
  r.threshold = threshold;
  r.max_residual = worst.seen ? worst.residual : 0.0;
  r.worst_index = worst.index;
  r.worst_input = worst.seen ? worst.input : json(nullptr);
  r.pass = extra_ok && r.max_residual <= threshold;
  r.detail = std::move(detail);
  return r;
}

ComplexMatrix scale_to_norm(ComplexMatrix m, double norm) {
  const double current = spectral_norm(m);
  return current > 0 ? ComplexMatrix(m * (norm / current)) : m;
}

/// Interior point of the given shape; every other sample sits at radius_cap.
DomainPoint sample_shape(const DomainShape& shape, double cap, std::size_t i, CounterRng& rng) {
  if (shape.kind == DomainKind::TypeIII) {
    ComplexMatrix m = sample_type_iii(shape.p, cap, rng);
    if (i % 2 == 0) m = scale_to_norm(m, cap);
    return DomainPoint::type_iii(std::move(m));
  }
  ComplexMatrix m = sample_type_i(shape.rows(), shape.cols(), cap, rng);
  if (i % 2 == 0) m = scale_to_norm(m, cap);
  return DomainPoint::type_i(std::move(m));
}

SuiteResult suite_retraction(const EmbeddingSpec& spec, const HarnessConfig& cfg) {
  const Tolerance& tol = cfg.tol;
  CounterRng rng(cfg.seed, suite_stream("retraction"));
  const DirectSumRetraction retract(spec, tol);
  WorstCase worst;
  for (std::size_t i = 0; i < cfg.samples; ++i) {
    const BallPoint z = sample_ball(spec.source_dim, cfg.radius_cap, rng);
    const DomainPoint image = direct_sum_embed(spec, z, tol);
    const BallPoint back = retract.apply(image);
    const double left_inverse = max_abs(ComplexVector(back.coords - z.coords));
    const double idempotent = max_abs(ComplexMatrix(direct_sum_embed(spec, back, tol).matrix() - image.matrix()));
    worst.offer(std::max(left_inverse, idempotent), i, [&] { return point_input(z); });
  }
  // Both evaluators of each exterior-power retraction agree on the e_1 axis.
  double axis_gap = 0.0;
  std::size_t axis_checks = 0;
  for (const auto& f : spec.factors) {
    if (f.kind != FactorKind::ConnectingLambda && f.kind != FactorKind::LambdaIII) continue;
    const LambdaTarget target = f.kind == FactorKind::LambdaIII ? LambdaTarget::TypeIII : LambdaTarget::TypeI;
    const LambdaRetraction lam(spec.source_dim, f.m, target, tol);
    for (std::size_t i = 0; i < cfg.samples; ++i) {
      const BallPoint t = sample_ball(1, cfg.radius_cap, rng);
      ComplexVector axis = ComplexVector::Zero(static_cast<Eigen::Index>(spec.source_dim));
      axis(0) = t.coords(0);
      const DomainPoint y = lambda_embed(BallPoint(axis), f.m, target, tol);
      const double gap = max_abs(ComplexVector(lam.apply(y).coords - lam.apply_axis_average(y).coords));
      axis_gap = std::max(axis_gap, gap);
      ++axis_checks;
      worst.offer(gap, cfg.samples + i, [&] { return point_input(BallPoint(axis)); });
    }
  }
  std::ostringstream detail;
  detail << "max |p(i(z)) - z| and |i(p(i(z))) - i(z)| over samples; axis evaluator gap " << axis_gap << " over "
         << axis_checks << " axis points";
  return finish("retraction", cfg.samples + axis_checks, 10.0 * tol.eq_tol, worst, detail.str());
}

SuiteResult suite_membership(const EmbeddingSpec& spec, const HarnessConfig& cfg) {
  const Tolerance& tol = cfg.tol;
  CounterRng rng(cfg.seed, suite_stream("membership"));
  const DirectSumRetraction retract(spec, tol);
  std::size_t violations = 0;
  std::size_t checks = 0;
  double min_margin = INFINITY;
  WorstCase worst;
  auto record = [&](const Membership& m, std::size_t i, const std::function<json()>& input) {
    ++checks;
    min_margin = std::min(min_margin, m.margin);
    const bool bad = !m.interior();
    if (bad) ++violations;
    worst.offer(bad ? 1.0 : 0.0, i, input);
  };
  for (std::size_t i = 0; i < cfg.samples; ++i) {
    const BallPoint z = sample_ball(spec.source_dim, cfg.radius_cap, rng);
    const DomainPoint image = direct_sum_embed(spec, z, tol);
    record(membership_check(image, tol), i, [&] { return point_input(z); });
    record(membership_check(retract.apply(image).as_domain_point(), tol), i, [&] { return point_input(z); });
  }
  // Every retraction stage maps interior points (up to radius_cap) inside.
  const auto stages = retraction_stages(spec, tol);
  for (const auto& stage : stages) {
    for (std::size_t i = 0; i < cfg.samples; ++i) {
      const DomainPoint y = sample_shape(stage.source, cfg.radius_cap, i, rng);
      Membership m;
      try {
        m = membership_check(stage.evaluate(y), tol);
      } catch (const Error&) {
        m.status = MembershipStatus::Outside;
      }
      record(m, i, [&] { return json{{"stage", stage.provenance}, {"point", point_to_json(y)}}; });
    }
  }
  std::ostringstream detail;
  detail << violations << " non-Interior results in " << checks << " checks (" << stages.size()
         << " retraction stages); min margin " << min_margin;
  return finish("membership", checks, 0.0, worst, detail.str());
}

SuiteResult suite_isometry(const EmbeddingSpec& spec, const HarnessConfig& cfg) {
  const Tolerance& tol = cfg.tol;
  const double slack = 10.0 * tol.eq_tol;
  CounterRng rng(cfg.seed, suite_stream("isometry"));
  const DirectSumRetraction retract(spec, tol);
  WorstCase worst;
  double max_gap = 0.0;
  for (std::size_t i = 0; i < cfg.samples; ++i) {
    const BallPoint x = sample_ball(spec.source_dim, cfg.radius_cap, rng);
    const BallPoint y = sample_ball(spec.source_dim, cfg.radius_cap, rng);
    const SandwichRecord rec = isometry_sandwich(retract, x, y, tol);
    max_gap = std::max(max_gap, rec.gap);
    const double excess = std::max({rec.gap, rec.d_target - rec.d_ball, rec.d_back - rec.d_target});
    worst.offer(excess, i, [&] { return pair_input(x, y); });
  }
  // The composite retraction does not increase distances between arbitrary
  // interior points of III_g.
  double max_increase = 0.0;
  const DomainShape target = DomainShape::type_iii(spec.target_g);
  for (std::size_t i = 0; i < cfg.samples; ++i) {
    const DomainPoint a = sample_shape(target, cfg.radius_cap, i, rng);
    const DomainPoint b = sample_shape(target, cfg.radius_cap, i + 1, rng);
    const double before = kobayashi_distance(a, b, tol);
    const double after = ball_distance(retract.apply(a), retract.apply(b), tol);
    const double increase = std::max(0.0, after - before);
    max_increase = std::max(max_increase, increase);
    worst.offer(increase, cfg.samples + i,
                [&] { return json{{"a", point_to_json(a)}, {"b", point_to_json(b)}}; });
  }
  std::ostringstream detail;
  detail << "max |d_ball - d_target| = " << max_gap << "; max distance increase under p = " << max_increase
         << " (slack " << slack << ")";
  return finish("isometry", 2 * cfg.samples, slack, worst, detail.str());
}

SuiteResult suite_signature(const EmbeddingSpec& spec, const HarnessConfig& cfg) {
  (void)cfg;
  const std::size_t p_max = std::max<std::size_t>(6, spec.source_dim);
  std::size_t mismatches = 0;
  std::size_t cases = 0;
  WorstCase worst;
  std::vector<std::string> balanced;
  for (std::size_t p = 1; p <= p_max; ++p) {
    for (std::size_t m = 1; m <= p; ++m) {
      const auto basis = wedge_basis(p, m);
      const auto n = static_cast<Eigen::Index>(basis->size());
      std::size_t plus = 0, minus = 0;
      for (Eigen::Index k = 0; k < n; ++k) {
        const ComplexVector e = ComplexVector::Unit(n, k);
        const double d = induced_form(p, m, e, e).real();
        if (d > 0.5) ++plus;
        if (d < -0.5) ++minus;
      }
      const Signature sig = signature(p, m);
      const bool ok = plus == sig.r && minus == sig.s && plus == basis->positives.size() &&
                      minus == basis->negatives.size() && plus + minus == binomial(p + 1, m);
      if (!ok) ++mismatches;
      if (is_balanced_type_iii(p, m)) balanced.push_back("(" + std::to_string(p) + "," + std::to_string(m) + ")");
      worst.offer(ok ? 0.0 : 1.0, cases++, [&] { return json{{"p", p}, {"m", m}}; });
    }
  }
  std::ostringstream detail;
  detail << mismatches << " mismatches over " << cases << " (p, m) with p <= " << p_max << "; balanced type-III cases:";
  for (const auto& b : balanced) detail << " " << b;
  return finish("signature", cases, 0.0, worst, detail.str());
}

SuiteResult suite_symmetry(const EmbeddingSpec& spec, const HarnessConfig& cfg) {
  const Tolerance& tol = cfg.tol;
  CounterRng rng(cfg.seed, suite_stream("symmetry"));
  WorstCase worst;
  double lambda_iii = 0.0;
  bool has_lambda_iii = false;
  for (std::size_t i = 0; i < cfg.samples; ++i) {
    const BallPoint z = sample_ball(spec.source_dim, cfg.radius_cap, rng);
    const ComplexMatrix y = direct_sum_embed(spec, z, tol).matrix();
    double asym = max_abs(ComplexMatrix(y - y.transpose()));
    for (const auto& f : spec.factors) {
      if (f.kind != FactorKind::LambdaIII) continue;
      has_lambda_iii = true;
      const ComplexMatrix raw = lambda_embed(z, f.m, LambdaTarget::TypeIII, tol).matrix();
      const double a = max_abs(ComplexMatrix(raw - raw.transpose()));
      lambda_iii = std::max(lambda_iii, a);
      asym = std::max(asym, a);
    }
    worst.offer(asym, i, [&] { return point_input(z); });
  }
  std::ostringstream detail;
  detail << "max |Y - Y^T| over embedded images";
  if (has_lambda_iii) detail << "; raw lambda_III blocks " << lambda_iii;
  return finish("symmetry", cfg.samples, 10.0 * tol.eq_tol, worst, detail.str());
}

SuiteResult suite_linearity(const EmbeddingSpec& spec, const HarnessConfig& cfg) {
  const Tolerance& tol = cfg.tol;
  WorstCase worst;
  BuiltEmbedding built;
  try {
    built = linearize(spec, tol, cfg.seed);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::NonlinearityDetected) throw;
    SuiteResult r;
    r.name = "linearity";
    r.threshold = tol.eq_tol;
    r.max_residual = INFINITY;
    r.worst_input = nullptr;
    r.detail = e.what();
    return r;
  }
  CounterRng rng(cfg.seed, suite_stream("linearity"));
  for (std::size_t i = 0; i < cfg.samples; ++i) {
    const BallPoint z = sample_ball(spec.source_dim, cfg.radius_cap, rng);
    const double r = max_abs(ComplexMatrix(direct_sum_embed(spec, z, tol).matrix() - built.apply(z).matrix()));
    worst.offer(r, i, [&] { return point_input(z); });
  }
  const std::size_t rank = built.rank(tol);
  std::ostringstream detail;
  detail << "rank(L) = " << rank << " (source_dim " << spec.source_dim << "); linearize residual "
         << built.linearity_residual;
  return finish("linearity", cfg.samples, tol.eq_tol, worst, detail.str(), rank == spec.source_dim);
}

SuiteResult suite_equivariance(const EmbeddingSpec& spec, const HarnessConfig& cfg) {
  const Tolerance& tol = cfg.tol;
  CounterRng rng(cfg.seed, suite_stream("equivariance"));
  WorstCase worst;
  std::size_t checks = 0;
  std::size_t index = 0;
  std::set<FactorSpec> seen;
  for (const auto& f : spec.factors) {
    if (f.kind != FactorKind::ConnectingLambda && f.kind != FactorKind::LambdaIII) continue;
    if (!seen.insert(f).second) continue;
    const LambdaTarget target = f.kind == FactorKind::LambdaIII ? LambdaTarget::TypeIII : LambdaTarget::TypeI;
    for (std::size_t i = 0; i < cfg.samples; ++i, ++index) {
      const BallPoint z = sample_ball(spec.source_dim, cfg.radius_cap, rng);
      ComplexVector phases(static_cast<Eigen::Index>(spec.source_dim));
      for (Eigen::Index k = 0; k < phases.size(); ++k) phases(k) = std::polar(1.0, 2.0 * std::numbers::pi * rng.uniform());
      const BallPoint rotated(ComplexVector(phases.cwiseProduct(z.coords)));
      const ComplexMatrix lhs = lambda_embed(rotated, f.m, target, tol).matrix();
      const ComplexMatrix rhs =
          induced_phase_action(phases, f.m, target, lambda_embed(z, f.m, target, tol).matrix());
      ++checks;
      worst.offer(max_abs(ComplexMatrix(lhs - rhs)), index, [&] {
        json phase_re = json::array(), phase_im = json::array();
        for (Eigen::Index k = 0; k < phases.size(); ++k) {
          phase_re.push_back(phases(k).real());
          phase_im.push_back(phases(k).imag());
        }
        return json{{"point", ball_to_json(z)}, {"m", f.m}, {"phase_re", phase_re}, {"phase_im", phase_im}};
      });
    }
  }
  std::string detail = checks ? "lambda_embed(phase z) vs induced monomial phase action"
                              : "no exterior-power factors in spec";
  return finish("equivariance", checks, 10.0 * tol.eq_tol, worst, detail);
}

}  // namespace

ComplexMatrix induced_phase_action(const ComplexVector& phases, std::size_t m, LambdaTarget target,
                                   const ComplexMatrix& image) {
  const std::size_t p = static_cast<std::size_t>(phases.size());
  const auto basis = wedge_basis(p, m);
  auto phase_of = [&](const MultiIndex& idx) {
    cdouble out = 1.0;
    for (int i : idx.indices())
      if (i <= static_cast<int>(p)) out *= phases(i - 1);
    return out;
  };
  ComplexMatrix out = image;
  for (Eigen::Index i = 0; i < image.rows(); ++i) {
    const MultiIndex& row = target == LambdaTarget::TypeI
                                ? basis->positives.at(static_cast<std::size_t>(i))
                                : basis->positives.at(basis->positive_index(
                                      complement(basis->negatives.at(static_cast<std::size_t>(i)), p)));
    const cdouble row_phase = phase_of(row);
    for (Eigen::Index j = 0; j < image.cols(); ++j)
      out(i, j) *= row_phase * std::conj(phase_of(basis->negatives.at(static_cast<std::size_t>(j))));
  }
  return out;
}

json sigma_square_record(std::size_t p) {
  json per_degree = json::array();
  for (std::size_t m = 1; m <= p; ++m) {
    const auto basis = wedge_basis(p, m);
    std::map<std::pair<double, double>, std::size_t> counts;
    for (std::size_t k = 0; k < basis->size(); ++k) {
      const cdouble u = sigma_square_unit(basis->at(k), p);
      counts[{u.real(), u.imag()}]++;
    }
    json units = json::array();
    for (const auto& [u, c] : counts) units.push_back({{"re", u.first}, {"im", u.second}, {"count", c}});
    per_degree.push_back({{"m", m}, {"units", units}});
  }
  return json{{"name", "sigma_square_units"},
              {"p", p},
              {"note", "conj(a(M)) a(M^c) per basis element with a(M) = -i eps(M^c, M) eta(M)"},
              {"degrees", per_degree}};
}

SuiteResult run_suite(const std::string& name, const EmbeddingSpec& spec, const HarnessConfig& config) {
  if (name == "retraction") return suite_retraction(spec, config);
  if (name == "membership") return suite_membership(spec, config);
  if (name == "isometry") return suite_isometry(spec, config);
  if (name == "signature") return suite_signature(spec, config);
  if (name == "symmetry") return suite_symmetry(spec, config);
  if (name == "linearity") return suite_linearity(spec, config);
  if (name == "equivariance") return suite_equivariance(spec, config);
  throw Error(ErrorKind::Schema, "unknown suite \"" + name + "\"");
}

Report run_harness(const EmbeddingSpec& spec, const HarnessConfig& config) {
  config.validate();
  spec.validate();
  Report report;
  report.spec = spec;
  report.config = config;
  for (const auto& name : all_suites())
    if (std::find(config.suites.begin(), config.suites.end(), name) != config.suites.end())
      report.suites.push_back(run_suite(name, spec, config));
  report.informational.push_back(sigma_square_record(spec.source_dim));
  return report;
}

}  // namespace bsde
