#include <cmath>

#include "doctest.h"
#include "records/error.hpp"
#include "records/threshold_scheme.hpp"

using namespace records;

namespace {

ThresholdSchemeSpec vee_spec(double level, VeeLaw law = VeeLaw::Constant, double offset = 0.0) {
  ThresholdSchemeSpec s{Distribution::exponential(), AlphaSequence::constant(), ThresholdSequence::flat(level)};
  s.below = BelowKind::Vee;
  s.vee.law = law;
  s.vee.offset = offset;
  return s;
}

ThresholdSchemeSpec perturbed_spec(double decay) {
  ThresholdSchemeSpec s{Distribution::exponential(), AlphaSequence::constant(), ThresholdSequence::flat(1.0)};
  s.below = BelowKind::Perturbed;
  s.perturbed.delta = Distribution::exponential(2.0);
  s.perturbed.eps0 = 0.5;
  s.perturbed.decay = decay;
  return s;
}

}  // namespace

TEST_CASE("no threshold means the two schemes coincide") {
  ThresholdSchemeSpec s{Distribution::gumbel(), AlphaSequence::polynomial(0.5), ThresholdSequence::neg_infinity()};
  const CoupledSampler sampler(s, 300, 11);
  for (std::uint64_t r = 0; r < 20; ++r) {
    const auto t = sampler.sample(r);
    REQUIRE(t.agreement_start.has_value());
    CHECK(*t.agreement_start == 1);
    CHECK(t.x.X == t.pure.X);
  }
}

TEST_CASE("vee at the threshold: pathwise identity above l and agreement after first exceedance") {
  const auto spec = vee_spec(1.5);
  const auto rep = coupling_time_distribution(spec, 200, 5, 2000, {1, 2, 5, 10}, 1);
  REQUIRE(rep.identity_violations.has_value());
  CHECK(*rep.identity_violations == 0);
  CHECK(*rep.agreement_violations == 0);
  for (const auto& c : rep.checkpoints) {
    REQUIRE(c.bound.has_value());
    CHECK(c.fraction <= *c.bound + 4.0 * c.std_error + 1e-12);
  }
}

TEST_CASE("P(M_m <= l) matches h^{s_m}") {
  const auto spec = vee_spec(1.0, VeeLaw::Iid, 0.25);
  const CoupledSampler sampler(spec, 3, 19);
  const int R = 20000;
  int below = 0;
  for (int r = 0; r < R; ++r) below += sampler.sample(static_cast<std::uint64_t>(r)).x.M[2] <= 1.0;
  const double expect = std::pow(1.0 - std::exp(-1.0), 3.0);
  const double se = std::sqrt(expect * (1 - expect) / R);
  CHECK(std::abs(below / double(R) - expect) < 4.0 * se);
}

TEST_CASE("tail_exact draws the conditional below-threshold law") {
  ThresholdSchemeSpec s{Distribution::exponential(), AlphaSequence::constant(), ThresholdSequence::flat(1.0)};
  s.below = BelowKind::TailExact;
  s.below_law = Distribution::exponential(2.0);
  const CoupledSampler sampler(s, 1, 23);
  const int R = 40000;
  int hits = 0;
  for (int r = 0; r < R; ++r) {
    const auto t = sampler.sample(static_cast<std::uint64_t>(r));
    if (t.x.X[0] > 1.0) CHECK(t.x.X[0] == t.pure.X[0]);
    hits += t.x.X[0] <= 0.5;
  }
  const double expect = (1 - std::exp(-1.0)) * (1 - std::exp(-1.0)) / (1 - std::exp(-2.0));
  const double se = std::sqrt(expect * (1 - expect) / R);
  CHECK(std::abs(hits / double(R) - expect) < 4.0 * se);

  ThresholdSchemeSpec bad{Distribution::exponential(), AlphaSequence::constant(), ThresholdSequence::flat(1.0)};
  bad.below = BelowKind::TailExact;
  bad.below_law = Distribution::pareto(2.0);  // no mass below 1
  CHECK_THROWS_AS(CoupledSampler(bad, 5, 1), Error);
}

TEST_CASE("coupling summaries do not depend on the thread count") {
  const auto spec = vee_spec(2.0, VeeLaw::Markov, 0.5);
  CHECK_FALSE(spec.independent());
  const auto a = coupling_time_distribution(spec, 100, 3, 1500, {10, 50}, 1).to_json();
  const auto b = coupling_time_distribution(spec, 100, 3, 1500, {10, 50}, 3).to_json();
  CHECK(a.dump() == b.dump());
}

TEST_CASE("perturbed scheme: mismatch probability and C2 clauses") {
  const auto spec = perturbed_spec(2.0);
  // eps_n (1 - min(Delta(l), F(l))) with Delta = Exp(2), F = Exp(1), l = 1
  const double lo = 1.0 - std::exp(-1.0);
  CHECK(coupling_mismatch(spec, 3) == doctest::Approx(0.5 / 9.0 * (1.0 - lo)).epsilon(1e-12));
  const auto r = certify_C2(spec, 500);
  CHECK(r.passed());
  CHECK(std::isfinite(r.delta_partial));
  CHECK(r.delta_tail == doctest::Approx(2.0 * 0.5 / 500.0));

  const auto rep = coupling_time_distribution(spec, 2000, 9, 2000, {2000}, 1);
  CHECK(rep.unagreed_fraction < 0.01);
  CHECK_FALSE(rep.identity_violations.has_value());

  const auto slow = assess_C2(perturbed_spec(0.5), 500);
  CHECK_FALSE(slow.clause_iii);
  CHECK(slow.violated == "(iii)");
  CHECK_THROWS_AS(certify_C2(perturbed_spec(0.5), 500), Error);
}

TEST_CASE("C2 fails when the thresholds outrun the maxima or C1 fails") {
  ThresholdSchemeSpec fast{Distribution::exponential(), AlphaSequence::constant(), ThresholdSequence::log_scaled(2.0, 0.0)};
  fast.below = BelowKind::Vee;
  const auto r = assess_C2(fast, 1000);
  CHECK_FALSE(r.clause_iv);
  CHECK(r.violated == "(iv)");

  auto finite = vee_spec(1.0);
  finite.alpha = AlphaSequence::geometric(0.5);
  const auto f = assess_C2(finite, 100);
  CHECK_FALSE(f.c1);
  CHECK(f.violated == "C1");
  try {
    certify_C2(finite, 100);
    FAIL("expected a certification failure");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::CertificationFailed);
  }
}

TEST_CASE("perturbed coupling stays under the full mismatch bound") {
  const auto rep = coupling_time_distribution(perturbed_spec(2.0), 400, 23, 4000, {10, 50, 200}, 1);
  for (const auto& c : rep.checkpoints) {
    REQUIRE(c.bound.has_value());
    REQUIRE(c.tail_guide.has_value());
    CHECK(*c.tail_guide <= *c.bound);
    CHECK(c.fraction <= *c.bound + 4.0 * c.std_error);
  }
  CHECK(rep.checkpoints.back().fraction <= rep.checkpoints.front().fraction);
}
