#include <cmath>
#include <vector>

#include "doctest.h"
#include "records/criteria.hpp"
#include "records/error.hpp"

using namespace records;
using doctest::Approx;

namespace {

GrowthForm lnln_over_t() {
  GrowthForm f;
  f.pow_t = -1.0;
  f.pow_loglog = 1.0;
  return f;
}

}  // namespace

TEST_CASE("J for a constant tail") {
  const auto F = Distribution::exponential();
  const double c = 0.3;
  const auto b = BoundaryFunction::analytic([c](double) { return -std::log(c); }, "flat");
  const auto est = J_integral(F, b, 50.0, {0.0, GrowthForm::constant(c)});
  CHECK(est.partial == Approx(-std::expm1(-c * 50.0)).epsilon(1e-12));
  CHECK(est.partial + est.tail >= 1.0 - 1e-12);
  CHECK(est.tail_certified);
}

TEST_CASE("J against the closed form for g = t^{-1/2}") {
  const auto F = Distribution::exponential();
  const auto b = BoundaryFunction::log_scaled(0.5, 0.0);
  for (double T : {10.0, 400.0, 1e4}) {
    const auto est = J_integral(F, b, T);
    // integral of e^{-t} on [0,1] plus integral of t^{-1/2} e^{-sqrt t} on [1,T]
    const double oracle = -std::expm1(-1.0) + 2.0 * (std::exp(-1.0) - std::exp(-std::sqrt(T)));
    CHECK(est.partial == Approx(oracle).epsilon(1e-10));
    CHECK(std::abs(est.partial - oracle) < 1e-8);
  }
  CHECK_THROWS_AS(J_integral(F, b, 0.5), Error);
}

TEST_CASE("J on a step boundary reproduces K") {
  const auto F = Distribution::exponential();
  struct Case {
    AlphaSequence alpha;
    ThresholdSequence levels;
  };
  const std::vector<Case> cases{
      {AlphaSequence::constant(), ThresholdSequence::log_scaled(0.5, 0.0)},
      {AlphaSequence::polynomial(1.0), ThresholdSequence::log_scaled(1.5, 1.0)},
      {AlphaSequence::constant(2.0), ThresholdSequence::flat(1.0)},
  };
  for (const auto& c : cases) {
    const std::size_t N = 2000;
    const auto b = step_boundary(c.levels, c.alpha, N + 1);
    std::vector<double> q(N);
    for (std::size_t n = 1; n <= N; ++n) q[n - 1] = c.levels.tail(F, n);
    const auto K = K_sum(c.alpha, q);
    const auto s = c.alpha.partial_sums(N + 1);
    const auto J = J_integral(F, b, s[N + 1], {s[1]});
    CHECK(std::abs(J.partial - K.partial) <= 1e-10);
  }
}

TEST_CASE("K sums") {
  const double c = 0.2;
  std::vector<double> q(300, c);
  const auto k = K_sum(AlphaSequence::constant(), q, {GrowthForm::constant(c)});
  CHECK(k.partial == Approx(std::exp(-c) * -std::expm1(-300 * c)).epsilon(1e-13));
  std::vector<double> zero(100, 0.0);
  CHECK(K_sum(AlphaSequence::constant(), zero).partial == 0.0);

  const std::size_t N = 100000;
  std::vector<double> slow(N);
  for (std::size_t n = 1; n <= N; ++n) {
    const double t = std::max<double>(n, 5.0);
    slow[n - 1] = std::log(std::log(t)) / t;
  }
  const auto d = K_sum(AlphaSequence::constant(), slow, {lnln_over_t()});
  CHECK(d.behaviour == SeriesBehaviour::Diverges);
  CHECK_FALSE(d.tail_certified);
  // comparison series sum lnln n / (n ln n) keeps growing over every decade
  double prev = 0.0;
  for (const auto& [n, v] : d.trace) {
    CHECK(v >= prev);
    prev = v;
  }
}

TEST_CASE("Klass sums") {
  const std::size_t N = 10000;
  std::vector<double> g(N);
  for (std::size_t n = 1; n <= N; ++n) g[n - 1] = 1.0 / std::sqrt(static_cast<double>(n));
  const auto est = klass_sum(g, {GrowthForm::power(1.0, -0.5)});
  long double limit = 0.0L;
  for (std::size_t n = 1; n <= 2000000; ++n) {
    const long double x = std::sqrt(static_cast<long double>(n));
    limit += std::exp(-x) / x;
  }
  CHECK(std::abs(est.partial - static_cast<double>(limit)) < 1e-6);
  CHECK(est.tail_certified);
  CHECK(est.tail < 1e-6);
  CHECK(klass_sum(std::vector<double>(50, 0.0)).partial == 0.0);

  std::vector<double> slow(N);
  for (std::size_t n = 1; n <= N; ++n) {
    const double t = std::max<double>(n, 5.0);
    slow[n - 1] = std::log(std::log(t)) / t;
  }
  CHECK(klass_sum(slow, {lnln_over_t()}).behaviour == SeriesBehaviour::Diverges);
}

TEST_CASE("case ladder") {
  const auto F = Distribution::exponential();
  const auto one = AlphaSequence::constant();

  const auto flat = classify_growth(F, one, ThresholdSequence::flat(2.0), 1000);
  CHECK(flat.verdict == Verdict::One);
  CHECK(flat.fired_case == FiredCase::II);

  const auto log_n = classify_growth(F, one, ThresholdSequence::log_scaled(1.0, 0.0), 1000);
  CHECK(log_n.verdict == Verdict::Zero);
  CHECK(log_n.fired_case == FiredCase::III);

  const auto half = classify_growth(F, one, ThresholdSequence::log_scaled(0.5, 0.0), 10000);
  CHECK(half.verdict == Verdict::One);
  CHECK(half.fired_case == FiredCase::IVConverge);
  CHECK(half.evidence["series"]["tail_certified"] == true);

  const auto slow =
      classify_growth(F, one, ThresholdSequence::tail_quantile(F, lnln_over_t(), 5), 100000);
  CHECK(slow.verdict != Verdict::One);
  CHECK(slow.fired_case == FiredCase::IVDiverge);
  CHECK(slow.evidence["divergence_evidence"]["still_growing"] == true);

  const auto none = classify_growth(F, one, ThresholdSequence::neg_infinity(), 10);
  CHECK(none.verdict == Verdict::One);

  const auto no_c1 = classify_growth(F, AlphaSequence::polynomial(-2.0), ThresholdSequence::flat(1.0), 100);
  CHECK(no_c1.verdict == Verdict::Undecided);

  const auto table = classify_growth(F, one, ThresholdSequence::table({1.0, 2.0, 3.0}), 3);
  CHECK(table.verdict == Verdict::Undecided);
}

TEST_CASE("boundary ladder, envelope and Klass agree") {
  const auto F = Distribution::exponential();
  const auto b = BoundaryFunction::log_scaled(0.5, 0.0);
  const auto v = classify_growth(F, b, 1e4);
  CHECK(v.verdict == Verdict::One);
  const auto env = monotone_envelope(b, 1.0, 1e4);
  CHECK(classify_growth(F, env, 1e4).verdict == v.verdict);
  for (double a : {0.3, 0.5, 0.9, 1.0, 2.0}) {
    const auto levels = ThresholdSequence::log_scaled(a, 0.0);
    CHECK(classify_klass(F, levels, 5000).verdict ==
          classify_growth(F, AlphaSequence::constant(), levels, 5000).verdict);
  }
}
