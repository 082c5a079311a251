#include <cmath>

#include "doctest.h"
#include "records/boundary.hpp"
#include "records/error.hpp"
#include "records/sequences.hpp"

using namespace records;
using doctest::Approx;

TEST_CASE("alpha terms and partial sums") {
  const auto g = AlphaSequence::geometric(2.0);
  CHECK(g.term(3) == 8.0);
  CHECK(g.partial_sum(3) == Approx(14.0).epsilon(1e-15));
  const auto p = AlphaSequence::polynomial(1.0);
  CHECK(p.partial_sum(100) == 5050.0);
  const auto s = AlphaSequence::polynomial(0.5).partial_sums(1000);
  double direct = 0.0;
  for (int k = 1; k <= 1000; ++k) direct += std::sqrt(static_cast<double>(k));
  CHECK(s[1000] == Approx(direct).epsilon(1e-13));
  CHECK(s[0] == 0.0);
  for (std::size_t k = 1; k <= 1000; ++k)
    CHECK(std::abs(s[k] - s[k - 1] - std::sqrt(static_cast<double>(k))) <= 1e-12 * s[k]);
}

TEST_CASE("condition C1 by family") {
  CHECK(*AlphaSequence::constant(1.0).c1());
  CHECK(*AlphaSequence::geometric(2.0).c1());
  CHECK_FALSE(*AlphaSequence::geometric(0.5).c1());
  CHECK(*AlphaSequence::polynomial(-1.0).c1());
  CHECK_FALSE(*AlphaSequence::polynomial(-2.0).c1());
  CHECK_FALSE(AlphaSequence::table({1.0, 2.0}).c1().has_value());
  CHECK_THROWS_AS(AlphaSequence::table({1.0, -2.0}), Error);
  CHECK_THROWS_AS(AlphaSequence::constant(0.0), Error);
}

TEST_CASE("threshold levels and tails") {
  const auto F = Distribution::exponential();
  const auto l = ThresholdSequence::log_scaled(1.0, 0.0);
  CHECK(l.level(10) == Approx(std::log(10.0)));
  CHECK(l.tail(F, 10) == Approx(0.1).epsilon(1e-14));
  CHECK(l.monotone_flag());
  CHECK(l.check_monotone(1000));
  const auto flat = ThresholdSequence::flat(F.quantile(0.9));
  CHECK(flat.tail(F, 7) == Approx(0.1).epsilon(1e-14));
  CHECK(ThresholdSequence::neg_infinity().tail(F, 3) == 1.0);
  const auto t = ThresholdSequence::table({1.0, 3.0, 2.0});
  CHECK_FALSE(t.check_monotone(3));
}

TEST_CASE("step boundary") {
  const auto b = step_boundary(ThresholdSequence::log_scaled(0.0, 0.0), AlphaSequence::constant(), 5);
  CHECK(b(0.5) == 0.0);
  // alpha = 1, l_n = n
  const auto lin = BoundaryFunction::step(ThresholdSequence::table({1, 2, 3, 4, 5, 6, 7, 8, 9, 10}),
                                          AlphaSequence::constant(), 9);
  CHECK(lin(2.5) == 2.0);
  CHECK(lin(0.3) == 1.0);
  CHECK(lin(3.0) == 3.0);
  CHECK(lin(std::nextafter(3.0, 0.0)) == 2.0);
  CHECK_THROWS_AS(lin(10.0), Error);
  // alpha = 2^n: s = 2, 6, 14
  const auto geo = BoundaryFunction::step(ThresholdSequence::table({1, 2, 3, 4, 5}),
                                          AlphaSequence::geometric(2.0), 4);
  CHECK(geo(6.0) == 2.0);
  CHECK(geo(5.999) == 1.0);
  CHECK(geo(14.0) == 3.0);
  double prev = -1e300;
  for (double t = 0.01; t < 29.0; t += 0.01) {
    CHECK(geo(t) >= prev);
    prev = geo(t);
  }
}

TEST_CASE("monotone envelope") {
  const auto tab = BoundaryFunction::table({1, 2, 3, 4}, {3, 1, 2, 5});
  const auto env = monotone_envelope(tab, 1.0);
  CHECK(env(1.0) == 3.0);
  CHECK(env(2.0) == 3.0);
  CHECK(env(3.0) == 3.0);
  CHECK(env(4.0) == 5.0);
  CHECK(env(0.5) == 3.0);

  const auto inc = BoundaryFunction::log_scaled(2.0, 1.0);
  const auto env_inc = monotone_envelope(inc, 1.0, 100.0);
  for (double t : {1.0, 2.5, 17.0, 99.0}) CHECK(env_inc(t) == Approx(inc(t)).epsilon(1e-12));

  const auto wave = BoundaryFunction::analytic([](double t) { return std::sin(t) + t / 10.0; });
  const auto env_wave = monotone_envelope(wave, 1.0, 100.0);
  // local maxima of sin t + t/10 sit where cos t = -1/10, sin t > 0
  const auto oracle = [&](double t) {
    double best = std::max(wave(1.0), wave(t));
    for (double c = std::acos(-0.1); c < t; c += 2.0 * M_PI)
      if (c > 1.0) best = std::max(best, wave(c));
    return best;
  };
  double worst = 0.0;
  for (double t = 1.0; t <= 100.0; t += 0.0137) worst = std::max(worst, std::abs(env_wave(t) - oracle(t)));
  CHECK(worst < 1e-9);
}
