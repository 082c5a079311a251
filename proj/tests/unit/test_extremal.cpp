#include <cmath>

#include "doctest.h"
#include "records/error.hpp"
#include "records/extremal.hpp"
#include "records/falpha.hpp"
#include "records/stats.hpp"

using namespace records;

TEST_CASE("marginal of the extremal process is F^t") {
  const int R = 20000;
  int below = 0;
  const ExtremalSampler s(Distribution::uniform(), {2.0}, 4);
  for (int r = 0; r < R; ++r) below += s.sample(static_cast<std::uint64_t>(r)).levels[0] <= 0.5;
  const double se = std::sqrt(0.25 * 0.75 / R);
  CHECK(std::abs(below / double(R) - 0.25) < 4 * se);

  for (const auto& F : {Distribution::uniform(), Distribution::exponential(), Distribution::pareto(1.5),
                        Distribution::gumbel()}) {
    for (double t : {0.5, 1.0, 7.0, 100.0}) {
      const ExtremalSampler st(F, {t}, 8);
      std::vector<double> x;
      for (int r = 0; r < 10000; ++r) x.push_back(st.sample(static_cast<std::uint64_t>(r)).levels[0]);
      const auto ks = ks_one_sample(x, [&](double v) { return power_cdf(F, t, v); });
      CHECK_MESSAGE(!ks.rejects(0.01), F.describe() << " t=" << t);
    }
  }
}

TEST_CASE("independent increments") {
  const ExtremalSampler two(Distribution::gumbel(), {1.5, 4.0}, 5);
  const ExtremalSampler one(Distribution::gumbel(), {4.0}, 6);
  std::vector<double> a, b;
  for (std::uint64_t r = 0; r < 10000; ++r) {
    const auto p = two.sample(r);
    CHECK(p.levels[0] <= p.levels[1]);
    a.push_back(p.levels[1]);
    b.push_back(one.sample(r).levels[0]);
  }
  CHECK_FALSE(ks_two_sample(a, b).rejects(0.01));
  CHECK_THROWS_AS(ExtremalSampler(Distribution::gumbel(), {2.0, 1.0}, 1), Error);
}

TEST_CASE("tiny spacings add no new maximum") {
  const ExtremalSampler s(Distribution::exponential(), {1.0, 1.0 + 1e-9}, 2);
  int moved = 0;
  for (std::uint64_t r = 0; r < 2000; ++r) {
    const auto p = s.sample(r);
    moved += p.levels[1] > p.levels[0];
  }
  CHECK(moved <= 2);
}

TEST_CASE("embedding of the F^alpha maxima") {
  const auto alpha = AlphaSequence::polynomial(0.5);
  const auto sums = alpha.partial_sums(20);
  const ExtremalSampler ext(Distribution::exponential(), std::vector<double>(sums.begin() + 1, sums.end()), 12);
  const FalphaSampler fa(Distribution::exponential(), alpha, 20, 13);
  for (std::size_t n : {5u, 20u}) {
    std::vector<double> a, b;
    Trajectory t;
    for (std::uint64_t r = 0; r < 10000; ++r) {
      a.push_back(ext.sample(r).levels[n - 1]);
      fa.sample_into(r, t);
      b.push_back(t.M[n - 1]);
    }
    CHECK_FALSE(ks_two_sample(a, b).rejects(0.01));
  }
}

TEST_CASE("last crossing statistics") {
  const auto grid = geometric_grid(1.0, 1000.0, 40);
  CHECK(grid.back() == 1000.0);
  const auto below_support =
      last_crossing_statistics(Distribution::uniform(), BoundaryFunction::analytic([](double) { return -1.0; }),
                               grid, 3, 200);
  for (double t : below_support.last_crossing) CHECK(t == 0.0);
  CHECK(below_support.fraction_below_at_horizon == 0.0);

  // flat boundary: g stays positive, so paths escape
  const auto flat = BoundaryFunction::analytic([](double) { return 2.0; });
  const auto shortr = last_crossing_statistics(Distribution::exponential(), flat, geometric_grid(1, 10, 20), 4, 2000);
  const auto longr = last_crossing_statistics(Distribution::exponential(), flat, geometric_grid(1, 100, 20), 4, 2000);
  CHECK(longr.fraction_below_at_horizon < shortr.fraction_below_at_horizon);

  // b_t = ln t: t g_t = 1, P(M_t <= b_t) = (1 - 1/t)^t -> e^{-1}
  const auto lg = BoundaryFunction::log_scaled(1.0, 0.0);
  const auto r = last_crossing_statistics(Distribution::exponential(), lg, geometric_grid(2, 1000, 30), 5, 4000,
                                          {10.0, 100.0});
  REQUIRE(r.probes.size() == 2);
  for (const auto& p : r.probes) CHECK(p.fraction_below >= std::exp(-1.0) - 4 * p.std_error);
  CHECK(r.last_crossing_quantiles.back().first == 1.0);
  const auto a = last_crossing_statistics(Distribution::exponential(), lg, geometric_grid(2, 1000, 30), 5, 1500, {}, 1);
  const auto b = last_crossing_statistics(Distribution::exponential(), lg, geometric_grid(2, 1000, 30), 5, 1500, {}, 3);
  CHECK(a.to_json().dump() == b.to_json().dump());
}
