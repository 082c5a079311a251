#include <cmath>

#include "doctest.h"
#include "records/error.hpp"
#include "records/falpha.hpp"
#include "records/stats.hpp"

using namespace records;
using doctest::Approx;

TEST_CASE("indicator estimates") {
  const FalphaSampler iid(Distribution::exponential(), AlphaSequence::constant(), 10, 42);
  const auto src = falpha_source(iid);
  const auto always = estimate_indicator_prob(src, [](const Trajectory&) { return true; }, 500, 42);
  CHECK(always.point == 1.0);
  CHECK(always.std_error == 0.0);
  const auto p5 = estimate_indicator_prob(src, [](const Trajectory& t) { return t.I[4] == 1; }, 20000, 42, 2);
  CHECK(p5.covers(0.2));
  CHECK_THROWS_AS(estimate_indicator_prob(src, [](const Trajectory&) { return true; }, 50, 1), Error);
}

TEST_CASE("4 s.e. intervals cover the truth") {
  const FalphaSampler s(Distribution::uniform(), AlphaSequence::polynomial(1.0), 4, 0);
  int covered = 0;
  for (std::uint64_t meta = 0; meta < 200; ++meta) {
    const FalphaSampler sm(Distribution::uniform(), AlphaSequence::polynomial(1.0), 4, 1000 + meta);
    const auto est = estimate_indicator_prob(
        falpha_source(sm), [](const Trajectory& t) { return t.I[2] == 1; }, 1000, 1000 + meta);
    covered += est.covers(0.5) ? 1 : 0;  // p_3 = 3 / 6
  }
  CHECK(covered >= 198);
}

TEST_CASE("chi-square 2x2") {
  const auto indep = chi2_2x2(250, 250, 250, 250);
  CHECK(indep.statistic == Approx(0.0));
  CHECK_FALSE(indep.rejects());
  const auto dup = chi2_2x2(500, 0, 0, 500);
  CHECK(dup.statistic == Approx(1000.0));
  CHECK(dup.rejects(0.01));
  CHECK_THROWS_AS(chi2_2x2(1, 20, 20, 1000), Error);
}

TEST_CASE("chi-square battery calibrates under exact independence") {
  const FalphaSampler s(Distribution::gumbel(), AlphaSequence::constant(), 15, 9);
  const auto pairs = all_pairs(2, 15);
  const auto b = chi2_pairwise(falpha_source(s), 15, pairs, 20000);
  CHECK(b.pairs.size() == pairs.size());
  CHECK(std::abs(b.rejection_rate - 0.05) <= 4.0 * b.std_error);

  // duplicated indicator: I_n replaced by I_m
  const TrajectorySource dup = [&](std::uint64_t r, Trajectory& t) {
    s.sample_into(r, t);
    t.I[5] = t.I[2];
  };
  const auto d = chi2_pairwise(dup, 15, {{3, 6}}, 5000);
  CHECK(d.pairs[0].test.statistic == Approx(5000.0).epsilon(1e-9));
  CHECK(d.rejected == 1);

  // E[both] = R / (m n) drops below 5 for late pairs at small R
  const auto thin = chi2_pairwise(falpha_source(s), 15, {{2, 3}, {14, 15}}, 1000);
  CHECK(thin.pairs.size() == 1);
  REQUIRE(thin.too_small.size() == 1);
  CHECK(thin.too_small[0] == std::pair<std::size_t, std::size_t>{14, 15});
}

TEST_CASE("Kolmogorov-Smirnov") {
  std::vector<double> grid;
  for (int i = 0; i < 1000; ++i) grid.push_back((i + 0.5) / 1000.0);
  const auto ks = ks_one_sample(grid, [](double x) { return x; });
  CHECK(ks.statistic == Approx(0.0005));
  CHECK_FALSE(ks.rejects(0.10));
  const auto shifted = ks_one_sample(grid, [](double x) { return std::min(1.0, x + 0.1); });
  CHECK(shifted.rejects(0.01));
  CHECK(ks_two_sample(grid, grid).statistic == 0.0);
  CHECK(ks.critical[1] == Approx(1.3581 / std::sqrt(1000.0)));
}

TEST_CASE("pmf total variation") {
  const auto pmf = exact_count_pmf(AlphaSequence::constant(), 50);
  CHECK(pmf_tv_compare(pmf, pmf).tv == 0.0);

  const FalphaSampler s(Distribution::pareto(2.0), AlphaSequence::constant(), 50, 3);
  std::vector<std::size_t> hist(pmf.size(), 0), moved(pmf.size() + 1, 0);
  Trajectory t;
  for (std::uint64_t r = 0; r < 20000; ++r) {
    s.sample_into(r, t);
    ++hist[t.N[49]];
    ++moved[t.N[49] + 1];
  }
  const auto cmp = pmf_tv_compare(hist, pmf);
  CHECK(cmp.within());
  moved.pop_back();
  CHECK(moved.size() == pmf.size());
  CHECK_FALSE(pmf_tv_compare(moved, pmf).within());
  std::vector<std::size_t> longer(pmf.size() + 2, 0);
  longer.back() = 1;
  CHECK_THROWS_AS(pmf_tv_compare(longer, pmf), Error);
}

TEST_CASE("CLT diagnostic is exact and decreasing") {
  const auto rows = clt_diagnostic(AlphaSequence::constant(), {100, 1000, 10000});
  REQUIRE(rows.size() == 3);
  CHECK(rows[0].ks > rows[1].ks);
  CHECK(rows[1].ks > rows[2].ks);
  const auto again = clt_diagnostic(AlphaSequence::constant(), {100, 1000, 10000});
  for (std::size_t i = 0; i < 3; ++i) CHECK(rows[i].ks == again[i].ks);
  // E_n = H_n
  CHECK(rows[0].mean == Approx(5.18737751763962));
  CHECK_THROWS_AS(clt_diagnostic(AlphaSequence::exp_power(1.0, 1.5), {100}), Error);
}

TEST_CASE("bounded-variance branch: centred counts stabilise") {
  const auto rows = deviation_quantiles(AlphaSequence::exp_power(1.0, 1.5), {50, 100, 200}, {0.1, 0.5, 0.9});
  for (std::size_t q = 0; q < 3; ++q) {
    const double d1 = std::abs(rows[1].quantiles[q].second - rows[0].quantiles[q].second);
    const double d2 = std::abs(rows[2].quantiles[q].second - rows[1].quantiles[q].second);
    CHECK(d2 < d1);
    CHECK(d2 < 1e-4);
  }
}

TEST_CASE("a.s. diagnostic decays along n0") {
  const FalphaSampler s(Distribution::exponential(), AlphaSequence::constant(), 10000, 77);
  const auto d = as_convergence_diagnostic(falpha_source(s), AlphaSequence::constant(), 10000, 300);
  CHECK(d.rows[2].n0 == 5000);
  CHECK(d.rows[2].ratio_dev[0].second < d.rows[0].ratio_dev[0].second);
  CHECK(d.decreasing);
  CHECK_THROWS_AS(as_convergence_diagnostic(falpha_source(s), AlphaSequence::geometric(0.5), 100, 10), Error);
}
