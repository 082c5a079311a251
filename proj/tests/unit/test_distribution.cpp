#include <cmath>
#include <vector>

#include "doctest.h"
#include "records/distribution.hpp"
#include "records/error.hpp"

using namespace records;
using doctest::Approx;

namespace {

std::vector<Distribution> builtins() {
  return {Distribution::uniform(), Distribution::exponential(1.0), Distribution::exponential(2.5),
          Distribution::pareto(1.5), Distribution::gumbel(),
          Distribution::table({0.0, 1.0, 2.0, 3.0}, {0.0, 0.4, 0.4, 1.0}),
          Distribution::exponential(1.0).power(3.0)};
}

}  // namespace

TEST_CASE("power_cdf") {
  CHECK(power_cdf(Distribution::uniform(), 2.0, 0.5) == Approx(0.25).epsilon(1e-15));
  for (double x : {0.1, 0.5, 1.7}) {
    CHECK(power_cdf(Distribution::exponential(), 1.0, x) ==
          Approx(Distribution::exponential().cdf(x)).epsilon(1e-15));
  }
  // 40-digit reference for exp(1000 log(1 - e^{-20}))
  CHECK(power_cdf(Distribution::exponential(), 1000.0, 20.0) ==
        Approx(0.9999979388484996129).epsilon(1e-15));
  CHECK(power_cdf(Distribution::uniform(), 3.0, -1.0) == 0.0);
  CHECK(power_cdf(Distribution::pareto(2.0), 5.0, 0.5) == 0.0);
}

TEST_CASE("analytic quantiles") {
  CHECK(Distribution::exponential().quantile(0.5) == Approx(std::log(2.0)).epsilon(1e-15));
  CHECK(Distribution::uniform().quantile(0.25) == Approx(0.25).epsilon(1e-15));
  CHECK(Distribution::pareto(2.0).quantile(0.75) == Approx(2.0).epsilon(1e-14));
  CHECK(Distribution::gumbel().quantile(std::exp(-1.0)) == Approx(0.0).epsilon(1e-14));
}

TEST_CASE("generalized inverse on a flat piece") {
  const auto F = Distribution::table({0.0, 1.0, 2.0, 3.0}, {0.0, 0.4, 0.4, 1.0});
  const double q = F.quantile(0.4);
  CHECK(q == Approx(1.0).epsilon(1e-11));
  // grid scan of the inf definition
  for (double x = 0.0; x < q - 1e-9; x += 1e-3) CHECK(F.cdf(x) < 0.4);
  CHECK(F.cdf(q) >= 0.4 - 1e-15);
  CHECK(F.quantile(0.7) == Approx(2.5).epsilon(1e-11));
}

TEST_CASE("quantile grid invariants for every built-in") {
  for (const auto& F : builtins()) {
    CAPTURE(F.describe());
    for (int i = 1; i < 10000; ++i) {
      const double u = i / 10000.0;
      const double x = F.quantile(u);
      CHECK(F.cdf(x) >= u - 1e-12);
      CHECK(F.cdf(x - 1e-9 * std::max(1.0, std::abs(x))) < u + 1e-12);
      if (F.is_continuous() && F.family() != Family::Table) CHECK(F.cdf(x) == Approx(u).epsilon(1e-10));
    }
  }
}

TEST_CASE("power is a valid d.f.") {
  for (double a : {0.3, 1.0, 7.0, 1e4}) {
    const auto G = Distribution::exponential().power(a);
    double prev = 0.0;
    for (double x = 0.0; x < 60.0; x += 0.01) {
      const double v = G.cdf(x);
      CHECK(v >= prev);
      prev = v;
    }
    CHECK(G.cdf(-1.0) == 0.0);
    CHECK(G.cdf(80.0) == Approx(1.0).epsilon(1e-15));
  }
}

TEST_CASE("log-space quantile stays finite for huge powers") {
  const auto F = Distribution::exponential();
  const double x = F.quantile_from_log(-1e-300);
  CHECK(std::isfinite(x));
  CHECK(x == Approx(-std::log(1e-300)).epsilon(1e-12));
  CHECK(F.upper_quantile(1e-20) == Approx(20.0 * std::log(10.0)).epsilon(1e-13));
  CHECK(F.survival(40.0) == Approx(std::exp(-40.0)).epsilon(1e-14));
}

TEST_CASE("supports and continuity") {
  CHECK(Distribution::uniform().upper_endpoint() == 1.0);
  CHECK(std::isinf(Distribution::exponential().upper_endpoint()));
  CHECK(Distribution::pareto(1.0).lower_support() == 1.0);
  CHECK(std::isinf(Distribution::gumbel().lower_support()));
  CHECK_FALSE(Distribution::table({0.0, 1.0}, {0.2, 1.0}).is_continuous());
  CHECK(Distribution::table({0.0, 1.0}, {0.0, 1.0}).is_continuous());
}

TEST_CASE("table validation") {
  CHECK_THROWS_AS(Distribution::table({0.0, 0.0}, {0.0, 1.0}), Error);
  CHECK_THROWS_AS(Distribution::table({0.0, 1.0}, {0.5, 0.4}), Error);
  CHECK_THROWS_AS(Distribution::table({0.0, 1.0}, {0.0, 0.9}), Error);
  CHECK_THROWS_AS(Distribution::pareto(-1.0), Error);
}

TEST_CASE("power density") {
  const auto G = Distribution::uniform().power(2.0);
  CHECK(G.density(0.3) == Approx(0.6));
  const auto E = Distribution::exponential(2.0);
  CHECK(E.density(0.5) == Approx(2.0 * std::exp(-1.0)));
}
