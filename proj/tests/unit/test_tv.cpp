#include <cmath>

#include "doctest.h"
#include "records/error.hpp"
#include "records/tv_distance.hpp"

using namespace records;
using doctest::Approx;

namespace {

// |e^{-x} - 2 e^{-2x}| integrated over (l, inf); the sign flips at ln 2.
double exp_pair_tv(double l) {
  const double c = std::log(2.0);
  if (l >= c) return std::exp(-l) - std::exp(-2.0 * l);
  const double below = (std::exp(-2.0 * l) - 0.25) - (std::exp(-l) - 0.5);
  return below + 0.25;
}

}  // namespace

TEST_CASE("identical measures") {
  const auto F = Distribution::exponential();
  CHECK(tv_restricted(F, F, 0.0).value == 0.0);
}

TEST_CASE("uniform against its square") {
  const auto r = tv_restricted(Distribution::uniform(), Distribution::uniform().power(2.0), 0.0);
  CHECK(r.value == Approx(0.5).epsilon(1e-12));
  CHECK(r.error_bound < 1e-10);
}

TEST_CASE("exponential rates, restricted") {
  const auto G = Distribution::exponential(1.0), H = Distribution::exponential(2.0);
  for (double l : {-1.0, 0.0, 0.3, 1.0, 5.0, 20.0}) {
    CAPTURE(l);
    const auto r = tv_restricted(G, H, l);
    CHECK(r.value == Approx(exp_pair_tv(std::max(l, 0.0))).epsilon(1e-10));
    CHECK(tv_restricted(H, G, l).value == Approx(r.value).epsilon(1e-12));
  }
  CHECK(tv_restricted(G, H, 40.0).value < 1e-17);
}

TEST_CASE("grid route without densities") {
  CustomCdf a{[](double x) { return x <= 0 ? 0.0 : x >= 1 ? 1.0 : x * x; }, {}, 0.0, 1.0};
  CustomCdf b{[](double x) { return x <= 0 ? 0.0 : x >= 1 ? 1.0 : x; }, {}, 0.0, 1.0};
  const auto r = tv_restricted(Distribution::custom(a), Distribution::custom(b), 0.0);
  CHECK(r.method == TvMethod::Grid);
  CHECK(r.value == Approx(0.5).epsilon(1e-8));
  CHECK(std::abs(r.value - 0.5) <= r.error_bound + 1e-8);
}

TEST_CASE("unbounded support without densities is unsupported") {
  CustomCdf a{[](double x) { return x <= 0 ? 0.0 : -std::expm1(-x); }, {}, 0.0};
  try {
    tv_restricted(Distribution::custom(a), Distribution::exponential(2.0), 0.0);
    FAIL("expected Unsupported");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Unsupported);
  }
}
