#include <cmath>

#include "doctest.h"
#include "records/error.hpp"
#include "records/exactjoint.hpp"

using namespace records;
using doctest::Approx;

TEST_CASE("P1 matches direct double integration") {
  // mpmath quadrature of the two-level integral
  CHECK(joint_record_law(AlphaSequence::constant(), 0.5, 3, 7).P1 ==
        Approx(0.0374813988095238095).epsilon(1e-13));
  CHECK(joint_record_law(AlphaSequence::polynomial(1.0), 0.3, 2, 5).P1 ==
        Approx(0.214722223019383722).epsilon(1e-13));
}

TEST_CASE("h = 0 gives independent indicators") {
  const auto j = joint_record_law(AlphaSequence::constant(), 0.0, 1, 2);
  CHECK(j.P1 == Approx(0.5));
  CHECK(j.joint.lo == Approx(0.5));
  CHECK(j.joint.hi == Approx(0.5));
  const auto r = ratio_bound(AlphaSequence::polynomial(0.5), 0.0, 4, 9);
  CHECK(r.ratio.lo == Approx(1.0).epsilon(1e-14));
  CHECK(r.ratio.hi == Approx(1.0).epsilon(1e-14));
  CHECK(theorem3_condition(AlphaSequence::constant(), 0.0, 7) == 0.0);
  for (const auto& row : sup_ratio_decay(AlphaSequence::constant(), 0.0, {2, 5}, 40))
    CHECK(row.sup_halfwidth == 0.0);
}

TEST_CASE("pure-scheme b, c give the product of marginals") {
  for (double h : {0.2, 0.6, 0.95}) {
    const auto a = AlphaSequence::polynomial(0.7);
    const auto j = joint_record_law(a, h, 3, 11, pure_scheme_terms(a, h, 3, 11));
    const double pm = a.term(3) / a.partial_sum(3), pn = a.term(11) / a.partial_sum(11);
    CHECK(j.marginal_m.lo == Approx(pm).epsilon(1e-13));
    CHECK(j.marginal_n.hi == Approx(pn).epsilon(1e-13));
    CHECK(j.joint.lo == Approx(pm * pn).epsilon(1e-12));
    CHECK(j.ratio.lo == Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("intervals stay inside [0, 1]") {
  for (double h : {0.1, 0.5, 0.9})
    for (std::size_t m = 1; m < 12; ++m)
      for (std::size_t n = m + 1; n < 15; ++n) {
        const auto j = joint_record_law(AlphaSequence::constant(), h, m, n);
        CHECK(j.P1 >= 0.0);
        CHECK(j.joint.lo >= 0.0);
        CHECK(j.joint.hi <= 1.0 + 1e-15);
      }
  CHECK_THROWS_AS(joint_record_law(AlphaSequence::constant(), 0.5, 4, 4), Error);
}

TEST_CASE("ratio decay condition in log space") {
  CHECK(theorem3_condition(AlphaSequence::constant(), 0.5, 10) == Approx(0.09765625).epsilon(1e-14));
  CHECK(theorem3_condition(AlphaSequence::polynomial(1.0), 0.9, 20) ==
        Approx(1.08483970446912553834e-5).epsilon(1e-12));
}

TEST_CASE("ratio intervals contain 1 and sit inside the derived enclosure") {
  const auto a = AlphaSequence::constant();
  const auto r = ratio_bound(a, 0.5, 20, 40);
  CHECK(r.ratio.contains(1.0));
  CHECK(r.halfwidth() <= r.derived_halfwidth());
  CHECK(r.derived.lo <= r.ratio.lo);
  CHECK(r.ratio.hi <= r.derived.hi);

  // the sweep maximum over 20 <= m < n <= 200 sits on the first row
  double best = 0.0;
  std::size_t arg = 0;
  for (std::size_t m = 20; m < 200; ++m)
    for (std::size_t n = m + 1; n <= 200; ++n) {
      const double w = ratio_bound(a, 0.5, m, n).halfwidth();
      if (w > best) {
        best = w;
        arg = m;
      }
    }
  CHECK(arg == 20);
}

TEST_CASE("sup ratio table decays") {
  const auto rows = sup_ratio_decay(AlphaSequence::constant(), 0.5, {5, 10, 20}, 500);
  REQUIRE(rows.size() == 3);
  CHECK(rows[0].sup_halfwidth > rows[1].sup_halfwidth);
  CHECK(rows[1].sup_halfwidth > rows[2].sup_halfwidth);
  for (const auto& r : rows) CHECK(r.sup_halfwidth <= r.sup_derived);

  const auto fast = sup_ratio_decay(AlphaSequence::geometric(2.0), 0.9, {8}, 60);
  CHECK(fast[0].sup_halfwidth < 1e-6);
}

TEST_CASE("degenerate denominators are refused") {
  // h so close to 1 that 1 - h^{s_m} underflows against the marginal scale
  CHECK_THROWS_AS(ratio_bound(AlphaSequence::constant(), 1.0 - 1e-17, 2, 3), Error);
  try {
    ratio_bound(AlphaSequence::constant(), std::nextafter(1.0, 0.0), 1, 2);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DegenerateDenominator);
  }
}

TEST_CASE("joint assembly on the flat vee") {
  ThresholdSchemeSpec s{Distribution::exponential(), AlphaSequence::constant(),
                        ThresholdSequence::flat(-std::log(0.5))};
  s.below = BelowKind::Vee;
  const auto rows = joint_assembly(s, {{2, 5}, {3, 10}}, 20000, 77);
  REQUIRE(rows.size() == 2);
  for (const auto& r : rows) {
    CHECK(r.passes());
    CHECK(r.joint - r.P2 - r.c == Approx(r.P1 + r.residual).epsilon(1e-9));
  }
  CHECK_THROWS_AS(joint_assembly(s, {{5, 5}}, 100, 1), Error);
  s.levels = ThresholdSequence::log_scaled(1.0, 0.0);
  CHECK_THROWS_AS(joint_assembly(s, {{2, 5}}, 100, 1), Error);
}
