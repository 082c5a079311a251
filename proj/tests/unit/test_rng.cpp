#include <cmath>
#include <set>

#include "doctest.h"
#include "records/rng.hpp"

using namespace records;

TEST_CASE("philox4x32-10 known-answer vectors") {
  using A4 = std::array<std::uint32_t, 4>;
  CHECK(philox4x32_10({0, 0, 0, 0}, {0, 0}) == A4{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8});
  CHECK(philox4x32_10({0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, {0xffffffff, 0xffffffff}) ==
        A4{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd});
  CHECK(philox4x32_10({0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, {0xa4093822, 0x299f31d0}) ==
        A4{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1});
}

TEST_CASE("uniforms are pure functions of their key") {
  const CounterRng a(42), b(42), c(43);
  for (std::uint64_t rep = 0; rep < 5; ++rep) {
    for (std::uint64_t k = 1; k < 50; ++k) {
      CHECK(a.uniform(rep, k) == b.uniform(rep, k));
      const double u = a.uniform(rep, k);
      CHECK(u > 0.0);
      CHECK(u < 1.0);
      CHECK(std::isfinite(std::log(u)));
    }
  }
  CHECK(a.uniform(0, 1) != c.uniform(0, 1));
  CHECK(a.uniform(0, 1, Lane::Primary) != a.uniform(0, 1, Lane::BelowLevel));
  CHECK(a.uniform(0, 1) != a.uniform(1, 1));
}

TEST_CASE("lanes and indices do not collide") {
  const CounterRng r(7);
  std::set<std::uint64_t> seen;
  for (std::uint32_t lane = 0; lane < 5; ++lane)
    for (std::uint64_t k = 0; k < 200; ++k)
      seen.insert(r.bits(3, k, static_cast<Lane>(lane)));
  CHECK(seen.size() == 1000);
}

TEST_CASE("uniform mean and variance") {
  const CounterRng r(2024);
  double s = 0.0, s2 = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double u = r.uniform(static_cast<std::uint64_t>(i), 1);
    s += u;
    s2 += u * u;
  }
  const double mean = s / n, var = s2 / n - mean * mean;
  CHECK(std::abs(mean - 0.5) < 4.0 * std::sqrt(1.0 / 12.0 / n));
  CHECK(std::abs(var - 1.0 / 12.0) < 1e-3);
}
