#pragma once

#include <array>
#include <cstdint>

namespace records {

/// Philox4x32-10 block function (Salmon et al., "Parallel random numbers: as
/// easy as 1, 2, 3"). Pure function of (counter, key).
std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> counter,
                                           std::array<std::uint32_t, 2> key);

/// Named sub-streams. Each lane is an independent family of draws for the
/// same (seed, replication, index) triple.
enum class Lane : std::uint32_t {
  Primary = 0,     // U_n driving the F^alpha scheme and its coupled partner
  BelowLevel = 1,  // V_n in the vee construction
  Mixture = 2,     // perturbation selector in the perturbed model
  Extremal = 3,    // spacing maxima of the extremal process
  Auxiliary = 4,
};

/// Counter-based uniform source keyed by a 64-bit seed.
///
/// uniform(rep, index, lane) is a pure function; two calls with the same
/// arguments return the same value regardless of call order or thread.
/// Values lie in the open interval (0, 1) on a 2^-53 lattice shifted by half
/// a step, so log(u) is always finite.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed) noexcept : seed_(seed) {}

  std::uint64_t seed() const noexcept { return seed_; }

  double uniform(std::uint64_t rep, std::uint64_t index, Lane lane = Lane::Primary) const noexcept;

  /// Raw 64 random bits for the same key.
  std::uint64_t bits(std::uint64_t rep, std::uint64_t index, Lane lane = Lane::Primary) const noexcept;

 private:
  std::uint64_t seed_;
};

}  // namespace records
