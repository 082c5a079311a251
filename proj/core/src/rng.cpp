#include "records/rng.hpp"

#include "records/error.hpp"

namespace records {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::NonConvergence: return "NonConvergence";
    case ErrorCode::Unsupported: return "Unsupported";
    case ErrorCode::HorizonTooLarge: return "HorizonTooLarge";
    case ErrorCode::Undecidable: return "Undecidable";
    case ErrorCode::IndexOrder: return "IndexOrder";
    case ErrorCode::DegenerateDenominator: return "DegenerateDenominator";
    case ErrorCode::TailUnbounded: return "TailUnbounded";
    case ErrorCode::CertificationFailed: return "CertificationFailed";
    case ErrorCode::CellTooSmall: return "CellTooSmall";
    case ErrorCode::SupportMismatch: return "SupportMismatch";
    case ErrorCode::WrongRegime: return "WrongRegime";
    case ErrorCode::OutOfRange: return "OutOfRange";
    case ErrorCode::ConfigError: return "ConfigError";
  }
  return "Unknown";
}

namespace {

constexpr std::uint32_t kMul0 = 0xD2511F53u;
constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) {
  const std::uint64_t product = static_cast<std::uint64_t>(a) * b;
  hi = static_cast<std::uint32_t>(product >> 32);
  lo = static_cast<std::uint32_t>(product);
}

}  // namespace

std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> ctr,
                                           std::array<std::uint32_t, 2> key) {
  for (int round = 0; round < 10; ++round) {
    std::uint32_t hi0, lo0, hi1, lo1;
    mulhilo(kMul0, ctr[0], hi0, lo0);
    mulhilo(kMul1, ctr[2], hi1, lo1);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
    key[0] += kWeyl0;
    key[1] += kWeyl1;
  }
  return ctr;
}

std::uint64_t CounterRng::bits(std::uint64_t rep, std::uint64_t index, Lane lane) const noexcept {
  // The index only needs 32 bits at desk scale; the upper half is folded into
  // the lane word so very long horizons still get distinct counters.
  const std::array<std::uint32_t, 4> counter{
      static_cast<std::uint32_t>(rep), static_cast<std::uint32_t>(rep >> 32),
      static_cast<std::uint32_t>(index),
      static_cast<std::uint32_t>(lane) ^ (static_cast<std::uint32_t>(index >> 32) << 8)};
  const std::array<std::uint32_t, 2> key{static_cast<std::uint32_t>(seed_),
                                         static_cast<std::uint32_t>(seed_ >> 32)};
  const auto out = philox4x32_10(counter, key);
  return (static_cast<std::uint64_t>(out[0]) << 32) | out[1];
}

double CounterRng::uniform(std::uint64_t rep, std::uint64_t index, Lane lane) const noexcept {
  const std::uint64_t top53 = bits(rep, index, lane) >> 11;
  return (static_cast<double>(top53) + 0.5) * 0x1.0p-53;
}

}  // namespace records
