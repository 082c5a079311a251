#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "records/boundary.hpp"
#include "records/distribution.hpp"
#include "records/rng.hpp"

namespace records {

/// The extremal process observed at t_1 < ... < t_k.
struct ExtremalPath {
  std::vector<double> times;
  std::vector<double> levels;
  std::uint64_t seed = 0;
  std::uint64_t rep = 0;
};

/// Increment over (t_{j-1}, t_j] is an independent F^{t_j - t_{j-1}} draw
/// (t_0 = 0) from the Extremal lane at index j.
class ExtremalSampler {
 public:
  ExtremalSampler(Distribution F, std::vector<double> times, std::uint64_t seed);

  const std::vector<double>& times() const noexcept { return times_; }
  ExtremalPath sample(std::uint64_t rep) const;
  void sample_into(std::uint64_t rep, ExtremalPath& out) const;

 private:
  Distribution F_;
  std::vector<double> times_;
  std::vector<double> spacings_;
  CounterRng rng_;
};

ExtremalPath sample_extremal(const Distribution& F, const std::vector<double>& times,
                             std::uint64_t seed, std::uint64_t rep);

/// `points` times spread geometrically over [t0, horizon], horizon included.
std::vector<double> geometric_grid(double t0, double horizon, std::size_t points);

struct CrossingProbe {
  double t = 0.0;
  double fraction_below = 0.0;
  double std_error = 0.0;
};

struct LastCrossingReport {
  std::size_t replications = 0;
  double horizon = 0.0;
  /// Paths with M_t <= b_t at the last grid time.
  double fraction_below_at_horizon = 0.0;
  double std_error = 0.0;
  /// (p, quantile) of the last grid time with M_t <= b_t; 0 when never below.
  std::vector<std::pair<double, double>> last_crossing_quantiles;
  std::vector<CrossingProbe> probes;
  /// Per-path last crossing times, in replication order.
  std::vector<double> last_crossing;

  nlohmann::json to_json() const;
};

/// Monte Carlo last crossing of a non-decreasing boundary on a time grid.
/// `probe_times` are merged into the grid and reported individually.
LastCrossingReport last_crossing_statistics(const Distribution& F, const BoundaryFunction& b,
                                            std::vector<double> grid, std::uint64_t seed,
                                            std::size_t replications,
                                            const std::vector<double>& probe_times = {},
                                            unsigned threads = 1);

}  // namespace records
