#include "records/extremal.hpp"

#include <algorithm>
#include <cmath>

#include "records/csv.hpp"
#include "records/error.hpp"
#include "records/falpha.hpp"
#include "records/parallel.hpp"

namespace records {

ExtremalSampler::ExtremalSampler(Distribution F, std::vector<double> times, std::uint64_t seed)
    : F_(std::move(F)), times_(std::move(times)), rng_(seed) {
  require(!times_.empty(), ErrorCode::InvalidArgument, "extremal path needs at least one time");
  double prev = 0.0;
  spacings_.reserve(times_.size());
  for (double t : times_) {
    require(std::isfinite(t) && t > prev, ErrorCode::InvalidArgument,
            "extremal times must be positive and strictly increasing");
    spacings_.push_back(t - prev);
    prev = t;
  }
}

void ExtremalSampler::sample_into(std::uint64_t rep, ExtremalPath& out) const {
  out.times = times_;
  out.levels.resize(times_.size());
  out.seed = rng_.seed();
  out.rep = rep;
  double running = -std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < spacings_.size(); ++j) {
    const double u = rng_.uniform(rep, j + 1, Lane::Extremal);
    running = std::max(running, sample_power(F_, spacings_[j], u));
    out.levels[j] = running;
  }
}

ExtremalPath ExtremalSampler::sample(std::uint64_t rep) const {
  ExtremalPath p;
  sample_into(rep, p);
  return p;
}

ExtremalPath sample_extremal(const Distribution& F, const std::vector<double>& times,
                             std::uint64_t seed, std::uint64_t rep) {
  return ExtremalSampler(F, times, seed).sample(rep);
}

std::vector<double> geometric_grid(double t0, double horizon, std::size_t points) {
  require(t0 > 0.0 && horizon >= t0 && points >= 1, ErrorCode::InvalidArgument,
          "geometric grid needs 0 < t0 <= horizon and at least one point");
  if (points == 1 || horizon == t0) return {horizon};
  std::vector<double> g(points);
  const double step = std::log(horizon / t0) / static_cast<double>(points - 1);
  for (std::size_t i = 0; i < points; ++i) g[i] = t0 * std::exp(step * static_cast<double>(i));
  g.back() = horizon;
  g.erase(std::unique(g.begin(), g.end()), g.end());
  return g;
}

namespace {

struct CrossingChunk {
  std::vector<double> last;
  std::vector<std::size_t> below;  // per probe, then the horizon
};

}  // namespace

LastCrossingReport last_crossing_statistics(const Distribution& F, const BoundaryFunction& b,
                                            std::vector<double> grid, std::uint64_t seed,
                                            std::size_t replications,
                                            const std::vector<double>& probe_times,
                                            unsigned threads) {
  require(replications >= 1, ErrorCode::InvalidArgument, "need at least one replication");
  grid.insert(grid.end(), probe_times.begin(), probe_times.end());
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  const ExtremalSampler sampler(F, grid, seed);
  std::vector<double> bt(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) bt[i] = b(grid[i]);
  std::vector<std::size_t> probe_idx;
  for (double t : probe_times)
    probe_idx.push_back(static_cast<std::size_t>(
        std::lower_bound(grid.begin(), grid.end(), t) - grid.begin()));
  probe_idx.push_back(grid.size() - 1);

  const auto chunks = map_chunks<CrossingChunk>(replications, threads, [&](std::size_t lo, std::size_t hi) {
    CrossingChunk c;
    c.below.assign(probe_idx.size(), 0);
    ExtremalPath p;
    for (std::size_t r = lo; r < hi; ++r) {
      sampler.sample_into(r, p);
      double last = 0.0;
      for (std::size_t i = grid.size(); i-- > 0;)
        if (p.levels[i] <= bt[i]) {
          last = grid[i];
          break;
        }
      c.last.push_back(last);
      for (std::size_t j = 0; j < probe_idx.size(); ++j)
        c.below[j] += p.levels[probe_idx[j]] <= bt[probe_idx[j]];
    }
    return c;
  });

  LastCrossingReport rep;
  rep.replications = replications;
  rep.horizon = grid.back();
  std::vector<std::size_t> below(probe_idx.size(), 0);
  for (const auto& c : chunks) {
    rep.last_crossing.insert(rep.last_crossing.end(), c.last.begin(), c.last.end());
    for (std::size_t j = 0; j < below.size(); ++j) below[j] += c.below[j];
  }
  const double R = static_cast<double>(replications);
  const auto frac = [&](std::size_t count) {
    const double f = static_cast<double>(count) / R;
    return std::pair{f, std::sqrt(f * (1.0 - f) / R)};
  };
  for (std::size_t j = 0; j + 1 < probe_idx.size(); ++j) {
    const auto [f, se] = frac(below[j]);
    rep.probes.push_back({probe_times[j], f, se});
  }
  std::tie(rep.fraction_below_at_horizon, rep.std_error) = frac(below.back());
  auto sorted = rep.last_crossing;
  std::sort(sorted.begin(), sorted.end());
  for (double q : {0.5, 0.9, 0.99, 1.0}) {
    const auto idx = static_cast<std::size_t>(std::ceil(q * R)) - 1;
    rep.last_crossing_quantiles.emplace_back(q, sorted[std::min(idx, sorted.size() - 1)]);
  }
  return rep;
}

nlohmann::json LastCrossingReport::to_json() const {
  nlohmann::json j;
  j["replications"] = replications;
  j["horizon"] = horizon;
  j["fraction_below_at_horizon"] = fraction_below_at_horizon;
  j["std_error"] = std_error;
  nlohmann::json q = nlohmann::json::object();
  for (const auto& [p, v] : last_crossing_quantiles) q[format_double(p)] = v;
  j["last_crossing_quantiles"] = q;
  nlohmann::json pr = nlohmann::json::array();
  for (const auto& p : probes)
    pr.push_back({{"t", p.t}, {"fraction_below", p.fraction_below}, {"std_error", p.std_error}});
  j["probes"] = pr;
  return j;
}

}  // namespace records
