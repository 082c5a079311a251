#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "records/falpha.hpp"
#include "records/sequences.hpp"

namespace records {

struct McEstimate {
  double point = 0.0;
  double std_error = 0.0;
  std::size_t replications = 0;
  std::uint64_t seed = 0;

  bool covers(double truth, double k = 4.0) const {
    return std::abs(point - truth) <= k * std_error + 1e-15;
  }
  nlohmann::json to_json() const;
};

/// Fills a trajectory for replication `rep`. Lets one harness drive the pure
/// scheme, either half of a coupled scheme, or a hand-built source.
using TrajectorySource = std::function<void(std::uint64_t rep, Trajectory& out)>;

TrajectorySource falpha_source(const FalphaSampler& sampler);

/// Mean of pred over replications 0..R-1, with its binomial standard error.
McEstimate estimate_indicator_prob(const TrajectorySource& source,
                                   const std::function<bool(const Trajectory&)>& pred,
                                   std::size_t replications, std::uint64_t seed,
                                   unsigned threads = 1);

inline constexpr std::array<double, 3> kTestLevels{0.10, 0.05, 0.01};

struct TestReport {
  std::string name;
  double statistic = 0.0;
  /// Critical values at the 10%, 5% and 1% levels.
  std::array<double, 3> critical{};
  std::size_t sample_size = 0;

  bool rejects(double level = 0.05) const;
  nlohmann::json to_json() const;
};

/// Pearson chi-square test of independence for a 2x2 table
/// (n11 = both ones). Throws CellTooSmall when an expected count is below 5.
TestReport chi2_2x2(std::size_t n11, std::size_t n10, std::size_t n01, std::size_t n00);

struct PairwiseChi2 {
  std::size_t m = 0;
  std::size_t n = 0;
  TestReport test;
};

struct Chi2Battery {
  std::vector<PairwiseChi2> pairs;
  /// Pairs left out because an expected cell fell below 5.
  std::vector<std::pair<std::size_t, std::size_t>> too_small;
  std::size_t rejected = 0;
  /// Rejection rate at the 5% level and its binomial standard error.
  double rejection_rate = 0.0;
  double std_error = 0.0;
  nlohmann::json to_json() const;
};

/// Indicator independence of (I_m, I_n) for each pair, from R replications.
/// Pairs whose table has an expected count below 5 are set aside in
/// `too_small`; the rate is over the tested pairs only.
Chi2Battery chi2_pairwise(const TrajectorySource& source, std::size_t horizon,
                          const std::vector<std::pair<std::size_t, std::size_t>>& pairs,
                          std::size_t replications, unsigned threads = 1);

/// All pairs 2 <= m < n <= n_max (I_1 is constant, so m = 1 has no table).
std::vector<std::pair<std::size_t, std::size_t>> all_pairs(std::size_t m_min, std::size_t n_max);

/// Asymptotic Kolmogorov-Smirnov tests.
TestReport ks_one_sample(std::vector<double> sample, const std::function<double(double)>& cdf);
TestReport ks_two_sample(std::vector<double> a, std::vector<double> b);

struct PmfComparison {
  double tv = 0.0;
  /// Sampling-error bound for the TV of an R-sample empirical law.
  double bound = 0.0;
  bool within() const { return tv <= bound; }
};

/// Half the L1 distance between a histogram (counts, indexed as the pmf)
/// and an exact pmf. Throws SupportMismatch when the histogram has entries
/// beyond the pmf support vector.
PmfComparison pmf_tv_compare(const std::vector<std::size_t>& counts, const std::vector<double>& pmf);
/// Analytic input: an exact law on both sides, bound 0.
PmfComparison pmf_tv_compare(const std::vector<double>& law, const std::vector<double>& pmf);

struct CltRow {
  std::size_t n = 0;
  double mean = 0.0;
  double variance = 0.0;
  double ks = 0.0;
};

/// Kolmogorov distance between the exact standardised record count and the
/// standard normal. Throws WrongRegime when the variance stays bounded.
std::vector<CltRow> clt_diagnostic(const AlphaSequence& alpha, const std::vector<std::size_t>& n_list);

struct DeviationRow {
  std::size_t n = 0;
  double mean = 0.0;
  /// (p, quantile of count - mean)
  std::vector<std::pair<double, double>> quantiles;
};

/// Exact quantiles of the centred record count (no Monte Carlo).
std::vector<DeviationRow> deviation_quantiles(const AlphaSequence& alpha,
                                              const std::vector<std::size_t>& n_list,
                                              const std::vector<double>& probs);

struct AsRow {
  std::size_t n0 = 0;
  /// Quantiles (p, value) of sup_{n >= n0} |N_n / E_n - 1|.
  std::vector<std::pair<double, double>> ratio_dev;
  /// Quantiles (p, value) of sup_{n >= n0} |N_n - E_n| / ln s_n.
  std::vector<std::pair<double, double>> log_dev;
};

struct AsDiagnostic {
  std::vector<AsRow> rows;
  std::size_t replications = 0;
  std::size_t horizon = 0;
  std::string label = "consistent with a.s. convergence";
  /// Median sup deviations decrease along n0.
  bool decreasing = false;
  nlohmann::json to_json() const;
};

/// Finite-horizon monotone-decay profile at n0 in {horizon/10, horizon/4,
/// horizon/2}. Needs C1 (WrongRegime otherwise).
AsDiagnostic as_convergence_diagnostic(const TrajectorySource& source, const AlphaSequence& alpha,
                                       std::size_t horizon, std::size_t replications,
                                       unsigned threads = 1);

double normal_cdf(double x);

}  // namespace records
