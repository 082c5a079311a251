#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <ostream>
#include <string>
#include <vector>

#include "records/distribution.hpp"
#include "records/rng.hpp"
#include "records/sequences.hpp"

namespace records {

/// One realisation up to a horizon. Index 0 holds step 1.
struct Trajectory {
  std::size_t horizon = 0;
  std::vector<double> X;
  std::vector<double> M;
  std::vector<std::uint8_t> I;
  std::vector<std::uint32_t> N;
  /// Optional order key, monotone in X (log F(X) for the F^alpha sampler).
  /// Records are ranked on it when sized; it separates draws whose values
  /// round to the same double near a bounded upper endpoint.
  std::vector<double> key;
  std::uint64_t seed = 0;
  std::uint64_t rep = 0;

  void resize(std::size_t n);
  /// Fills M, I and N from X (ranked by key when present).
  void finish();
};

/// Draws of the F^alpha scheme: X_k = F^{<-}(U_k^{1/alpha_k}), with U_k from
/// the Primary lane of (seed, rep, k). The weights are tabulated once so one
/// sampler serves any number of replications.
class FalphaSampler {
 public:
  FalphaSampler(Distribution F, const AlphaSequence& alpha, std::size_t horizon,
                std::uint64_t seed);

  std::size_t horizon() const noexcept { return alphas_.size(); }
  const Distribution& distribution() const noexcept { return F_; }
  std::uint64_t seed() const noexcept { return rng_.seed(); }

  /// X_k for a single step, 1 <= k <= horizon.
  double value(std::uint64_t rep, std::size_t k) const;
  Trajectory sample(std::uint64_t rep) const;
  void sample_into(std::uint64_t rep, Trajectory& out) const;

 private:
  Distribution F_;
  std::vector<double> alphas_;
  CounterRng rng_;
};

/// X = F^{<-}(u^{1/a}) with the power taken in log space.
double sample_power(const Distribution& F, double a, double u);

Trajectory sample_falpha(const Distribution& F, const AlphaSequence& alpha, std::size_t n,
                         std::uint64_t seed, std::uint64_t rep);

/// p_n = alpha_n / s_n, stable for weights that overflow double.
double record_probability(const AlphaSequence& alpha, std::size_t n);
/// p_1, ..., p_n (index 0 holds p_1).
std::vector<double> record_probabilities(const AlphaSequence& alpha, std::size_t n);

struct RecordLawSummary {
  std::vector<double> p;
  std::vector<double> E;
  std::vector<double> V;
};

RecordLawSummary record_law_summary(const AlphaSequence& alpha, std::size_t n);

inline constexpr std::size_t kMaxPmfHorizon = 100000;

/// Exact law of the record count after n steps, as a Poisson-binomial
/// convolution. Entry k is P(count = k), k = 0..n (entry 0 is always 0).
std::vector<double> exact_count_pmf(const AlphaSequence& alpha, std::size_t n);
/// Same, from explicit success probabilities.
std::vector<double> poisson_binomial_pmf(const std::vector<double>& p);

enum class PLimit { Zero, One, Interior, NoLimit };
std::string to_string(PLimit l);

struct AsymptoticStatement {
  std::string id;       // "A1" .. "A4"
  bool applies = false;
  std::string claim;
  std::string limit;    // predicted limit object
};

struct AsymptoticReport {
  bool c1 = false;
  PLimit p_limit = PLimit::NoLimit;
  double p_limit_value = std::numeric_limits<double>::quiet_NaN();
  bool variance_finite = false;
  std::vector<AsymptoticStatement> statements;
};

/// Regime of the record count: C1, lim p_n, lim V_n and which of the
/// classical asymptotic statements apply. Tables need declared limits
/// (Undecidable otherwise).
AsymptoticReport classify_asymptotics(const AlphaSequence& alpha);

void write_trajectory_csv(std::ostream& os, const Trajectory& t);
void write_pmf_csv(std::ostream& os, const std::vector<double>& pmf);

}  // namespace records
