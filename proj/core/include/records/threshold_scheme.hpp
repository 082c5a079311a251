#pragma once

#include <cstddef>
#include <cstdint>
#include <nlohmann/json.hpp>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "records/criteria.hpp"
#include "records/distribution.hpp"
#include "records/falpha.hpp"
#include "records/sequences.hpp"

namespace records {

enum class BelowKind { Vee, TailExact, Perturbed };
enum class VeeLaw { Constant, Iid, Markov };

std::string to_string(BelowKind k);
std::string to_string(VeeLaw l);

/// X_n = V_n v Y_n with V_n <= l_n and Y_n from the F^alpha scheme.
///
///   constant  V_n = l_n - offset
///   iid       V_n = l_n - offset - spread * E_n,  E_n ~ Exp(1) i.i.d.
///   markov    V_n = l_n - offset - spread * Z_n,  Z_n = rho Z_{n-1} + (1 - rho) E_n
struct VeeModel {
  VeeLaw law = VeeLaw::Constant;
  double offset = 0.0;
  double spread = 1.0;
  double rho = 0.9;
};

/// F_n = (1 - eps_n) F^{alpha_n} + eps_n Delta with eps_n = eps0 n^{-decay}.
struct PerturbedModel {
  std::optional<Distribution> delta;
  double eps0 = 0.1;
  double decay = 2.0;
  /// Bound for sum_{n > n_max} delta_n; derived from eps_n when omitted.
  std::optional<double> declared_tail;
};

struct ThresholdSchemeSpec {
  ThresholdSchemeSpec(Distribution F_, AlphaSequence alpha_, ThresholdSequence levels_)
      : F(std::move(F_)), alpha(std::move(alpha_)), levels(std::move(levels_)) {}

  Distribution F;
  AlphaSequence alpha;
  ThresholdSequence levels;
  BelowKind below = BelowKind::Vee;
  VeeModel vee;
  /// Law used below l_n by the tail_exact model (conditioned on (-inf, l_n]).
  std::optional<Distribution> below_law;
  PerturbedModel perturbed;

  /// Observations are mutually independent (false for Markov V).
  bool independent() const;
  /// delta_n = 0 for every n by construction.
  bool exact_above_threshold() const;
  /// eps_n of the perturbed model (0 otherwise).
  double mixture_weight(std::size_t n) const;
  std::string describe() const;
};

struct CoupledTrajectory {
  Trajectory x;     // threshold scheme
  Trajectory pure;  // F^alpha scheme on the same uniforms
  std::vector<double> levels;
  /// First index from which (M, I) agree through the horizon.
  std::optional<std::size_t> agreement_start;
  /// Finite-horizon versions of the diagnostic times T1 <= T2 < T3.
  std::optional<std::size_t> T1, T2, T3;
  /// First n with M_n > l_n (threshold scheme).
  std::optional<std::size_t> first_exceedance;
};

/// Threshold scheme and its pure partner driven by common Primary-lane
/// uniforms; the below-threshold parts use the BelowLevel and Mixture lanes.
class CoupledSampler {
 public:
  CoupledSampler(ThresholdSchemeSpec spec, std::size_t horizon, std::uint64_t seed);

  const ThresholdSchemeSpec& spec() const noexcept { return spec_; }
  std::size_t horizon() const noexcept { return alphas_.size(); }
  CoupledTrajectory sample(std::uint64_t rep) const;
  void sample_into(std::uint64_t rep, CoupledTrajectory& out) const;

 private:
  ThresholdSchemeSpec spec_;
  std::vector<double> alphas_;
  std::vector<double> levels_;
  std::vector<double> log_thresholds_;  // alpha_n log F(l_n)
  std::vector<double> log_below_at_level_;
  CounterRng rng_;
};

CoupledTrajectory sample_coupled(const ThresholdSchemeSpec& spec, std::size_t n, std::uint64_t seed,
                                 std::uint64_t rep);

struct CheckpointFraction {
  std::size_t n = 0;
  /// Paths whose agreement has not started by step n.
  double fraction = 0.0;
  double std_error = 0.0;
  /// P(M_n <= l) plus the total mismatch mass sum_k delta'_k (flat levels).
  std::optional<double> bound;
  /// P(M_n <= l) + sum_{k>n} delta'_k. Not a bound once delta > 0: mismatches
  /// before n can keep a path unagreed. Reported for comparison only.
  std::optional<double> tail_guide;
};

struct CouplingReport {
  std::size_t replications = 0;
  std::size_t horizon = 0;
  std::size_t agreed = 0;
  double unagreed_fraction = 0.0;
  /// Quantiles 0.5, 0.9, 0.99 and the max of agreement_start over agreed paths.
  std::vector<std::pair<double, double>> quantiles;
  std::vector<CheckpointFraction> checkpoints;
  /// Flat threshold with delta = 0 only: pathwise identity and agreement persistence checks.
  std::optional<std::size_t> identity_violations;
  std::optional<std::size_t> agreement_violations;

  nlohmann::json to_json() const;
};

CouplingReport coupling_time_distribution(const ThresholdSchemeSpec& spec, std::size_t n,
                                          std::uint64_t seed, std::size_t replications,
                                          const std::vector<std::size_t>& checkpoints = {},
                                          unsigned threads = 1);

/// Exact mismatch probability of the implemented coupling above l_n.
double coupling_mismatch(const ThresholdSchemeSpec& spec, std::size_t n);

struct C2Report {
  bool c1 = false;
  bool clause_i = false;
  bool clause_ii = false;
  bool clause_iii = false;
  bool clause_iv = false;
  double delta_partial = 0.0;
  double delta_tail = 0.0;
  std::string violated;  // empty when every clause holds
  std::vector<std::string> notes;
  CriterionVerdict verdict_iv;

  bool passed() const { return violated.empty(); }
  nlohmann::json to_json() const;
};

/// Evaluates every clause without throwing.
C2Report assess_C2(const ThresholdSchemeSpec& spec, std::size_t n_max);
/// As assess_C2, throwing CertificationFailed naming the first violated clause.
C2Report certify_C2(const ThresholdSchemeSpec& spec, std::size_t n_max);

void write_coupled_csv(std::ostream& os, const CoupledTrajectory& t);

}  // namespace records
