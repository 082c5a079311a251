#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <ostream>
#include <utility>
#include <vector>

#include "records/sequences.hpp"
#include "records/threshold_scheme.hpp"

namespace records {

struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  static Interval point(double x) { return {x, x}; }
  double width() const { return hi - lo; }
  bool contains(double x, double slack = 0.0) const { return x >= lo - slack && x <= hi + slack; }
  /// Largest distance from x to an endpoint.
  double deviation_from(double x) const;
};

Interval operator+(Interval a, Interval b);
Interval operator+(Interval a, double b);
/// Scaling by a non-negative factor.
Interval operator*(double k, Interval a);

/// Record-indicator law at (m, n) for a flat threshold with F(l) = h.
/// b_m = P(I_m = 1, M_m <= l) and c_{m,n} = P(I_m = I_n = 1, M_n <= l) are
/// scheme dependent; they are intervals unless supplied exactly.
struct JointRecordLaw {
  std::size_t m = 0;
  std::size_t n = 0;
  double h = 0.0;
  double P1 = 0.0;
  Interval P2;
  Interval b_m;
  Interval b_n;
  Interval c_mn;
  Interval marginal_m;
  Interval marginal_n;
  Interval joint;
  /// P(I_n = 1 | I_m = 1) / P(I_n = 1) over the whole box of unknowns.
  Interval ratio;
};

struct KnownTerms {
  std::optional<double> b_m;
  std::optional<double> b_n;
  std::optional<double> c_mn;
};

JointRecordLaw joint_record_law(const AlphaSequence& alpha, double h, std::size_t m,
                                std::size_t n, const KnownTerms& known = {});

/// Pure-scheme values of b_m, b_n and c_{m,n}: (a_m/s_m) h^{s_m}, ... .
KnownTerms pure_scheme_terms(const AlphaSequence& alpha, double h, std::size_t m, std::size_t n);

/// (s_k^2 / a_k) max(a_k, 1) h^{s_k}, evaluated in logs.
double theorem3_condition(const AlphaSequence& alpha, double h, std::size_t k);

struct RatioBound {
  Interval ratio;
  /// Enclosure from the mean-value bounds on the normalised P1, P2 and c terms.
  Interval derived;
  double halfwidth() const { return ratio.deviation_from(1.0); }
  double derived_halfwidth() const { return derived.deviation_from(1.0); }
};

/// Throws DegenerateDenominator when a marginal lower bound is not positive.
RatioBound ratio_bound(const AlphaSequence& alpha, double h, std::size_t m, std::size_t n);

struct SupRatioRow {
  std::size_t k = 0;
  double sup_halfwidth = 0.0;
  double sup_derived = 0.0;
  double condition = 0.0;
};

/// sup over k <= m < n <= N of the ratio half-width, for each k.
std::vector<SupRatioRow> sup_ratio_decay(const AlphaSequence& alpha, double h,
                                         const std::vector<std::size_t>& k_list, std::size_t N);

struct AssemblyRow {
  std::size_t m = 0;
  std::size_t n = 0;
  double P1 = 0.0;
  /// Monte Carlo P(I_m = I_n = 1), P2 and c_{m,n} from the same paths.
  double joint = 0.0;
  double P2 = 0.0;
  double c = 0.0;
  /// mean and s.e. of 1{both} - 1{P2 event} - 1{c event} - P1
  double residual = 0.0;
  double residual_se = 0.0;
  /// mean and s.e. of 1{P2 event} - kappa * 1{I_m = 1, M_m <= l}
  double p2_residual = 0.0;
  double p2_se = 0.0;

  bool passes(double k = 4.0) const {
    return std::abs(residual) <= k * residual_se + 1e-15 && std::abs(p2_residual) <= k * p2_se + 1e-15;
  }
};

/// Monte Carlo check of the joint record law of a threshold scheme with
/// independent X, a flat finite level and no perturbation above it.
/// Throws WrongRegime for other schemes and IndexOrder for bad pairs.
std::vector<AssemblyRow> joint_assembly(const ThresholdSchemeSpec& spec,
                                        const std::vector<std::pair<std::size_t, std::size_t>>& pairs,
                                        std::size_t replications, std::uint64_t seed,
                                        unsigned threads = 1);

/// CSV with columns m, n, P1, joint_lo, joint_hi, ratio_lo, ratio_hi.
void write_joint_csv(std::ostream& os, const std::vector<JointRecordLaw>& rows);

}  // namespace records
