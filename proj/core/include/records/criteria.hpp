#pragma once

#include <cstddef>
#include <limits>
#include <nlohmann/json.hpp>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "records/boundary.hpp"
#include "records/distribution.hpp"
#include "records/growth_form.hpp"
#include "records/sequences.hpp"

namespace records {

/// Partial value of a growth functional plus what is known about the rest.
struct SeriesEstimate {
  double partial = 0.0;
  /// Estimate of the remainder beyond the horizon (infinite when unknown).
  double tail = std::numeric_limits<double>::infinity();
  /// "exact-form" when every shape involved is exact (the tail is then an
  /// integral-comparison bound), "asymptotic-form" otherwise, "none" without
  /// shapes.
  std::string tail_label = "none";
  /// Convergence proved from the shapes and the tail estimate is finite.
  bool tail_certified = false;
  SeriesBehaviour behaviour = SeriesBehaviour::Undetermined;
  double horizon = 0.0;
  /// (index or time, partial value) at roughly log-spaced points.
  std::vector<std::pair<double, double>> trace;
};

struct IntegralOptions {
  double t_start = 0.0;
  /// Shape of g_t = 1 - F(b_t); taken from the boundary when omitted.
  std::optional<GrowthForm> g_form;
  std::size_t trace_points = 64;
};

/// J(b) = integral of g_t exp(-t g_t) dt from t_start to horizon, by adaptive
/// Gauss-Kronrod quadrature split at the boundary's jumps, with a tail
/// estimate from the shape of g. Throws TailUnbounded when horizon * g at
/// the horizon is below 1.
SeriesEstimate J_integral(const Distribution& F, const BoundaryFunction& b, double horizon,
                          const IntegralOptions& opts = {});

struct SumOptions {
  /// Shape of q_n (K) or g_n (Klass).
  std::optional<GrowthForm> form;
  std::size_t trace_points = 64;
};

/// K = sum_n exp(-s_n q_n) (1 - exp(-alpha_{n+1} q_n)) over the given q_1..q_N.
SeriesEstimate K_sum(const AlphaSequence& alpha, std::span<const double> q,
                     const SumOptions& opts = {});

/// Klass's sum: sum_n g_n exp(-n g_n) over the given g_1..g_N.
SeriesEstimate klass_sum(std::span<const double> g, const SumOptions& opts = {});

enum class Verdict { One, Zero, Undecided };
enum class FiredCase { None, II, III, IVConverge, IVDiverge };
std::string to_string(Verdict v);
std::string to_string(FiredCase c);

struct CriterionVerdict {
  Verdict verdict = Verdict::Undecided;
  FiredCase fired_case = FiredCase::None;
  nlohmann::json evidence;
  std::vector<std::pair<double, double>> trace;

  nlohmann::json to_json() const;
};

struct ClassifyOptions {
  /// Declared shape of q_n (or g_t) for inputs without an analytic one.
  std::optional<GrowthForm> declared_form;
  std::size_t trace_points = 64;
};

/// Eventual exceedance P(M_n > l_n ev.) for the F^alpha scheme via K(l).
CriterionVerdict classify_growth(const Distribution& F, const AlphaSequence& alpha,
                                 const ThresholdSequence& levels, std::size_t horizon,
                                 const ClassifyOptions& opts = {});

/// Eventual exceedance P(M_t > b_t ev.) for the extremal process via J(b).
CriterionVerdict classify_growth(const Distribution& F, const BoundaryFunction& b, double horizon,
                                 const ClassifyOptions& opts = {});

/// The i.i.d. case decided through Klass's sum with g_n = 1 - F(l_n).
CriterionVerdict classify_klass(const Distribution& F, const ThresholdSequence& levels,
                                std::size_t horizon, const ClassifyOptions& opts = {});

/// Integral of P(t) exp(-X(t)) over [from, inf) for shapes P and X.
double form_tail_integral(const GrowthForm& prefactor, const GrowthForm& exponent, double from);

void write_trace_csv(std::ostream& os, const std::vector<std::pair<double, double>>& trace,
                     const std::string& index_name = "n");

}  // namespace records
