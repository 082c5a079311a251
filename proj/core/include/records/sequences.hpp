#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "records/distribution.hpp"
#include "records/growth_form.hpp"

namespace records {

enum class AlphaFamily { Constant, Geometric, Polynomial, ExpPower, Table };

/// Limits a user table cannot derive on its own; closed-form families ignore
/// these and answer analytically.
struct DeclaredLimits {
  std::optional<bool> c1;
  /// lim p_n; set `p_has_limit = false` when p_n oscillates.
  std::optional<double> lim_p;
  bool p_has_limit = true;
  std::optional<bool> variance_finite;
  std::optional<GrowthForm> term_form;
  std::optional<GrowthForm> sum_form;
};

/// Positive weights alpha_n (n >= 1) with partial sums s_n, s_0 = 0.
///
/// Families: constant c, geometric r^n, polynomial n^theta,
/// exp_power exp(c n^kappa) and finite user tables.
class AlphaSequence {
 public:
  static AlphaSequence constant(double c = 1.0);
  static AlphaSequence geometric(double r);
  static AlphaSequence polynomial(double theta);
  static AlphaSequence exp_power(double c, double kappa);
  static AlphaSequence table(std::vector<double> terms, DeclaredLimits declared = {});

  AlphaFamily family() const noexcept { return family_; }
  double first_parameter() const noexcept { return a_; }
  double second_parameter() const noexcept { return b_; }
  std::string describe() const;

  double term(std::size_t n) const;
  /// Closed form where one exists, compensated summation otherwise.
  double partial_sum(std::size_t n) const;
  /// s_0, ..., s_n by Neumaier summation.
  std::vector<double> partial_sums(std::size_t n) const;
  /// alpha_1, ..., alpha_n (index 0 holds alpha_1).
  std::vector<double> terms(std::size_t n) const;
  /// Number of available terms (tables only).
  std::optional<std::size_t> length() const;

  /// lim s_n = infinity.
  std::optional<bool> c1() const;
  std::optional<GrowthForm> term_form() const;
  std::optional<GrowthForm> sum_form() const;
  const DeclaredLimits& declared() const noexcept { return declared_; }

 private:
  AlphaSequence(AlphaFamily f, double a, double b) : family_(f), a_(a), b_(b) {}

  AlphaFamily family_;
  double a_ = 0.0;
  double b_ = 0.0;
  std::shared_ptr<const std::vector<double>> table_;
  DeclaredLimits declared_;
};

enum class ThresholdFamily { NegInfinity, Flat, LogScaled, TailQuantile, Table };

/// Threshold levels l_n, n >= 1.
///
///   neg_infinity  l_n = -inf (the threshold never binds)
///   flat          l_n = l
///   log_scaled    l_n = a ln n + b
///   tail_quantile l_n = F^{<-}(1 - q_n), q_n = shape(max(n, start))
///   table         user values
class ThresholdSequence {
 public:
  static ThresholdSequence neg_infinity();
  static ThresholdSequence flat(double level);
  static ThresholdSequence log_scaled(double a, double b);
  static ThresholdSequence tail_quantile(const Distribution& F, GrowthForm q, std::size_t start);
  static ThresholdSequence table(std::vector<double> levels,
                                 std::optional<GrowthForm> declared_tail = std::nullopt);

  ThresholdFamily family() const noexcept { return family_; }
  double first_parameter() const noexcept { return a_; }
  double second_parameter() const noexcept { return b_; }
  std::string describe() const;

  double level(std::size_t n) const;
  /// q_n = 1 - F(l_n), accurate in the tail.
  double tail(const Distribution& F, std::size_t n) const;
  std::vector<double> levels(std::size_t n) const;

  /// Family-level guarantee that l_{n+1} >= l_n.
  bool monotone_flag() const;
  /// Checks l_{n+1} >= l_n for n < n_max.
  bool check_monotone(std::size_t n_max) const;
  bool is_neg_infinity() const noexcept { return family_ == ThresholdFamily::NegInfinity; }
  bool is_flat() const noexcept {
    return family_ == ThresholdFamily::Flat || family_ == ThresholdFamily::NegInfinity;
  }

  /// Asymptotic shape of q_n under F when it can be derived analytically.
  std::optional<GrowthForm> tail_form(const Distribution& F) const;

 private:
  ThresholdSequence(ThresholdFamily f, double a, double b) : family_(f), a_(a), b_(b) {}

  ThresholdFamily family_;
  double a_ = 0.0;
  double b_ = 0.0;
  std::size_t start_ = 1;
  std::optional<Distribution> dist_;
  std::optional<GrowthForm> form_;
  std::shared_ptr<const std::vector<double>> table_;
};

/// Shape of 1 - F(a ln t + b) as t -> infinity for the built-in families.
std::optional<GrowthForm> log_scaled_tail_form(const Distribution& F, double a, double b);

}  // namespace records
