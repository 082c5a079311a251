#pragma once

#include <string>

namespace records {

/// Asymptotic shape of a positive sequence or function of t -> infinity:
///
///   coef * exp(exp_rate * t^exp_power) * t^pow_t * (ln t)^pow_log * (ln ln t)^pow_loglog
///
/// `exact` means the shape is the quantity itself for all large t (not just
/// asymptotically equivalent to it). The criteria module uses these shapes to
/// decide convergence of the growth-rate functionals by integral comparison.
struct GrowthForm {
  double coef = 1.0;
  double exp_rate = 0.0;
  double exp_power = 1.0;
  double pow_t = 0.0;
  double pow_log = 0.0;
  double pow_loglog = 0.0;
  bool exact = true;

  static GrowthForm constant(double c, bool exact = true);
  static GrowthForm power(double coef, double pow_t, bool exact = true);

  enum class Limit { Zero, Positive, Infinite };

  /// Value at t; logs are evaluated literally so callers should stay at t > e.
  double operator()(double t) const;
  Limit limit() const;
  bool is_zero() const { return coef == 0.0; }
  bool has_exp_part() const { return exp_rate != 0.0; }

  std::string describe() const;
};

GrowthForm operator*(const GrowthForm& a, const GrowthForm& b);

enum class SeriesBehaviour { Converges, Diverges, Undetermined };

std::string to_string(SeriesBehaviour b);

/// Decides whether sum_n prefactor(n) * exp(-exponent(n)) converges, by
/// integral comparison on the iterated-logarithm scale. Returns Undetermined
/// only on a coefficient borderline where `exponent` is not exact.
SeriesBehaviour exp_weighted_series(const GrowthForm& prefactor, const GrowthForm& exponent);

}  // namespace records
