#pragma once

#include <filesystem>
#include <functional>
#include <limits>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace records {

enum class Family { Uniform, Exponential, Pareto, Gumbel, Table, Custom };

/// User-supplied distribution function. `density` may be left empty.
struct CustomCdf {
  std::function<double(double)> cdf;
  std::function<double(double)> density;
  double lower_support = -std::numeric_limits<double>::infinity();
  double upper_endpoint = std::numeric_limits<double>::infinity();
  bool continuous = true;
  std::string name = "custom";
};

/// A distribution function F, optionally raised to a positive power.
///
/// Built-in families:
///   uniform      F(x) = x on [0, 1]
///   exponential  F(x) = 1 - exp(-rate x), x >= 0
///   pareto       F(x) = 1 - x^{-shape}, x >= 1
///   gumbel       F(x) = exp(-exp(-x))
///   table        piecewise-linear interpolation of (x_i, F_i) knots
///
/// `power(a)` returns the distribution with d.f. F^a; every evaluation of a
/// power goes through exp(a * log F) so very large exponents neither
/// underflow nor lose the right tail. Values are immutable and cheap to copy.
class Distribution {
 public:
  static Distribution uniform();
  static Distribution exponential(double rate = 1.0);
  static Distribution pareto(double shape);
  static Distribution gumbel();
  /// Knots must have strictly increasing x, non-decreasing F in [0, 1] and
  /// end at F = 1. The d.f. is 0 left of the first knot.
  static Distribution table(std::vector<double> x, std::vector<double> cdf);
  /// Two-column CSV (x, F(x)); a non-numeric first line is treated as header.
  static Distribution table_from_csv(const std::filesystem::path& path);
  static Distribution custom(CustomCdf spec);

  Distribution power(double exponent) const;

  Family family() const;
  double exponent() const noexcept { return exponent_; }
  /// Family parameter (rate for exponential, shape for pareto), NaN otherwise.
  double parameter() const;
  std::string describe() const;

  double cdf(double x) const;
  double log_cdf(double x) const;
  /// 1 - cdf(x), evaluated without cancellation in the right tail.
  double survival(double x) const;
  bool has_density() const;
  double density(double x) const;

  /// Generalized inverse inf{x : F(x) >= u}, u in (0, 1).
  double quantile(double u) const;
  /// quantile(exp(log_u)) for log_u < 0, evaluated without forming exp(log_u)
  /// where the family allows it.
  double quantile_from_log(double log_u) const;
  /// quantile(1 - q), accurate for small q.
  double upper_quantile(double q) const;

  /// x0 = inf{x : F(x) > 0}.
  double lower_support() const;
  /// F^{<-}(1-) = sup{x : F(x) < 1}.
  double upper_endpoint() const;
  bool is_continuous() const;
  /// Interpolation knots of a table family (empty otherwise).
  std::span<const double> knots() const;

  /// True when both describe the same measure for certain (same built-in
  /// family, parameters and power, or the same shared table/custom object).
  bool identical_to(const Distribution& other) const;

  struct Base;

 private:
  Distribution(std::shared_ptr<const Base> base, double exponent)
      : base_(std::move(base)), exponent_(exponent) {}

  std::shared_ptr<const Base> base_;
  double exponent_ = 1.0;
};

/// F^a(x) computed as exp(a log F(x)); 0 where F(x) = 0.
double power_cdf(const Distribution& F, double a, double x);

/// Shared bisection for the generalized inverse; absolute tolerance 1e-12,
/// relative once |x| > 1. Throws NonConvergence when the d.f. cannot be
/// bracketed or the iteration cap is hit.
double bisect_quantile(const std::function<double(double)>& log_cdf, double log_u,
                       double lower, double upper);

}  // namespace records
