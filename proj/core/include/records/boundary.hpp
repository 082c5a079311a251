#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "records/distribution.hpp"
#include "records/growth_form.hpp"
#include "records/sequences.hpp"

namespace records {

enum class BoundaryKind { Step, Analytic, LogScaled, Table, Envelope };

/// A boundary t -> b_t on (0, infinity).
class BoundaryFunction {
 public:
  struct Impl;

  /// b_t = l_n on [s_n, s_{n+1}), n = 1..n_max - 1; b_t = l_1 on (0, s_1).
  /// Evaluation past s_{n_max} throws OutOfRange.
  static BoundaryFunction step(const ThresholdSequence& levels, const AlphaSequence& alpha,
                               std::size_t n_max);
  static BoundaryFunction analytic(std::function<double(double)> b, std::string name = "analytic");
  /// b_t = a ln t + b.
  static BoundaryFunction log_scaled(double a, double b);
  /// Right-continuous step through (t_i, v_i); v_0 to the left of t_0.
  static BoundaryFunction table(std::vector<double> times, std::vector<double> values);

  double operator()(double t) const;
  BoundaryKind kind() const;
  std::string describe() const;

  /// Jump locations inside [lo, hi] (for quadrature splitting).
  std::vector<double> breakpoints(double lo, double hi) const;
  /// Largest t at which the boundary can be evaluated.
  double domain_end() const;

  /// Shape of g_t = 1 - F(b_t) where derivable (log_scaled only).
  std::optional<GrowthForm> tail_form(const Distribution& F) const;

  /// Step boundaries: jump times s_1..s_{n_max} and levels l_1..l_{n_max}.
  std::span<const double> jump_times() const;
  std::span<const double> jump_levels() const;

  explicit BoundaryFunction(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}

 private:
  std::shared_ptr<const Impl> impl_;
};

BoundaryFunction step_boundary(const ThresholdSequence& levels, const AlphaSequence& alpha,
                               std::size_t n_max);

/// Non-decreasing envelope: b_{t0} on (0, t0), sup_{t0 <= u <= t} b_u after.
///
/// Table and step inputs are handled exactly. For other boundaries the
/// running sup is built once on [t0, horizon] from cell-wise maximisation
/// (Brent refinement of each cell's interior maximum); evaluation beyond the
/// horizon extends the scan on the fly.
BoundaryFunction monotone_envelope(const BoundaryFunction& b, double t0, double horizon = 1e3);

}  // namespace records
