#pragma once

#include <string>

#include "records/distribution.hpp"

namespace records {

enum class TvMethod { Identical, Quadrature, Grid };

struct TvResult {
  double value = 0.0;
  /// Estimated absolute error of `value`.
  double error_bound = 0.0;
  TvMethod method = TvMethod::Identical;
};

std::string to_string(TvMethod m);

/// Total variation of G - H restricted to (level, infinity):
/// integral over (level, inf) of |d(G - H)| (not halved).
///
/// Uses adaptive Gauss-Kronrod quadrature of |g - h| when both densities are
/// available (plus any atoms at the lower support), otherwise a signed-measure
/// sum over a fine grid on a bounded support with a grid-halving error
/// estimate. Throws Unsupported when neither route applies.
TvResult tv_restricted(const Distribution& G, const Distribution& H, double level);

}  // namespace records
