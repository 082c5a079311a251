#include "records/tv_distance.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <limits>
#include <vector>

#include "records/error.hpp"

namespace records {

namespace {

double atom_at_lower(const Distribution& D) {
  if (D.is_continuous()) return 0.0;
  return D.cdf(D.lower_support());
}

double grid_tv(const Distribution& G, const Distribution& H, double lo, double hi,
               std::size_t cells) {
  double total = 0.0;
  double prev_g = G.cdf(lo), prev_h = H.cdf(lo);
  const double step = (hi - lo) / static_cast<double>(cells);
  for (std::size_t k = 1; k <= cells; ++k) {
    const double x = k == cells ? hi : lo + static_cast<double>(k) * step;
    const double g = G.cdf(x), h = H.cdf(x);
    total += std::abs((g - prev_g) - (h - prev_h));
    prev_g = g;
    prev_h = h;
  }
  return total;
}

}  // namespace

std::string to_string(TvMethod m) {
  switch (m) {
    case TvMethod::Identical: return "identical";
    case TvMethod::Quadrature: return "quadrature";
    case TvMethod::Grid: return "grid";
  }
  return "?";
}

TvResult tv_restricted(const Distribution& G, const Distribution& H, double level) {
  if (G.identical_to(H)) return {0.0, 0.0, TvMethod::Identical};

  const double lo = std::max({level, std::min(G.lower_support(), H.lower_support())});
  const double hi = std::max(G.upper_endpoint(), H.upper_endpoint());
  if (!(hi > lo)) return {0.0, 0.0, TvMethod::Quadrature};

  if (G.has_density() && H.has_density()) {
    std::vector<double> cuts{lo};
    for (const Distribution* d : {&G, &H}) {
      for (double x : d->knots())
        if (x > lo && x < hi) cuts.push_back(x);
      for (double x : {d->lower_support(), d->upper_endpoint()})
        if (std::isfinite(x) && x > lo && x < hi) cuts.push_back(x);
    }
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    if (!std::isfinite(hi)) {
      // a finite chunk first keeps the infinite-range map away from the bulk
      cuts.push_back(cuts.back() + 1.0);
      cuts.push_back(cuts.back() + 16.0);
    }
    cuts.push_back(hi);

    const auto integrand = [&](double x) {
      const double d = G.density(x) - H.density(x);
      return std::isfinite(d) ? std::abs(d) : 0.0;
    };
    double total = 0.0, err_total = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
      double err = 0.0;
      total += boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
          integrand, cuts[i], cuts[i + 1], 25, 1e-13, &err);
      err_total += err;
    }
    const double atom_g = G.lower_support() > level ? atom_at_lower(G) : 0.0;
    const double atom_h = H.lower_support() > level ? atom_at_lower(H) : 0.0;
    if (G.lower_support() == H.lower_support()) total += std::abs(atom_g - atom_h);
    else total += atom_g + atom_h;
    return {total, err_total + 1e-14, TvMethod::Quadrature};
  }

  if (!std::isfinite(lo) || !std::isfinite(hi)) {
    fail(ErrorCode::Unsupported,
         "total variation needs densities or a bounded support for " + G.describe() + " vs " +
             H.describe());
  }
  constexpr std::size_t kCells = 1u << 16;
  const double fine = grid_tv(G, H, lo, hi, kCells);
  const double coarse = grid_tv(G, H, lo, hi, kCells / 2);
  // mass sitting exactly at lo belongs to (level, inf) when lo > level
  double atoms = 0.0;
  if (lo > level) atoms = std::abs(G.cdf(lo) - H.cdf(lo));
  return {fine + atoms, std::abs(fine - coarse) + 1e-12, TvMethod::Grid};
}

}  // namespace records
