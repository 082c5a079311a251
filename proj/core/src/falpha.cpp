#include "records/falpha.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>

#include "records/compensated.hpp"
#include "records/csv.hpp"
#include "records/error.hpp"

namespace records {

namespace {

// alpha_{k-1} / alpha_k, k >= 2, without forming either weight.
double term_ratio(const AlphaSequence& alpha, std::size_t k) {
  const double x = static_cast<double>(k);
  switch (alpha.family()) {
    case AlphaFamily::Constant: return 1.0;
    case AlphaFamily::Geometric: return 1.0 / alpha.first_parameter();
    case AlphaFamily::Polynomial: return std::pow((x - 1.0) / x, alpha.first_parameter());
    case AlphaFamily::ExpPower: {
      const double c = alpha.first_parameter(), kappa = alpha.second_parameter();
      return std::exp(c * (std::pow(x - 1.0, kappa) - std::pow(x, kappa)));
    }
    case AlphaFamily::Table: return alpha.term(k - 1) / alpha.term(k);
  }
  return 1.0;
}

}  // namespace

void Trajectory::resize(std::size_t n) {
  horizon = n;
  X.resize(n);
  M.resize(n);
  I.resize(n);
  N.resize(n);
  key.clear();
}

void Trajectory::finish() {
  const bool keyed = key.size() == horizon;
  const auto& rank = keyed ? key : X;
  double best = -std::numeric_limits<double>::infinity();
  double running = best;
  std::uint32_t count = 0;
  for (std::size_t k = 0; k < horizon; ++k) {
    const bool rec = k == 0 || rank[k] > best;
    if (rec) {
      best = rank[k];
      running = keyed ? X[k] : std::max(running, X[k]);
    }
    count += rec ? 1u : 0u;
    M[k] = running;
    I[k] = rec ? 1 : 0;
    N[k] = count;
  }
}

double sample_power(const Distribution& F, double a, double u) {
  double log_u = std::log(u) / a;
  // a beyond ~1e300 sends log_u to zero; the clamp moves such draws to the
  // largest representable level below 1, an event of probability < 1e-300.
  if (log_u == 0.0) log_u = -DBL_TRUE_MIN;
  return F.quantile_from_log(log_u);
}

FalphaSampler::FalphaSampler(Distribution F, const AlphaSequence& alpha, std::size_t horizon,
                             std::uint64_t seed)
    : F_(std::move(F)), alphas_(alpha.terms(horizon)), rng_(seed) {
  require(horizon >= 1, ErrorCode::InvalidArgument, "horizon must be >= 1");
  require(F_.is_continuous(), ErrorCode::Unsupported,
          "record indicators need a continuous d.f.; got " + F_.describe());
}

double FalphaSampler::value(std::uint64_t rep, std::size_t k) const {
  return sample_power(F_, alphas_[k - 1], rng_.uniform(rep, k, Lane::Primary));
}

void FalphaSampler::sample_into(std::uint64_t rep, Trajectory& out) const {
  out.resize(alphas_.size());
  out.seed = rng_.seed();
  out.rep = rep;
  out.key.resize(alphas_.size());
  for (std::size_t k = 1; k <= alphas_.size(); ++k) {
    const double u = rng_.uniform(rep, k, Lane::Primary);
    out.X[k - 1] = sample_power(F_, alphas_[k - 1], u);
    out.key[k - 1] = std::log(u) / alphas_[k - 1];
  }
  out.finish();
}

Trajectory FalphaSampler::sample(std::uint64_t rep) const {
  Trajectory t;
  sample_into(rep, t);
  return t;
}

Trajectory sample_falpha(const Distribution& F, const AlphaSequence& alpha, std::size_t n,
                         std::uint64_t seed, std::uint64_t rep) {
  return FalphaSampler(F, alpha, n, seed).sample(rep);
}

std::vector<double> record_probabilities(const AlphaSequence& alpha, std::size_t n) {
  require(n >= 1, ErrorCode::InvalidArgument, "record index starts at 1");
  std::vector<double> p(n);
  const auto s = alpha.partial_sums(n);
  if (std::isfinite(s[n])) {
    for (std::size_t k = 1; k <= n; ++k) p[k - 1] = alpha.term(k) / s[k];
    return p;
  }
  // s_k / alpha_k = 1 + (s_{k-1} / alpha_{k-1}) * (alpha_{k-1} / alpha_k)
  double r = 1.0;
  p[0] = 1.0;
  for (std::size_t k = 2; k <= n; ++k) {
    r = 1.0 + r * term_ratio(alpha, k);
    p[k - 1] = 1.0 / r;
  }
  return p;
}

double record_probability(const AlphaSequence& alpha, std::size_t n) {
  require(n >= 1, ErrorCode::InvalidArgument, "record index starts at 1");
  if (n == 1) return 1.0;
  const double x = static_cast<double>(n);
  switch (alpha.family()) {
    case AlphaFamily::Constant: return 1.0 / x;
    case AlphaFamily::Geometric: {
      const double r = alpha.first_parameter();
      if (r == 1.0) return 1.0 / x;
      // r^n (r - 1) / (r^{n+1} - r)
      return (r - 1.0) / (r - std::exp((1.0 - x) * std::log(r)));
    }
    default: break;
  }
  const double s = alpha.partial_sum(n);
  const double a = alpha.term(n);
  if (std::isfinite(s) && std::isfinite(a)) return a / s;
  return record_probabilities(alpha, n).back();
}

RecordLawSummary record_law_summary(const AlphaSequence& alpha, std::size_t n) {
  RecordLawSummary out;
  out.p = record_probabilities(alpha, n);
  out.E.resize(n);
  out.V.resize(n);
  NeumaierSum e, v;
  for (std::size_t k = 0; k < n; ++k) {
    e += out.p[k];
    v += out.p[k] * (1.0 - out.p[k]);
    out.E[k] = e.value();
    out.V[k] = v.value();
  }
  return out;
}

std::vector<double> poisson_binomial_pmf(const std::vector<double>& p) {
  const std::size_t n = p.size();
  require(n <= kMaxPmfHorizon, ErrorCode::HorizonTooLarge,
          "exact pmf is capped at n = " + std::to_string(kMaxPmfHorizon));
  constexpr long double kTiny = 1e-300L;
  std::vector<long double> dp(n + 1, 0.0L);
  dp[0] = 1.0L;
  std::size_t lo = 0, hi = 0;  // live window
  for (std::size_t i = 0; i < n; ++i) {
    const long double q = p[i], r = 1.0L - q;
    dp[hi + 1] = dp[hi] * q;
    for (std::size_t k = hi; k > lo; --k) dp[k] = dp[k] * r + dp[k - 1] * q;
    dp[lo] *= r;
    ++hi;
    while (lo < hi && dp[lo] < kTiny) dp[lo++] = 0.0L;
    while (hi > lo && dp[hi] < kTiny) dp[hi--] = 0.0L;
  }
  std::vector<double> out(n + 1);
  for (std::size_t k = 0; k <= n; ++k) out[k] = static_cast<double>(dp[k]);
  return out;
}

std::vector<double> exact_count_pmf(const AlphaSequence& alpha, std::size_t n) {
  require(n >= 1, ErrorCode::InvalidArgument, "horizon must be >= 1");
  require(n <= kMaxPmfHorizon, ErrorCode::HorizonTooLarge,
          "exact pmf is capped at n = " + std::to_string(kMaxPmfHorizon));
  return poisson_binomial_pmf(record_probabilities(alpha, n));
}

std::string to_string(PLimit l) {
  switch (l) {
    case PLimit::Zero: return "0";
    case PLimit::One: return "1";
    case PLimit::Interior: return "interior";
    case PLimit::NoLimit: return "none";
  }
  return "?";
}

AsymptoticReport classify_asymptotics(const AlphaSequence& alpha) {
  AsymptoticReport r;
  const double a = alpha.first_parameter(), b = alpha.second_parameter();
  switch (alpha.family()) {
    case AlphaFamily::Constant:
      r.c1 = true;
      r.p_limit = PLimit::Zero;
      break;
    case AlphaFamily::Geometric:
      r.c1 = a >= 1.0;
      if (a > 1.0) {
        r.p_limit = PLimit::Interior;
        r.p_limit_value = (a - 1.0) / a;
      } else {
        r.p_limit = PLimit::Zero;
        r.variance_finite = a < 1.0;
      }
      break;
    case AlphaFamily::Polynomial:
      r.c1 = a >= -1.0;
      r.p_limit = PLimit::Zero;
      r.variance_finite = !r.c1;
      break;
    case AlphaFamily::ExpPower:
      r.c1 = a >= 0.0;
      if (a <= 0.0 || b < 1.0) {
        r.p_limit = PLimit::Zero;
        r.variance_finite = a < 0.0;
      } else if (b == 1.0) {
        r.p_limit = PLimit::Interior;
        r.p_limit_value = -std::expm1(-a);
      } else {
        // 1 - p_n ~ exp(-c kappa n^{kappa-1}) is summable
        r.p_limit = PLimit::One;
        r.variance_finite = true;
      }
      break;
    case AlphaFamily::Table: {
      const auto& d = alpha.declared();
      if (!d.c1 || !d.variance_finite || (d.p_has_limit && !d.lim_p)) {
        fail(ErrorCode::Undecidable,
             "alpha table needs declared c1, lim_p (or p_has_limit = false) and variance_finite");
      }
      r.c1 = *d.c1;
      r.variance_finite = *d.variance_finite;
      if (!d.p_has_limit) {
        r.p_limit = PLimit::NoLimit;
      } else {
        r.p_limit_value = *d.lim_p;
        r.p_limit = *d.lim_p == 0.0   ? PLimit::Zero
                    : *d.lim_p == 1.0 ? PLimit::One
                                      : PLimit::Interior;
      }
      break;
    }
  }
  if (r.p_limit == PLimit::Zero || r.p_limit == PLimit::One) r.p_limit_value = r.p_limit == PLimit::One;

  r.statements.push_back(
      {"A1", true,
       r.c1 ? "N_n -> infinity a.s." : "N_n stays bounded a.s. since s_n has a finite limit",
       r.c1 ? "infinity" : "finite"});
  r.statements.push_back({"A2", r.c1, "N_n / E_n -> 1 a.s.", "1"});
  std::string a3 = "(N_n - E_n) / ln s_n -> 0 a.s.";
  std::string a3_limit = "0";
  if (r.p_limit == PLimit::Zero) {
    a3 += "; N_n / ln s_n -> 1 a.s.";
    a3_limit = "0; N_n/ln s_n -> 1";
  } else if (r.p_limit == PLimit::One) {
    a3 += "; N_n / ln s_n -> 0 a.s.";
    a3_limit = "0; N_n/ln s_n -> 0";
  }
  r.statements.push_back({"A3", r.c1, a3, a3_limit});
  if (r.variance_finite) {
    r.statements.push_back(
        {"A4", r.c1, "N_n - E_n converges a.s. to a proper random variable", "proper r.v."});
  } else {
    r.statements.push_back(
        {"A4", r.c1, "V_n^{-1/2} (N_n - E_n) -> N(0,1) in distribution", "N(0,1)"});
  }
  return r;
}

void write_trajectory_csv(std::ostream& os, const Trajectory& t) {
  CsvWriter w(os);
  w.cell("n").cell("X").cell("M").cell("I").cell("N").end_row();
  for (std::size_t k = 0; k < t.horizon; ++k) {
    w.cell(k + 1).cell(t.X[k]).cell(t.M[k]).cell(static_cast<int>(t.I[k])).cell(t.N[k]);
    w.end_row();
  }
}

void write_pmf_csv(std::ostream& os, const std::vector<double>& pmf) {
  CsvWriter w(os);
  w.cell("k").cell("prob").end_row();
  for (std::size_t k = 1; k < pmf.size(); ++k) w.cell(k).cell(pmf[k]).end_row();
}

}  // namespace records
