#include "records/threshold_scheme.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "records/csv.hpp"
#include "records/error.hpp"
#include "records/parallel.hpp"
#include "records/tv_distance.hpp"

namespace records {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// sum_{k > n} c k^{-p} <= c n^{1-p} / (p - 1)
double power_tail(double c, double p, double n) {
  if (p <= 1.0) return kInf;
  return c * std::pow(n, 1.0 - p) / (p - 1.0);
}

}  // namespace

std::string to_string(BelowKind k) {
  switch (k) {
    case BelowKind::Vee: return "vee";
    case BelowKind::TailExact: return "tail_exact";
    case BelowKind::Perturbed: return "perturbed";
  }
  return "?";
}

std::string to_string(VeeLaw l) {
  switch (l) {
    case VeeLaw::Constant: return "constant";
    case VeeLaw::Iid: return "iid";
    case VeeLaw::Markov: return "markov";
  }
  return "?";
}

bool ThresholdSchemeSpec::independent() const {
  return !(below == BelowKind::Vee && vee.law == VeeLaw::Markov);
}

bool ThresholdSchemeSpec::exact_above_threshold() const { return below != BelowKind::Perturbed; }

double ThresholdSchemeSpec::mixture_weight(std::size_t n) const {
  if (below != BelowKind::Perturbed) return 0.0;
  return std::min(1.0, perturbed.eps0 * std::pow(static_cast<double>(n), -perturbed.decay));
}

std::string ThresholdSchemeSpec::describe() const {
  std::ostringstream os;
  os.imbue(std::locale::classic());
  os << "F=" << F.describe() << ", alpha=" << alpha.describe() << ", l=" << levels.describe()
     << ", below=" << to_string(below);
  if (below == BelowKind::Vee) os << "(" << to_string(vee.law) << ")";
  return os.str();
}

CoupledSampler::CoupledSampler(ThresholdSchemeSpec spec, std::size_t horizon, std::uint64_t seed)
    : spec_(std::move(spec)), alphas_(spec_.alpha.terms(horizon)), rng_(seed) {
  require(horizon >= 1, ErrorCode::InvalidArgument, "horizon must be >= 1");
  require(spec_.F.is_continuous(), ErrorCode::Unsupported, "the scheme needs a continuous F");
  levels_ = spec_.levels.levels(horizon);
  log_thresholds_.resize(horizon);
  for (std::size_t k = 0; k < horizon; ++k)
    log_thresholds_[k] = std::isinf(levels_[k]) && levels_[k] < 0
                             ? -kInf
                             : alphas_[k] * spec_.F.log_cdf(levels_[k]);
  if (spec_.below == BelowKind::TailExact) {
    require(spec_.below_law.has_value(), ErrorCode::InvalidArgument,
            "tail_exact model needs a below-threshold law");
    log_below_at_level_.resize(horizon);
    for (std::size_t k = 0; k < horizon; ++k) {
      if (log_thresholds_[k] == -kInf) continue;
      log_below_at_level_[k] = spec_.below_law->log_cdf(levels_[k]);
      require(std::isfinite(log_below_at_level_[k]), ErrorCode::InvalidArgument,
              "below-threshold law puts no mass below l_" + std::to_string(k + 1));
    }
  }
  if (spec_.below == BelowKind::Perturbed) {
    require(spec_.perturbed.delta.has_value(), ErrorCode::InvalidArgument,
            "perturbed model needs a perturbation law");
    require(spec_.perturbed.eps0 >= 0.0 && spec_.perturbed.eps0 <= 1.0,
            ErrorCode::InvalidArgument, "perturbation weight eps0 must lie in [0, 1]");
  }
  if (spec_.below == BelowKind::Vee) {
    require(spec_.vee.offset >= 0.0 && spec_.vee.spread >= 0.0, ErrorCode::InvalidArgument,
            "vee offset and spread must be non-negative");
    require(spec_.vee.rho >= 0.0 && spec_.vee.rho < 1.0, ErrorCode::InvalidArgument,
            "vee rho must lie in [0, 1)");
  }
}

void CoupledSampler::sample_into(std::uint64_t rep, CoupledTrajectory& out) const {
  const std::size_t n = alphas_.size();
  out.x.resize(n);
  out.pure.resize(n);
  out.x.seed = out.pure.seed = rng_.seed();
  out.x.rep = out.pure.rep = rep;
  out.levels = levels_;
  const auto& F = spec_.F;
  double z = 0.0;
  if (spec_.below == BelowKind::Vee && spec_.vee.law == VeeLaw::Markov)
    z = -std::log(rng_.uniform(rep, 0, Lane::BelowLevel));

  for (std::size_t k = 1; k <= n; ++k) {
    const double u = rng_.uniform(rep, k, Lane::Primary);
    const double pure = sample_power(F, alphas_[k - 1], u);
    const double level = levels_[k - 1];
    out.pure.X[k - 1] = pure;
    double x = pure;
    switch (spec_.below) {
      case BelowKind::Vee: {
        const auto& v = spec_.vee;
        double dev = 0.0;
        if (v.law == VeeLaw::Iid) {
          dev = -std::log(rng_.uniform(rep, k, Lane::BelowLevel));
        } else if (v.law == VeeLaw::Markov) {
          z = v.rho * z + (1.0 - v.rho) * -std::log(rng_.uniform(rep, k, Lane::BelowLevel));
          dev = z;
        }
        const double V = level - v.offset - v.spread * dev;
        x = std::max(V, pure);
        break;
      }
      case BelowKind::TailExact: {
        const double lt = log_thresholds_[k - 1];
        const double lu = std::log(u);
        if (lu <= lt) {
          // conditional quantile of the below law given (-inf, l_n]
          const double target = std::min(0.0, lu - lt + log_below_at_level_[k - 1]);
          x = std::min(level, spec_.below_law->quantile_from_log(target));
        }
        break;
      }
      case BelowKind::Perturbed: {
        if (rng_.uniform(rep, k, Lane::Mixture) < spec_.mixture_weight(k))
          x = spec_.perturbed.delta->quantile_from_log(std::log(u));
        break;
      }
    }
    out.x.X[k - 1] = x;
  }
  out.x.finish();
  out.pure.finish();

  const auto& X = out.x;
  const auto& P = out.pure;
  const auto differs = [&](std::size_t i) { return X.M[i] != P.M[i] || X.I[i] != P.I[i]; };
  std::optional<std::size_t> last;
  for (std::size_t i = n; i-- > 0;)
    if (differs(i)) {
      last = i + 1;
      break;
    }
  out.agreement_start.reset();
  if (!last) out.agreement_start = 1;
  else if (*last < n) out.agreement_start = *last + 1;

  // T1: last index where {X_n > l_n} and {pure_n > l_n} disagree, plus one.
  out.T1.reset();
  out.T2.reset();
  out.T3.reset();
  std::size_t last_a = 0;
  for (std::size_t i = n; i-- > 0;) {
    if ((X.X[i] > levels_[i]) != (P.X[i] > levels_[i])) {
      last_a = i + 1;
      break;
    }
  }
  if (last_a < n) out.T1 = last_a + 1;
  if (out.T1) {
    std::size_t last_b = 0;
    for (std::size_t i = n; i-- > 0;) {
      const bool both = X.X[i] > levels_[i] && P.X[i] > levels_[i];
      if ((both && X.X[i] != P.X[i]) || !(P.M[i] > levels_[i])) {
        last_b = i + 1;
        break;
      }
    }
    if (last_b < n) out.T2 = std::max(*out.T1, last_b + 1);
  }
  if (out.T2) {
    const std::size_t t2 = *out.T2 - 1;
    for (std::size_t i = t2 + 1; i < n; ++i) {
      if (X.M[i] > X.M[t2] && P.M[i] > P.M[t2] && P.I[i] == 1) {
        out.T3 = i + 1;
        break;
      }
    }
  }
  out.first_exceedance.reset();
  for (std::size_t i = 0; i < n; ++i)
    if (X.M[i] > levels_[i]) {
      out.first_exceedance = i + 1;
      break;
    }
}

CoupledTrajectory CoupledSampler::sample(std::uint64_t rep) const {
  CoupledTrajectory t;
  sample_into(rep, t);
  return t;
}

CoupledTrajectory sample_coupled(const ThresholdSchemeSpec& spec, std::size_t n, std::uint64_t seed,
                                 std::uint64_t rep) {
  return CoupledSampler(spec, n, seed).sample(rep);
}

double coupling_mismatch(const ThresholdSchemeSpec& spec, std::size_t n) {
  if (spec.below != BelowKind::Perturbed) return 0.0;
  const double level = spec.levels.level(n);
  const double a = spec.alpha.term(n);
  const double lo = std::min(spec.perturbed.delta->cdf(level), power_cdf(spec.F, a, level));
  return spec.mixture_weight(n) * (1.0 - lo);
}

namespace {

struct ChunkStats {
  std::vector<std::size_t> starts;  // 0 marks "not agreed by the horizon"
  std::vector<std::size_t> not_agreed;
  std::size_t identity = 0;
  std::size_t persist = 0;
};

double quantile_of_sorted(const std::vector<std::size_t>& v, double p) {
  if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
  const auto idx = static_cast<std::size_t>(std::ceil(p * static_cast<double>(v.size()))) - 1;
  return static_cast<double>(v[std::min(idx, v.size() - 1)]);
}

}  // namespace

CouplingReport coupling_time_distribution(const ThresholdSchemeSpec& spec, std::size_t n,
                                          std::uint64_t seed, std::size_t replications,
                                          const std::vector<std::size_t>& checkpoints,
                                          unsigned threads) {
  require(replications >= 1, ErrorCode::InvalidArgument, "need at least one replication");
  const CoupledSampler sampler(spec, n, seed);
  std::vector<std::size_t> marks;
  for (auto c : checkpoints)
    if (c >= 1 && c <= n) marks.push_back(c);
  const bool flat_exact = spec.levels.is_flat() && spec.exact_above_threshold();

  const auto chunks = map_chunks<ChunkStats>(replications, threads, [&](std::size_t b, std::size_t e) {
    ChunkStats st;
    st.not_agreed.assign(marks.size(), 0);
    CoupledTrajectory t;
    for (std::size_t r = b; r < e; ++r) {
      sampler.sample_into(r, t);
      st.starts.push_back(t.agreement_start.value_or(0));
      for (std::size_t j = 0; j < marks.size(); ++j)
        if (!t.agreement_start || *t.agreement_start > marks[j]) ++st.not_agreed[j];
      if (flat_exact) {
        for (std::size_t i = 0; i < n; ++i) {
          const double l = t.levels[i];
          const bool ax = t.x.X[i] > l, ap = t.pure.X[i] > l;
          if (ax != ap || (ax && t.x.X[i] != t.pure.X[i])) ++st.identity;
        }
        if (t.first_exceedance &&
            (!t.agreement_start || *t.agreement_start > *t.first_exceedance))
          ++st.persist;
      }
    }
    return st;
  });

  CouplingReport rep;
  rep.replications = replications;
  rep.horizon = n;
  std::vector<std::size_t> agreed;
  std::vector<std::size_t> not_agreed(marks.size(), 0);
  std::size_t identity = 0, persist = 0;
  for (const auto& c : chunks) {
    for (auto s : c.starts)
      if (s > 0) agreed.push_back(s);
    for (std::size_t j = 0; j < marks.size(); ++j) not_agreed[j] += c.not_agreed[j];
    identity += c.identity;
    persist += c.persist;
  }
  rep.agreed = agreed.size();
  rep.unagreed_fraction =
      static_cast<double>(replications - agreed.size()) / static_cast<double>(replications);
  std::sort(agreed.begin(), agreed.end());
  for (double p : {0.5, 0.9, 0.99, 1.0}) rep.quantiles.emplace_back(p, quantile_of_sorted(agreed, p));

  const auto s = spec.alpha.partial_sums(n);
  const double R = static_cast<double>(replications);
  for (std::size_t j = 0; j < marks.size(); ++j) {
    CheckpointFraction cf;
    cf.n = marks[j];
    cf.fraction = static_cast<double>(not_agreed[j]) / R;
    cf.std_error = std::sqrt(cf.fraction * (1.0 - cf.fraction) / R);
    if (spec.levels.is_flat()) {
      const double l = spec.levels.level(1);
      const double log_h = std::isinf(l) && l < 0 ? -kInf : spec.F.log_cdf(l);
      double b = std::exp(s[cf.n] * log_h);
      if (!spec.exact_above_threshold()) {
        // with no mismatch anywhere the agreement argument applies from the
        // first exceedance on, so the whole mismatch mass is needed
        double head = 0.0, rest = 0.0;
        for (std::size_t k = 1; k <= n; ++k) (k <= cf.n ? head : rest) += coupling_mismatch(spec, k);
        rest += power_tail(spec.perturbed.eps0, spec.perturbed.decay, static_cast<double>(n));
        cf.tail_guide = b + rest;
        b += head + rest;
      }
      cf.bound = std::min(1.0, b);
    }
    rep.checkpoints.push_back(cf);
  }
  if (flat_exact) {
    rep.identity_violations = identity;
    rep.agreement_violations = persist;
  }
  return rep;
}

nlohmann::json CouplingReport::to_json() const {
  nlohmann::json j;
  j["replications"] = replications;
  j["horizon"] = horizon;
  j["agreed"] = agreed;
  j["unagreed_fraction"] = unagreed_fraction;
  nlohmann::json q = nlohmann::json::object();
  for (const auto& [p, v] : quantiles) q[format_double(p)] = std::isnan(v) ? nlohmann::json() : nlohmann::json(v);
  j["agreement_start_quantiles"] = q;
  nlohmann::json cps = nlohmann::json::array();
  for (const auto& c : checkpoints) {
    nlohmann::json e{{"n", c.n}, {"fraction_not_agreed", c.fraction}, {"std_error", c.std_error}};
    if (c.bound) e["bound"] = *c.bound;
    if (c.tail_guide) e["tail_guide"] = *c.tail_guide;
    cps.push_back(e);
  }
  j["checkpoints"] = cps;
  if (identity_violations) j["identity_violations"] = *identity_violations;
  if (agreement_violations) j["agreement_violations"] = *agreement_violations;
  return j;
}

C2Report assess_C2(const ThresholdSchemeSpec& spec, std::size_t n_max) {
  require(n_max >= 2, ErrorCode::InvalidArgument, "C2 check needs n_max >= 2");
  C2Report r;
  const auto fail_with = [&](const std::string& clause) {
    if (r.violated.empty()) r.violated = clause;
  };

  const auto c1 = spec.alpha.c1();
  r.c1 = c1.value_or(false);
  if (!r.c1) {
    fail_with("C1");
    r.notes.push_back(c1 ? "s_n has a finite limit" : "C1 unknown for " + spec.alpha.describe());
  }

  // (i) no observation can exceed the reach of the pure scheme
  const double top = spec.F.upper_endpoint();
  r.clause_i = true;
  if (spec.below == BelowKind::Perturbed) {
    r.clause_i = spec.perturbed.delta && spec.perturbed.delta->upper_endpoint() <= top;
  } else if (!spec.levels.is_neg_infinity()) {
    const double offset = spec.below == BelowKind::Vee ? spec.vee.offset : 0.0;
    for (std::size_t k = 1; k <= n_max && r.clause_i; ++k)
      if (spec.levels.level(k) - offset > top) r.clause_i = false;
  }
  if (!r.clause_i) fail_with("(i)");

  // (ii) every built-in model draws X_n above l_n independently of the past
  r.clause_ii = true;
  r.notes.push_back("(ii) holds by construction of the " + to_string(spec.below) + " model");
  if (!spec.levels.monotone_flag() && !spec.levels.check_monotone(n_max)) {
    r.clause_ii = false;
    r.notes.push_back("thresholds are not non-decreasing");
    fail_with("(ii)");
  }

  // (iii) summable restricted total variation
  if (spec.exact_above_threshold()) {
    r.clause_iii = true;
  } else {
    const auto& pm = spec.perturbed;
    constexpr std::size_t kExactTerms = 2000;
    double partial = 0.0;
    for (std::size_t k = 1; k <= n_max; ++k) {
      const double eps = spec.mixture_weight(k);
      if (eps == 0.0) continue;
      if (k <= kExactTerms) {
        const auto tv = tv_restricted(*pm.delta, spec.F.power(spec.alpha.term(k)),
                                      spec.levels.level(k));
        partial += eps * (tv.value + tv.error_bound);
      } else {
        partial += 2.0 * eps;
      }
    }
    r.delta_partial = partial;
    r.delta_tail = pm.declared_tail ? *pm.declared_tail
                                    : 2.0 * power_tail(pm.eps0, pm.decay, static_cast<double>(n_max));
    r.clause_iii = std::isfinite(r.delta_partial) && std::isfinite(r.delta_tail);
    if (!r.clause_iii) fail_with("(iii)");
  }

  // (iv) eventual exceedance of the thresholds by the pure maxima
  r.verdict_iv = classify_growth(spec.F, spec.alpha, spec.levels, n_max);
  r.clause_iv = r.verdict_iv.verdict == Verdict::One;
  if (!r.clause_iv) fail_with("(iv)");
  return r;
}

C2Report certify_C2(const ThresholdSchemeSpec& spec, std::size_t n_max) {
  auto r = assess_C2(spec, n_max);
  if (!r.passed()) {
    fail(ErrorCode::CertificationFailed,
         "condition C2 clause " + r.violated + " fails for " + spec.describe());
  }
  return r;
}

nlohmann::json C2Report::to_json() const {
  nlohmann::json j;
  j["C1"] = c1;
  j["i"] = clause_i;
  j["ii"] = clause_ii;
  j["iii"] = clause_iii;
  j["iv"] = clause_iv;
  j["delta_partial"] = delta_partial;
  j["delta_tail"] = std::isfinite(delta_tail) ? nlohmann::json(delta_tail) : nlohmann::json("inf");
  j["passed"] = passed();
  if (!violated.empty()) j["violated"] = violated;
  j["notes"] = notes;
  j["criterion_iv"] = verdict_iv.to_json();
  return j;
}

void write_coupled_csv(std::ostream& os, const CoupledTrajectory& t) {
  CsvWriter w(os);
  for (const char* h : {"n", "level", "X", "M", "I", "N", "X_pure", "M_pure", "I_pure", "N_pure"})
    w.cell(h);
  w.end_row();
  for (std::size_t k = 0; k < t.x.horizon; ++k) {
    w.cell(k + 1).cell(t.levels[k]);
    w.cell(t.x.X[k]).cell(t.x.M[k]).cell(static_cast<int>(t.x.I[k])).cell(t.x.N[k]);
    w.cell(t.pure.X[k]).cell(t.pure.M[k]).cell(static_cast<int>(t.pure.I[k])).cell(t.pure.N[k]);
    w.end_row();
  }
}

}  // namespace records
