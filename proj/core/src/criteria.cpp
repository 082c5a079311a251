#include "records/criteria.hpp"

#include <algorithm>
#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>

#include "records/compensated.hpp"
#include "records/csv.hpp"
#include "records/error.hpp"

namespace records {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Roughly log-spaced indices in [1, n], always ending at n.
std::vector<std::size_t> trace_indices(std::size_t n, std::size_t points) {
  std::vector<std::size_t> out;
  if (n == 0 || points == 0) return out;
  const double ratio = std::pow(static_cast<double>(n), 1.0 / static_cast<double>(points));
  double x = 1.0;
  while (true) {
    const auto k = static_cast<std::size_t>(std::llround(x));
    if (k >= n) break;
    if (out.empty() || out.back() != k) out.push_back(k);
    x = std::max(x * ratio, x + 1.0);
  }
  out.push_back(n);
  return out;
}

// Smallest t at which every logarithm in the shapes is defined and positive.
double form_domain_start(const GrowthForm& a, const GrowthForm& b) {
  if (a.pow_loglog != 0.0 || b.pow_loglog != 0.0) return 16.0;
  if (a.pow_log != 0.0 || b.pow_log != 0.0) return 3.0;
  return 0.0;
}

double integrand(const GrowthForm& p, const GrowthForm& x, double t) {
  const double v = p(t) * std::exp(-x(t));
  return std::isfinite(v) ? v : 0.0;
}

bool eventually_decreasing(const GrowthForm& p, const GrowthForm& x, double from) {
  double prev = integrand(p, x, from);
  double t = from;
  for (int k = 0; k < 80; ++k) {
    t *= 1.5;
    const double v = integrand(p, x, t);
    if (v > prev * (1.0 + 1e-12)) return false;
    prev = v;
  }
  return true;
}

// Remainder estimate shared by sums and integrals.
void attach_tail(SeriesEstimate& est, const GrowthForm& p, const GrowthForm& x, double from) {
  est.behaviour = exp_weighted_series(p, x);
  if (est.behaviour != SeriesBehaviour::Converges) {
    est.tail = kInf;
    est.tail_label = p.exact && x.exact ? "exact-form" : "asymptotic-form";
    est.tail_certified = false;
    return;
  }
  est.tail = form_tail_integral(p, x, from);
  const double start = std::max(from, form_domain_start(p, x));
  const bool monotone = eventually_decreasing(p, x, std::max(start, 1.0));
  est.tail_label = p.exact && x.exact && monotone ? "exact-form" : "asymptotic-form";
  est.tail_certified = std::isfinite(est.tail);
}

GrowthForm times_t(const GrowthForm& f) { return GrowthForm::power(1.0, 1.0) * f; }

}  // namespace

double form_tail_integral(const GrowthForm& prefactor, const GrowthForm& exponent, double from) {
  const double start = std::max(from, form_domain_start(prefactor, exponent));
  // where a shape is undefined the integrand is at most the prefactor bound 1
  double head = start > from ? (start - from) : 0.0;
  if (start > from) head = std::min(head, (start - from) * std::max(1.0, prefactor(start)));
  const auto f = [&](double t) { return integrand(prefactor, exponent, t); };
  try {
    boost::math::quadrature::exp_sinh<double> integrator;
    double err = 0.0;
    const double tail = integrator.integrate(
        [&](double u) { return f(start + u); }, 0.0, kInf,
        std::sqrt(std::numeric_limits<double>::epsilon()), &err);
    return head + tail + err;
  } catch (const std::exception&) {
    return kInf;
  }
}

SeriesEstimate J_integral(const Distribution& F, const BoundaryFunction& b, double horizon,
                          const IntegralOptions& opts) {
  require(horizon > opts.t_start && opts.t_start >= 0.0, ErrorCode::InvalidArgument,
          "J integral needs 0 <= t_start < horizon");
  const auto g = [&](double t) { return F.survival(b(t)); };
  const double g_end = g(horizon);
  if (!(horizon * g_end >= 1.0)) {
    fail(ErrorCode::TailUnbounded, "horizon * g(horizon) = " + format_double(horizon * g_end) +
                                       " < 1; extend the horizon");
  }

  std::vector<double> cuts{opts.t_start};
  const auto jumps = b.breakpoints(opts.t_start, horizon);
  if (jumps.empty()) {
    double t = opts.t_start > 0.0 ? opts.t_start * 2.0 : 1.0;
    while (t < horizon) {
      cuts.push_back(t);
      t *= 2.0;
    }
  } else {
    cuts.insert(cuts.end(), jumps.begin(), jumps.end());
  }
  cuts.push_back(horizon);

  SeriesEstimate est;
  est.horizon = horizon;
  const auto f = [&](double t) {
    const double gt = g(t);
    return gt * std::exp(-t * gt);
  };
  NeumaierSum total;
  const std::size_t stride =
      std::max<std::size_t>(1, (cuts.size() - 1) / std::max<std::size_t>(1, opts.trace_points));
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    double err = 0.0;
    total += boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, cuts[i], cuts[i + 1],
                                                                           15, 1e-13, &err);
    if ((i + 1) % stride == 0 || i + 2 == cuts.size())
      est.trace.emplace_back(cuts[i + 1], total.value());
  }
  est.partial = total.value();

  const auto form = opts.g_form ? opts.g_form : b.tail_form(F);
  if (form) attach_tail(est, *form, times_t(*form), horizon);
  return est;
}

SeriesEstimate K_sum(const AlphaSequence& alpha, std::span<const double> q, const SumOptions& opts) {
  const std::size_t n = q.size();
  require(n >= 1, ErrorCode::InvalidArgument, "K sum needs at least one term");
  const auto s = alpha.partial_sums(n);
  const auto a = alpha.terms(n + 1);
  SeriesEstimate est;
  est.horizon = static_cast<double>(n);
  const auto marks = trace_indices(n, opts.trace_points);
  std::size_t next_mark = 0;
  NeumaierSum total;
  for (std::size_t k = 1; k <= n; ++k) {
    const double qk = q[k - 1];
    require(qk >= 0.0 && qk <= 1.0, ErrorCode::InvalidArgument, "q_n must lie in [0, 1]");
    if (qk > 0.0) total += std::exp(-s[k] * qk) * -std::expm1(-a[k] * qk);
    if (next_mark < marks.size() && marks[next_mark] == k) {
      est.trace.emplace_back(static_cast<double>(k), total.value());
      ++next_mark;
    }
  }
  est.partial = total.value();

  if (opts.form) {
    const auto sf = alpha.sum_form();
    const auto af = alpha.term_form();
    if (sf && af) {
      GrowthForm shifted = *af;
      bool upper_only = false;
      if (shifted.has_exp_part()) {
        if (std::abs(shifted.exp_power - 1.0) < 1e-12) shifted.coef *= std::exp(shifted.exp_rate);
        else if (shifted.exp_power > 1.0) upper_only = true;
        else shifted.exact = false;
      }
      const GrowthForm aq = shifted * *opts.form;
      GrowthForm p = (!upper_only && aq.limit() == GrowthForm::Limit::Zero)
                         ? aq
                         : GrowthForm::constant(1.0);
      attach_tail(est, p, *sf * *opts.form, est.horizon);
      if (upper_only && est.behaviour == SeriesBehaviour::Diverges)
        est.behaviour = SeriesBehaviour::Undetermined;
    }
  }
  return est;
}

SeriesEstimate klass_sum(std::span<const double> g, const SumOptions& opts) {
  const std::size_t n = g.size();
  require(n >= 1, ErrorCode::InvalidArgument, "Klass sum needs at least one term");
  SeriesEstimate est;
  est.horizon = static_cast<double>(n);
  const auto marks = trace_indices(n, opts.trace_points);
  std::size_t next_mark = 0;
  NeumaierSum total;
  for (std::size_t k = 1; k <= n; ++k) {
    const double gk = g[k - 1];
    require(gk >= 0.0 && gk <= 1.0, ErrorCode::InvalidArgument, "g_n must lie in [0, 1]");
    total += gk * std::exp(-static_cast<double>(k) * gk);
    if (next_mark < marks.size() && marks[next_mark] == k) {
      est.trace.emplace_back(static_cast<double>(k), total.value());
      ++next_mark;
    }
  }
  est.partial = total.value();
  if (opts.form) attach_tail(est, *opts.form, times_t(*opts.form), est.horizon);
  return est;
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::One: return "one";
    case Verdict::Zero: return "zero";
    case Verdict::Undecided: return "undecided";
  }
  return "undecided";
}

std::string to_string(FiredCase c) {
  switch (c) {
    case FiredCase::None: return "none";
    case FiredCase::II: return "ii";
    case FiredCase::III: return "iii";
    case FiredCase::IVConverge: return "iv-converge";
    case FiredCase::IVDiverge: return "iv-diverge";
  }
  return "none";
}

nlohmann::json CriterionVerdict::to_json() const {
  nlohmann::json j;
  j["verdict"] = to_string(verdict);
  j["fired_case"] = to_string(fired_case);
  j["evidence"] = evidence;
  return j;
}

namespace {

nlohmann::json series_json(const SeriesEstimate& e) {
  nlohmann::json j;
  j["partial"] = e.partial;
  j["tail_estimate"] = std::isfinite(e.tail) ? nlohmann::json(e.tail) : nlohmann::json("inf");
  j["tail_label"] = e.tail_label;
  j["tail_certified"] = e.tail_certified;
  j["analytic"] = to_string(e.behaviour);
  j["horizon"] = e.horizon;
  return j;
}

// Partial sums still climbing over the last decade of the horizon.
nlohmann::json divergence_evidence(const SeriesEstimate& e) {
  nlohmann::json j;
  const double last = e.partial;
  double earlier = 0.0;
  for (const auto& [k, v] : e.trace)
    if (k <= e.horizon / 10.0) earlier = v;
  const double growth = last > 0.0 ? (last - earlier) / last : 0.0;
  j["partial_at_horizon"] = last;
  j["partial_at_horizon_over_10"] = earlier;
  j["last_decade_fraction"] = growth;
  j["still_growing"] = growth >= 0.01;
  return j;
}

struct Ladder {
  GrowthForm decay;     // q_n or g_t
  GrowthForm exposure;  // s_n q_n or t g_t
};

// Cases (ii) and (iii); returns true when one of them fired.
bool early_cases(const Ladder& l, CriterionVerdict& out) {
  out.evidence["decay_form"] = l.decay.describe();
  out.evidence["exposure_form"] = l.exposure.describe();
  const auto dl = l.decay.limit();
  if (dl != GrowthForm::Limit::Zero) {
    out.verdict = Verdict::One;
    out.fired_case = FiredCase::II;
    out.evidence["decay_limit"] = "positive";
    return true;
  }
  out.evidence["decay_limit"] = "0";
  if (l.exposure.limit() != GrowthForm::Limit::Infinite) {
    out.verdict = Verdict::Zero;
    out.fired_case = FiredCase::III;
    out.evidence["exposure_limit"] = "bounded";
    return true;
  }
  out.evidence["exposure_limit"] = "infinite";
  return false;
}

void finish_case_iv(const SeriesEstimate& est, CriterionVerdict& out) {
  out.evidence["series"] = series_json(est);
  out.trace = est.trace;
  if (est.behaviour == SeriesBehaviour::Converges && est.tail_certified) {
    out.verdict = Verdict::One;
    out.fired_case = FiredCase::IVConverge;
  } else if (est.behaviour == SeriesBehaviour::Diverges) {
    out.verdict = Verdict::Zero;
    out.fired_case = FiredCase::IVDiverge;
    out.evidence["divergence_evidence"] = divergence_evidence(est);
  } else {
    out.evidence["reason"] = "convergence of the functional could not be certified";
  }
}

CriterionVerdict undecided(const std::string& reason) {
  CriterionVerdict v;
  v.evidence["reason"] = reason;
  return v;
}

}  // namespace

CriterionVerdict classify_growth(const Distribution& F, const AlphaSequence& alpha,
                                 const ThresholdSequence& levels, std::size_t horizon,
                                 const ClassifyOptions& opts) {
  require(horizon >= 2, ErrorCode::InvalidArgument, "classification horizon must be >= 2");
  const auto c1 = alpha.c1();
  if (!c1) return undecided("condition C1 unknown for " + alpha.describe());
  if (!*c1) return undecided("condition C1 fails: s_n has a finite limit");

  CriterionVerdict out;
  out.evidence["functional"] = "K";
  out.evidence["alpha"] = alpha.describe();
  out.evidence["threshold"] = levels.describe();
  out.evidence["distribution"] = F.describe();
  if (levels.is_neg_infinity()) {
    out.verdict = Verdict::One;
    out.fired_case = FiredCase::II;
    out.evidence["decay_limit"] = "positive";
    out.evidence["decay_form"] = "1";
    return out;
  }
  const auto qf = opts.declared_form ? opts.declared_form : levels.tail_form(F);
  if (!qf) return undecided("no analytic shape for q_n; declare one");
  const auto sf = alpha.sum_form();
  if (!sf) return undecided("no analytic shape for s_n; declare one");

  if (early_cases({*qf, *sf * *qf}, out)) return out;

  std::vector<double> q(horizon);
  for (std::size_t k = 1; k <= horizon; ++k) q[k - 1] = levels.tail(F, k);
  const auto est = K_sum(alpha, q, {qf, opts.trace_points});
  finish_case_iv(est, out);
  return out;
}

CriterionVerdict classify_growth(const Distribution& F, const BoundaryFunction& b, double horizon,
                                 const ClassifyOptions& opts) {
  CriterionVerdict out;
  out.evidence["functional"] = "J";
  out.evidence["boundary"] = b.describe();
  out.evidence["distribution"] = F.describe();
  const auto gf = opts.declared_form ? opts.declared_form : b.tail_form(F);
  if (!gf) return undecided("no analytic shape for g_t; declare one");
  if (early_cases({*gf, times_t(*gf)}, out)) return out;
  try {
    const auto est = J_integral(F, b, horizon, {0.0, gf, opts.trace_points});
    finish_case_iv(est, out);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::TailUnbounded) throw;
    out.verdict = Verdict::Undecided;
    out.fired_case = FiredCase::None;
    out.evidence["reason"] = e.what();
  }
  return out;
}

CriterionVerdict classify_klass(const Distribution& F, const ThresholdSequence& levels,
                                std::size_t horizon, const ClassifyOptions& opts) {
  require(horizon >= 2, ErrorCode::InvalidArgument, "classification horizon must be >= 2");
  CriterionVerdict out;
  out.evidence["functional"] = "Klass";
  out.evidence["threshold"] = levels.describe();
  out.evidence["distribution"] = F.describe();
  if (levels.is_neg_infinity()) {
    out.verdict = Verdict::One;
    out.fired_case = FiredCase::II;
    return out;
  }
  const auto gf = opts.declared_form ? opts.declared_form : levels.tail_form(F);
  if (!gf) return undecided("no analytic shape for g_n; declare one");
  if (early_cases({*gf, times_t(*gf)}, out)) return out;
  std::vector<double> g(horizon);
  for (std::size_t k = 1; k <= horizon; ++k) g[k - 1] = levels.tail(F, k);
  finish_case_iv(klass_sum(g, {gf, opts.trace_points}), out);
  return out;
}

void write_trace_csv(std::ostream& os, const std::vector<std::pair<double, double>>& trace,
                     const std::string& index_name) {
  CsvWriter w(os);
  w.cell(index_name).cell("partial").end_row();
  for (const auto& [k, v] : trace) w.cell(k).cell(v).end_row();
}

}  // namespace records
