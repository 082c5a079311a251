#include "records/commands.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "records/criteria.hpp"
#include "records/csv.hpp"
#include "records/error.hpp"
#include "records/exactjoint.hpp"
#include "records/extremal.hpp"
#include "records/falpha.hpp"
#include "records/parallel.hpp"
#include "records/stats.hpp"
#include "records/threshold_scheme.hpp"

namespace records {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

void write_file(const ExperimentConfig& cfg, const std::string& name, const std::string& body,
                std::ostream& log) {
  fs::create_directories(cfg.out_dir);
  const auto path = cfg.out_dir / name;
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorCode::InvalidArgument, "cannot write " + path.string());
  out << body;
  log << "wrote " << path.generic_string() << "\n";
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

template <class Fn>
std::string csv(Fn&& fn) {
  std::ostringstream os;
  fn(os);
  return os.str();
}

double se_of(double p, double R) { return std::sqrt(p * (1.0 - p) / R); }

/// Trajectories of the observed scheme: the threshold scheme when present,
/// otherwise the pure F^alpha scheme.
struct Source {
  std::optional<FalphaSampler> pure;
  std::optional<CoupledSampler> coupled;
  TrajectorySource fn;

  Source(const ExperimentConfig& cfg, std::size_t horizon) {
    if (cfg.scheme) {
      coupled.emplace(*cfg.scheme, horizon, cfg.seed);
      fn = [this](std::uint64_t r, Trajectory& t) {
        thread_local CoupledTrajectory ct;
        coupled->sample_into(r, ct);
        t = ct.x;
      };
    } else {
      pure.emplace(cfg.F, cfg.alpha, horizon, cfg.seed);
      fn = [this](std::uint64_t r, Trajectory& t) { pure->sample_into(r, t); };
    }
  }
  Source(const Source&) = delete;
};

CriterionVerdict run_criterion(const ExperimentConfig& cfg) {
  ClassifyOptions opts;
  opts.declared_form = cfg.criterion.declared_form;
  const auto& m = cfg.criterion.method;
  if (m == "klass") return classify_klass(cfg.F, cfg.levels, cfg.horizon, opts);
  if (m == "j_log")
    return classify_growth(cfg.F, BoundaryFunction::log_scaled(cfg.criterion.boundary_a, cfg.criterion.boundary_b),
                           static_cast<double>(cfg.horizon), opts);
  return classify_growth(cfg.F, cfg.alpha, cfg.levels, cfg.horizon, opts);
}

CheckResult make(const std::string& name, CheckStatus s, std::string summary, json detail = json::object()) {
  return {name, s, std::move(summary), std::move(detail)};
}

CheckResult skip(const std::string& name, const std::string& why) { return make(name, CheckStatus::Skip, why); }

CheckResult check_record_law(const ExperimentConfig& cfg) {
  if (cfg.scheme) return skip("record_law", "threshold scheme: record law is not exact");
  const std::size_t H = std::min<std::size_t>(cfg.horizon, 100);
  const FalphaSampler s(cfg.F, cfg.alpha, H, cfg.seed);
  const auto chunks = map_chunks<std::vector<std::size_t>>(cfg.replications, cfg.threads, [&](std::size_t b, std::size_t e) {
    std::vector<std::size_t> c(H, 0);
    Trajectory t;
    for (std::size_t r = b; r < e; ++r) {
      s.sample_into(r, t);
      for (std::size_t k = 0; k < H; ++k) c[k] += t.I[k];
    }
    return c;
  });
  std::vector<std::size_t> hits(H, 0);
  for (const auto& c : chunks)
    for (std::size_t k = 0; k < H; ++k) hits[k] += c[k];
  const auto p = record_probabilities(cfg.alpha, H);
  const double R = static_cast<double>(cfg.replications);
  double worst = 0.0;
  std::size_t worst_n = 1, bad = 0;
  for (std::size_t k = 0; k < H; ++k) {
    const double ph = static_cast<double>(hits[k]) / R;
    const double se = se_of(p[k], R);
    const double z = se > 0 ? std::abs(ph - p[k]) / se : (ph == p[k] ? 0.0 : INFINITY);
    if (z > 4.0) ++bad;
    if (z > worst) {
      worst = z;
      worst_n = k + 1;
    }
  }
  json d{{"n_max", H}, {"max_z", worst}, {"argmax_n", worst_n}, {"outside_4se", bad}};
  return make("record_law", bad == 0 ? CheckStatus::Pass : CheckStatus::Fail,
              "max |p_hat - a/s| / se = " + format_double(worst) + " over n <= " + std::to_string(H), d);
}

CheckResult check_chi2(const ExperimentConfig& cfg) {
  const std::size_t n_max = std::min(cfg.verify.chi2_n_max, cfg.horizon);
  if (n_max <= cfg.verify.chi2_m_min) return skip("chi2", "horizon too short for any pair");
  const Source src(cfg, n_max);
  const auto pairs = all_pairs(cfg.verify.chi2_m_min, n_max);
  const auto b = chi2_pairwise(src.fn, n_max, pairs, cfg.replications, cfg.threads);
  json d{{"pairs", b.pairs.size()}, {"too_small", b.too_small.size()}, {"rejected", b.rejected},
         {"rejection_rate", b.rejection_rate}, {"std_error", b.std_error}};
  if (b.pairs.size() < 10)
    return make("chi2", CheckStatus::Skip,
                std::to_string(b.too_small.size()) + " of " + std::to_string(pairs.size()) +
                    " pairs have expected cells below 5; raise replications",
                d);
  const bool ok = std::abs(b.rejection_rate - 0.05) <= 4.0 * b.std_error;
  return make("chi2", ok ? CheckStatus::Pass : CheckStatus::Fail,
              "rejection rate " + format_double(b.rejection_rate) + " over " + std::to_string(b.pairs.size()) +
                  " pairs (nominal 0.05 +- " + format_double(4.0 * b.std_error) + ")",
              d);
}

CheckResult check_pmf(const ExperimentConfig& cfg) {
  if (cfg.scheme) return skip("pmf", "threshold scheme: no exact count law");
  const std::size_t n = std::min<std::size_t>(cfg.horizon, 50);
  const FalphaSampler s(cfg.F, cfg.alpha, n, cfg.seed);
  const auto chunks = map_chunks<std::vector<std::size_t>>(cfg.replications, cfg.threads, [&](std::size_t b, std::size_t e) {
    std::vector<std::size_t> h(n + 1, 0);
    Trajectory t;
    for (std::size_t r = b; r < e; ++r) {
      s.sample_into(r, t);
      ++h[t.N[n - 1]];
    }
    return h;
  });
  std::vector<std::size_t> hist(n + 1, 0);
  for (const auto& c : chunks)
    for (std::size_t k = 0; k <= n; ++k) hist[k] += c[k];
  const auto cmp = pmf_tv_compare(hist, exact_count_pmf(cfg.alpha, n));
  return make("pmf", cmp.within() ? CheckStatus::Pass : CheckStatus::Fail,
              "TV " + format_double(cmp.tv) + " vs bound " + format_double(cmp.bound) + " at n = " + std::to_string(n),
              {{"n", n}, {"tv", cmp.tv}, {"bound", cmp.bound}});
}

CheckResult check_embedding(const ExperimentConfig& cfg) {
  if (cfg.scheme) return skip("embedding", "threshold scheme: embedding concerns the pure scheme");
  std::vector<std::size_t> ns;
  for (std::size_t n : {5u, 20u, 50u})
    if (n <= cfg.horizon) ns.push_back(n);
  if (ns.empty()) return skip("embedding", "horizon below 5");
  const std::size_t H = ns.back();
  const auto sums = cfg.alpha.partial_sums(H);
  const ExtremalSampler ext(cfg.F, std::vector<double>(sums.begin() + 1, sums.end()), cfg.seed);
  const FalphaSampler fa(cfg.F, cfg.alpha, H, cfg.seed);
  using Draws = std::vector<std::vector<double>>;
  const auto run = [&](bool extremal) {
    const auto chunks = map_chunks<Draws>(cfg.replications, cfg.threads, [&](std::size_t b, std::size_t e) {
      Draws d(ns.size());
      ExtremalPath p;
      Trajectory t;
      for (std::size_t r = b; r < e; ++r) {
        if (extremal) ext.sample_into(r, p);
        else fa.sample_into(r, t);
        for (std::size_t i = 0; i < ns.size(); ++i) d[i].push_back(extremal ? p.levels[ns[i] - 1] : t.M[ns[i] - 1]);
      }
      return d;
    });
    Draws all(ns.size());
    for (const auto& c : chunks)
      for (std::size_t i = 0; i < ns.size(); ++i) all[i].insert(all[i].end(), c[i].begin(), c[i].end());
    return all;
  };
  const auto a = run(true), b = run(false);
  bool ok = true;
  json rows = json::array();
  for (std::size_t i = 0; i < ns.size(); ++i) {
    const auto ks = ks_two_sample(a[i], b[i]);
    ok = ok && !ks.rejects(0.01);
    rows.push_back({{"n", ns[i]}, {"statistic", ks.statistic}, {"critical_1pct", ks.critical[2]}});
  }
  return make("embedding", ok ? CheckStatus::Pass : CheckStatus::Fail,
              "two-sample KS of extremal M(s_n) vs F^alpha M_n at 1%", {{"rows", rows}});
}

CheckResult check_coupling(const ExperimentConfig& cfg) {
  if (!cfg.scheme) return skip("coupling", "no threshold scheme");
  std::vector<std::size_t> cps;
  for (auto c : cfg.checkpoints)
    if (c <= cfg.horizon) cps.push_back(c);
  const auto rep = coupling_time_distribution(*cfg.scheme, cfg.horizon, cfg.seed, cfg.replications, cps, cfg.threads);
  bool ok = true;
  for (const auto& c : rep.checkpoints)
    if (c.bound && c.fraction > *c.bound + 4.0 * c.std_error) ok = false;
  if (rep.identity_violations && *rep.identity_violations != 0) ok = false;
  if (rep.agreement_violations && *rep.agreement_violations != 0) ok = false;
  return make("coupling", ok ? CheckStatus::Pass : CheckStatus::Fail,
              "unagreed at horizon " + format_double(rep.unagreed_fraction), rep.to_json());
}

CheckResult check_c2(const ExperimentConfig& cfg) {
  if (!cfg.scheme) return skip("c2", "no threshold scheme");
  const auto r = assess_C2(*cfg.scheme, std::max<std::size_t>(cfg.horizon, 2));
  return make("c2", r.passed() ? CheckStatus::Pass : CheckStatus::Fail,
              r.passed() ? "C2 certified" : "C2 fails at " + r.violated, r.to_json());
}

CheckResult check_criterion(const ExperimentConfig& cfg) {
  const auto v = run_criterion(cfg);
  const auto got = to_string(v.verdict);
  if (!cfg.criterion.expect)
    return make("criterion", CheckStatus::Pass, "verdict " + got + " (no expectation set)", v.to_json());
  const bool ok = got == *cfg.criterion.expect;
  return make("criterion", ok ? CheckStatus::Pass : CheckStatus::Fail,
              "verdict " + got + ", expected " + *cfg.criterion.expect, v.to_json());
}

CheckResult check_clt(const ExperimentConfig& cfg) {
  AsymptoticReport regime;
  try {
    regime = classify_asymptotics(cfg.alpha);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::Undecidable) throw;
    return skip("clt", e.what());
  }
  std::vector<std::size_t> ns;
  for (auto n : cfg.verify.clt_n)
    if (n >= 2 && n <= kMaxPmfHorizon) ns.push_back(n);
  if (ns.size() < 2) return skip("clt", "need at least two sizes");
  if (!regime.variance_finite) {
    const auto rows = clt_diagnostic(cfg.alpha, ns);
    bool ok = true;
    json t = json::array();
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (i > 0 && !(rows[i].ks < rows[i - 1].ks)) ok = false;
      t.push_back({{"n", rows[i].n}, {"ks", rows[i].ks}, {"mean", rows[i].mean}, {"variance", rows[i].variance}});
    }
    return make("clt", ok ? CheckStatus::Pass : CheckStatus::Fail, "KS to the normal strictly decreasing in n",
                {{"rows", t}});
  }
  const auto rows = deviation_quantiles(cfg.alpha, ns, {0.1, 0.5, 0.9});
  bool ok = true;
  json t = json::array();
  for (std::size_t i = 0; i < rows.size(); ++i) {
    json q;
    for (const auto& [p, v] : rows[i].quantiles) q[format_double(p)] = v;
    t.push_back({{"n", rows[i].n}, {"quantiles", q}});
    if (i >= 2)
      for (std::size_t k = 0; k < 3; ++k) {
        const double d1 = std::abs(rows[i - 1].quantiles[k].second - rows[i - 2].quantiles[k].second);
        const double d2 = std::abs(rows[i].quantiles[k].second - rows[i - 1].quantiles[k].second);
        if (d2 > d1 + 1e-12) ok = false;
      }
  }
  return make("clt", ok ? CheckStatus::Pass : CheckStatus::Fail,
              "bounded variance: centred count quantiles stabilise", {{"rows", t}});
}

CheckResult check_joint_law(const ExperimentConfig& cfg) {
  if (!cfg.scheme) return skip("joint_law", "no threshold scheme");
  const auto& s = *cfg.scheme;
  if (!s.levels.is_flat() || s.levels.is_neg_infinity() || !s.independent() || !s.exact_above_threshold())
    return skip("joint_law", "needs independent X, a flat finite threshold and delta = 0");
  std::size_t top = 0;
  for (const auto& [m, n] : cfg.verify.joint_pairs) top = std::max(top, n);
  if (top > cfg.horizon) return skip("joint_law", "pairs exceed the horizon");
  const auto rows = joint_assembly(s, cfg.verify.joint_pairs, cfg.replications, cfg.seed, cfg.threads);
  bool ok = true;
  json detail = json::array();
  for (const auto& r : rows) {
    ok = ok && r.passes();
    detail.push_back({{"m", r.m}, {"n", r.n}, {"P1", r.P1}, {"joint", r.joint}, {"P2", r.P2}, {"c", r.c},
                      {"assembly_residual", r.residual}, {"assembly_se", r.residual_se},
                      {"p2_residual", r.p2_residual}, {"p2_se", r.p2_se}});
  }
  return make("joint_law", ok ? CheckStatus::Pass : CheckStatus::Fail,
              "joint = P1 + P2 + c and P2 = kappa b_m within 4 s.e.",
              {{"h", cfg.F.cdf(s.levels.level(1))}, {"rows", detail}});
}

void print_check(std::ostream& log, const CheckResult& r) {
  log << (r.status == CheckStatus::Pass ? "PASS" : r.status == CheckStatus::Fail ? "FAIL" : "SKIP") << " " << r.name
      << ": " << r.summary << "\n";
}

}  // namespace

std::string to_string(CheckStatus s) {
  switch (s) {
    case CheckStatus::Pass: return "pass";
    case CheckStatus::Fail: return "fail";
    case CheckStatus::Skip: return "skip";
  }
  return "?";
}

std::vector<std::string> default_checks(const ExperimentConfig& cfg) {
  if (cfg.scheme) return {"chi2", "coupling", "c2", "criterion", "joint_law"};
  return {"record_law", "chi2", "pmf", "embedding", "criterion", "clt"};
}

CheckResult run_check(const std::string& name, const ExperimentConfig& cfg) {
  if (name == "record_law") return check_record_law(cfg);
  if (name == "chi2") return check_chi2(cfg);
  if (name == "pmf") return check_pmf(cfg);
  if (name == "embedding") return check_embedding(cfg);
  if (name == "coupling") return check_coupling(cfg);
  if (name == "c2") return check_c2(cfg);
  if (name == "criterion") return check_criterion(cfg);
  if (name == "clt") return check_clt(cfg);
  if (name == "joint_law") return check_joint_law(cfg);
  fail(ErrorCode::ConfigError, "verify.checks: unknown check '" + name + "'");
}

int cmd_simulate(const ExperimentConfig& cfg, std::ostream& log) {
  json summary;
  summary["config"] = cfg.canonical;
  std::optional<C2Report> c2;
  if (cfg.scheme) c2 = certify_C2(*cfg.scheme, std::max<std::size_t>(cfg.horizon, 2));

  const Source src(cfg, cfg.horizon);
  const std::size_t H = cfg.horizon;
  struct Acc {
    std::vector<std::size_t> records;
    double count_sum = 0.0, count_sq = 0.0;
  };
  const auto chunks = map_chunks<Acc>(cfg.replications, cfg.threads, [&](std::size_t b, std::size_t e) {
    Acc a;
    a.records.assign(H, 0);
    Trajectory t;
    for (std::size_t r = b; r < e; ++r) {
      src.fn(r, t);
      for (std::size_t k = 0; k < H; ++k) a.records[k] += t.I[k];
      const double c = t.N[H - 1];
      a.count_sum += c;
      a.count_sq += c * c;
    }
    return a;
  });
  std::vector<std::size_t> rec(H, 0);
  double cs = 0.0, cq = 0.0;
  for (const auto& c : chunks) {
    for (std::size_t k = 0; k < H; ++k) rec[k] += c.records[k];
    cs += c.count_sum;
    cq += c.count_sq;
  }
  const double R = static_cast<double>(cfg.replications);
  const auto law = record_law_summary(cfg.alpha, H);
  write_file(cfg, "record_probabilities.csv", csv([&](std::ostream& os) {
               CsvWriter w(os);
               w.cell("n").cell(cfg.scheme ? "p_pure" : "p_exact").cell("p_hat").cell("std_error").end_row();
               for (std::size_t k = 0; k < H; ++k) {
                 const double ph = static_cast<double>(rec[k]) / R;
                 w.cell(k + 1).cell(law.p[k]).cell(ph).cell(se_of(ph, R)).end_row();
               }
             }),
             log);

  const double mean = cs / R;
  summary["count_at_horizon"] = {{"mean", mean},
                                 {"std_error", std::sqrt(std::max(0.0, cq / R - mean * mean) / R)},
                                 {"pure_scheme_mean", law.E[H - 1]},
                                 {"pure_scheme_variance", law.V[H - 1]}};
  if (cfg.scheme) {
    const auto t = src.coupled->sample(0);
    write_file(cfg, "coupled.csv", csv([&](std::ostream& os) { write_coupled_csv(os, t); }), log);
    summary["C2"] = c2->to_json();
    std::vector<std::size_t> cps;
    for (auto c : cfg.checkpoints)
      if (c <= H) cps.push_back(c);
    summary["coupling"] =
        coupling_time_distribution(*cfg.scheme, H, cfg.seed, cfg.replications, cps, cfg.threads).to_json();
  } else {
    const auto t = src.pure->sample(0);
    write_file(cfg, "trajectory.csv", csv([&](std::ostream& os) { write_trajectory_csv(os, t); }), log);
  }
  write_file(cfg, "summary.json", dump(summary), log);
  return 0;
}

int cmd_exact(const ExperimentConfig& cfg, std::ostream& log) {
  const std::size_t H = cfg.horizon;
  const auto law = record_law_summary(cfg.alpha, H);
  write_file(cfg, "record_law.csv", csv([&](std::ostream& os) {
               CsvWriter w(os);
               w.cell("n").cell("p").cell("E").cell("V").end_row();
               for (std::size_t k = 0; k < H; ++k) w.cell(k + 1).cell(law.p[k]).cell(law.E[k]).cell(law.V[k]).end_row();
             }),
             log);
  auto ns = cfg.exact_n;
  if (ns.empty()) ns.push_back(H);
  for (auto n : ns) {
    if (n > kMaxPmfHorizon)
      fail(ErrorCode::HorizonTooLarge, "exact.n: " + std::to_string(n) + " exceeds the pmf limit " +
                                           std::to_string(kMaxPmfHorizon));
    const auto pmf = exact_count_pmf(cfg.alpha, n);
    write_file(cfg, "pmf_" + std::to_string(n) + ".csv", csv([&](std::ostream& os) { write_pmf_csv(os, pmf); }), log);
  }
  json out;
  out["config"] = cfg.canonical;
  try {
    const auto r = classify_asymptotics(cfg.alpha);
    json st = json::array();
    for (const auto& s : r.statements)
      st.push_back({{"id", s.id}, {"applies", s.applies}, {"claim", s.claim}, {"limit", s.limit}});
    out["asymptotics"] = {{"C1", r.c1},
                          {"p_limit", to_string(r.p_limit)},
                          {"variance_finite", r.variance_finite},
                          {"statements", st}};
    if (std::isfinite(r.p_limit_value)) out["asymptotics"]["p_limit_value"] = r.p_limit_value;
  } catch (const Error& e) {
    if (e.code() != ErrorCode::Undecidable) throw;
    out["asymptotics"] = {{"undecidable", e.what()}};
  }
  write_file(cfg, "exact.json", dump(out), log);
  return 0;
}

int cmd_criterion(const ExperimentConfig& cfg, std::ostream& log) {
  const auto v = run_criterion(cfg);
  json out = v.to_json();
  out["method"] = cfg.criterion.method;
  out["horizon"] = cfg.horizon;
  write_file(cfg, "criterion.json", dump(out), log);
  write_file(cfg, "criterion_trace.csv",
             csv([&](std::ostream& os) { write_trace_csv(os, v.trace, cfg.criterion.method == "j_log" ? "t" : "n"); }),
             log);
  log << "verdict: " << to_string(v.verdict) << "\n";
  return 0;
}

int cmd_couple(const ExperimentConfig& cfg, std::ostream& log) {
  if (!cfg.scheme) fail(ErrorCode::ConfigError, "scheme.below_model: required by couple");
  std::vector<std::size_t> cps;
  for (auto c : cfg.checkpoints)
    if (c <= cfg.horizon) cps.push_back(c);
  const CoupledSampler s(*cfg.scheme, cfg.horizon, cfg.seed);
  const auto t = s.sample(0);
  write_file(cfg, "coupled.csv", csv([&](std::ostream& os) { write_coupled_csv(os, t); }), log);
  json out;
  out["config"] = cfg.canonical;
  out["coupling"] =
      coupling_time_distribution(*cfg.scheme, cfg.horizon, cfg.seed, cfg.replications, cps, cfg.threads).to_json();
  out["C2"] = assess_C2(*cfg.scheme, std::max<std::size_t>(cfg.horizon, 2)).to_json();
  write_file(cfg, "coupling.json", dump(out), log);
  return 0;
}

int cmd_verify(const ExperimentConfig& cfg, std::ostream& log) {
  auto names = cfg.verify.checks.empty() ? default_checks(cfg) : cfg.verify.checks;
  json results = json::array();
  bool failed = false;
  for (const auto& n : names) {
    const auto r = run_check(n, cfg);
    print_check(log, r);
    failed = failed || r.status == CheckStatus::Fail;
    results.push_back({{"name", r.name}, {"status", to_string(r.status)}, {"summary", r.summary}, {"detail", r.detail}});
  }
  json out{{"config", cfg.canonical}, {"checks", results}, {"passed", !failed}};
  write_file(cfg, "verify.json", dump(out), log);
  return failed ? 1 : 0;
}

int cmd_report(const ExperimentConfig& cfg, std::ostream& log) {
  json out;
  out["config"] = cfg.canonical;
  out["scheme"] = cfg.scheme ? cfg.scheme->describe()
                             : "F=" + cfg.F.describe() + ", alpha=" + cfg.alpha.describe();
  out["criterion"] = run_criterion(cfg).to_json();
  const bool flat = cfg.levels.is_flat() && !cfg.levels.is_neg_infinity();
  if (flat) {
    const double h = cfg.F.cdf(cfg.levels.level(1));
    out["h"] = h;
    const std::size_t N = std::min<std::size_t>(cfg.horizon, 500);
    std::vector<std::size_t> ks;
    for (std::size_t k : {5u, 10u, 20u, 40u})
      if (k < N) ks.push_back(k);
    json table = json::array();
    if (!ks.empty() && h < 1.0) {
      for (const auto& r : sup_ratio_decay(cfg.alpha, h, ks, N))
        table.push_back({{"k", r.k}, {"sup_halfwidth", r.sup_halfwidth}, {"sup_derived", r.sup_derived},
                         {"condition", r.condition}});
    }
    out["ratio_decay"] = {{"N", N}, {"rows", table}};
    std::vector<JointRecordLaw> rows;
    const std::size_t top = std::min<std::size_t>(cfg.horizon, 20);
    for (std::size_t m = 1; m < top; ++m)
      for (std::size_t n = m + 1; n <= top; ++n) rows.push_back(joint_record_law(cfg.alpha, h, m, n));
    write_file(cfg, "joint.csv", csv([&](std::ostream& os) { write_joint_csv(os, rows); }), log);
  }
  write_file(cfg, "report.json", dump(out), log);
  return 0;
}

int run_command(const std::string& name, const ExperimentConfig& cfg, std::ostream& log) {
  if (name == "simulate") return cmd_simulate(cfg, log);
  if (name == "exact") return cmd_exact(cfg, log);
  if (name == "criterion") return cmd_criterion(cfg, log);
  if (name == "couple") return cmd_couple(cfg, log);
  if (name == "verify") return cmd_verify(cfg, log);
  if (name == "report") return cmd_report(cfg, log);
  fail(ErrorCode::ConfigError, "unknown command '" + name + "'");
}

int exit_code_for(const Error& e) {
  switch (e.code()) {
    case ErrorCode::ConfigError: return 2;
    case ErrorCode::CertificationFailed: return 3;
    default: return 4;
  }
}

}  // namespace records
