#include "records/stats.hpp"

#include <algorithm>
#include <cmath>

#include "records/csv.hpp"
#include "records/error.hpp"
#include "records/parallel.hpp"

namespace records {

namespace {

// 1-dof chi-square quantiles and Kolmogorov limiting quantiles at 10/5/1%.
constexpr std::array<double, 3> kChi2Crit{2.705543, 3.841459, 6.634897};
constexpr std::array<double, 3> kKsCoef{1.2238, 1.3581, 1.6276};

std::size_t level_index(double level) {
  for (std::size_t i = 0; i < kTestLevels.size(); ++i)
    if (std::abs(kTestLevels[i] - level) < 1e-12) return i;
  fail(ErrorCode::InvalidArgument, "test level must be one of 0.10, 0.05, 0.01");
}

double quantile_sorted(const std::vector<double>& v, double p) {
  const auto idx = static_cast<std::size_t>(std::ceil(p * static_cast<double>(v.size())));
  return v[std::min(v.size() - 1, idx == 0 ? 0 : idx - 1)];
}

}  // namespace

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

nlohmann::json McEstimate::to_json() const {
  return {{"point", point}, {"std_error", std_error}, {"replications", replications}, {"seed", seed}};
}

TrajectorySource falpha_source(const FalphaSampler& sampler) {
  return [&sampler](std::uint64_t rep, Trajectory& t) { sampler.sample_into(rep, t); };
}

McEstimate estimate_indicator_prob(const TrajectorySource& source,
                                   const std::function<bool(const Trajectory&)>& pred,
                                   std::size_t replications, std::uint64_t seed, unsigned threads) {
  require(replications >= 100, ErrorCode::InvalidArgument, "need at least 100 replications");
  const auto hits = map_chunks<std::size_t>(replications, threads, [&](std::size_t b, std::size_t e) {
    std::size_t c = 0;
    Trajectory t;
    for (std::size_t r = b; r < e; ++r) {
      source(r, t);
      c += pred(t) ? 1 : 0;
    }
    return c;
  });
  std::size_t total = 0;
  for (auto h : hits) total += h;
  McEstimate est;
  est.replications = replications;
  est.seed = seed;
  const double R = static_cast<double>(replications);
  est.point = static_cast<double>(total) / R;
  est.std_error = std::sqrt(est.point * (1.0 - est.point) / R);
  return est;
}

bool TestReport::rejects(double level) const { return statistic > critical[level_index(level)]; }

nlohmann::json TestReport::to_json() const {
  nlohmann::json crit;
  for (std::size_t i = 0; i < kTestLevels.size(); ++i) crit[format_double(kTestLevels[i])] = critical[i];
  return {{"test", name},
          {"statistic", std::isfinite(statistic) ? nlohmann::json(statistic) : nlohmann::json("inf")},
          {"critical_values", crit},
          {"reject_5pct", rejects(0.05)},
          {"sample_size", sample_size}};
}

TestReport chi2_2x2(std::size_t n11, std::size_t n10, std::size_t n01, std::size_t n00) {
  const double a = static_cast<double>(n11), b = static_cast<double>(n10);
  const double c = static_cast<double>(n01), d = static_cast<double>(n00);
  const double N = a + b + c + d;
  const double r1 = a + b, r0 = c + d, c1 = a + c, c0 = b + d;
  const std::array<double, 4> obs{a, b, c, d};
  const std::array<double, 4> expct{r1 * c1 / N, r1 * c0 / N, r0 * c1 / N, r0 * c0 / N};
  for (double e : expct)
    if (!(e >= 5.0))
      fail(ErrorCode::CellTooSmall, "expected 2x2 cell count " + format_double(e) + " is below 5");
  double stat = 0.0;
  for (std::size_t i = 0; i < 4; ++i) stat += (obs[i] - expct[i]) * (obs[i] - expct[i]) / expct[i];
  TestReport r;
  r.name = "chi2_2x2";
  r.statistic = stat;
  r.critical = kChi2Crit;
  r.sample_size = static_cast<std::size_t>(N);
  return r;
}

nlohmann::json Chi2Battery::to_json() const {
  nlohmann::json p = nlohmann::json::array();
  for (const auto& x : pairs) {
    auto j = x.test.to_json();
    j["m"] = x.m;
    j["n"] = x.n;
    p.push_back(j);
  }
  return {{"pairs", p},
          {"rejected", rejected},
          {"tested", pairs.size()},
          {"too_small", too_small.size()},
          {"rejection_rate", rejection_rate},
          {"std_error", std_error}};
}

Chi2Battery chi2_pairwise(const TrajectorySource& source, std::size_t horizon,
                          const std::vector<std::pair<std::size_t, std::size_t>>& pairs,
                          std::size_t replications, unsigned threads) {
  for (const auto& [m, n] : pairs)
    require(m >= 1 && m < n && n <= horizon, ErrorCode::IndexOrder,
            "pair (" + std::to_string(m) + ", " + std::to_string(n) + ") needs 1 <= m < n <= horizon");
  using Counts = std::vector<std::array<std::size_t, 4>>;
  const auto chunks = map_chunks<Counts>(replications, threads, [&](std::size_t b, std::size_t e) {
    Counts c(pairs.size(), {0, 0, 0, 0});
    Trajectory t;
    for (std::size_t r = b; r < e; ++r) {
      source(r, t);
      for (std::size_t i = 0; i < pairs.size(); ++i) {
        const int im = t.I[pairs[i].first - 1], in = t.I[pairs[i].second - 1];
        ++c[i][static_cast<std::size_t>((1 - im) * 2 + (1 - in))];
      }
    }
    return c;
  });
  Counts total(pairs.size(), {0, 0, 0, 0});
  for (const auto& c : chunks)
    for (std::size_t i = 0; i < pairs.size(); ++i)
      for (std::size_t k = 0; k < 4; ++k) total[i][k] += c[i][k];

  Chi2Battery out;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    try {
      auto rep = chi2_2x2(total[i][0], total[i][1], total[i][2], total[i][3]);
      out.rejected += rep.rejects(0.05) ? 1 : 0;
      out.pairs.push_back({pairs[i].first, pairs[i].second, rep});
    } catch (const Error& e) {
      if (e.code() != ErrorCode::CellTooSmall) throw;
      out.too_small.push_back(pairs[i]);
    }
  }
  if (!out.pairs.empty()) {
    const double k = static_cast<double>(out.pairs.size());
    out.rejection_rate = static_cast<double>(out.rejected) / k;
    out.std_error = std::sqrt(0.05 * 0.95 / k);
  }
  return out;
}

std::vector<std::pair<std::size_t, std::size_t>> all_pairs(std::size_t m_min, std::size_t n_max) {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (std::size_t m = std::max<std::size_t>(m_min, 1); m < n_max; ++m)
    for (std::size_t n = m + 1; n <= n_max; ++n) out.emplace_back(m, n);
  return out;
}

TestReport ks_one_sample(std::vector<double> sample, const std::function<double(double)>& cdf) {
  require(!sample.empty(), ErrorCode::InvalidArgument, "KS needs a non-empty sample");
  std::sort(sample.begin(), sample.end());
  const double n = static_cast<double>(sample.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const double f = cdf(sample[i]);
    d = std::max({d, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
  }
  TestReport r;
  r.name = "ks_one_sample";
  r.statistic = d;
  for (std::size_t i = 0; i < 3; ++i) r.critical[i] = kKsCoef[i] / std::sqrt(n);
  r.sample_size = sample.size();
  return r;
}

TestReport ks_two_sample(std::vector<double> a, std::vector<double> b) {
  require(!a.empty() && !b.empty(), ErrorCode::InvalidArgument, "KS needs non-empty samples");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] == x) ++i;
    while (j < b.size() && b[j] == x) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  TestReport r;
  r.name = "ks_two_sample";
  r.statistic = d;
  const double scale = std::sqrt((na + nb) / (na * nb));
  for (std::size_t k = 0; k < 3; ++k) r.critical[k] = kKsCoef[k] * scale;
  r.sample_size = a.size() + b.size();
  return r;
}

PmfComparison pmf_tv_compare(const std::vector<std::size_t>& counts, const std::vector<double>& pmf) {
  if (counts.size() > pmf.size()) {
    for (std::size_t k = pmf.size(); k < counts.size(); ++k)
      if (counts[k] != 0)
        fail(ErrorCode::SupportMismatch, "histogram has mass at k = " + std::to_string(k) +
                                             " beyond the exact support");
  }
  double R = 0.0;
  for (auto c : counts) R += static_cast<double>(c);
  require(R > 0.0, ErrorCode::InvalidArgument, "empty histogram");
  double tv = 0.0, mean_bound = 0.0;
  for (std::size_t k = 0; k < pmf.size(); ++k) {
    const double emp = k < counts.size() ? static_cast<double>(counts[k]) / R : 0.0;
    tv += std::abs(emp - pmf[k]);
    mean_bound += std::sqrt(pmf[k] * (1.0 - pmf[k]) / R);
  }
  // E[TV] <= mean_bound / 2; one draw moves TV by at most 1/R, so the
  // deviation term holds with probability 1 - 1e-4.
  const double dev = std::sqrt(std::log(1e4) / (2.0 * R));
  return {0.5 * tv, 0.5 * mean_bound + dev};
}

PmfComparison pmf_tv_compare(const std::vector<double>& law, const std::vector<double>& pmf) {
  if (law.size() != pmf.size())
    fail(ErrorCode::SupportMismatch, "laws have supports of different length");
  double tv = 0.0;
  for (std::size_t k = 0; k < pmf.size(); ++k) tv += std::abs(law[k] - pmf[k]);
  return {0.5 * tv, 0.0};
}

std::vector<CltRow> clt_diagnostic(const AlphaSequence& alpha, const std::vector<std::size_t>& n_list) {
  const auto regime = classify_asymptotics(alpha);
  if (regime.variance_finite)
    fail(ErrorCode::WrongRegime,
         "the record-count variance stays bounded for " + alpha.describe() +
             "; count - mean converges instead");
  std::vector<CltRow> out;
  for (auto n : n_list) {
    require(n >= 2, ErrorCode::InvalidArgument, "CLT diagnostic needs n >= 2");
    const auto pmf = exact_count_pmf(alpha, n);
    const auto law = record_law_summary(alpha, n);
    CltRow row{n, law.E[n - 1], law.V[n - 1], 0.0};
    const double sd = std::sqrt(row.variance);
    double cum = 0.0;
    for (std::size_t k = 0; k < pmf.size(); ++k) {
      const double phi = normal_cdf((static_cast<double>(k) - row.mean) / sd);
      row.ks = std::max(row.ks, std::abs(cum - phi));
      cum += pmf[k];
      row.ks = std::max(row.ks, std::abs(std::min(cum, 1.0) - phi));
    }
    out.push_back(row);
  }
  return out;
}

std::vector<DeviationRow> deviation_quantiles(const AlphaSequence& alpha,
                                              const std::vector<std::size_t>& n_list,
                                              const std::vector<double>& probs) {
  std::vector<DeviationRow> out;
  for (auto n : n_list) {
    const auto pmf = exact_count_pmf(alpha, n);
    const auto law = record_law_summary(alpha, n);
    DeviationRow row{n, law.E[n - 1], {}};
    for (double p : probs) {
      double cum = 0.0;
      std::size_t k = 0;
      for (; k + 1 < pmf.size(); ++k) {
        cum += pmf[k];
        if (cum >= p - 1e-12) break;
      }
      row.quantiles.emplace_back(p, static_cast<double>(k) - row.mean);
    }
    out.push_back(row);
  }
  return out;
}

nlohmann::json AsDiagnostic::to_json() const {
  nlohmann::json rs = nlohmann::json::array();
  for (const auto& r : rows) {
    nlohmann::json a, b;
    for (const auto& [p, v] : r.ratio_dev) a[format_double(p)] = v;
    for (const auto& [p, v] : r.log_dev) b[format_double(p)] = v;
    rs.push_back({{"n0", r.n0}, {"sup_ratio_deviation", a}, {"sup_log_deviation", b}});
  }
  return {{"rows", rs},
          {"replications", replications},
          {"horizon", horizon},
          {"label", label},
          {"decreasing", decreasing}};
}

AsDiagnostic as_convergence_diagnostic(const TrajectorySource& source, const AlphaSequence& alpha,
                                       std::size_t horizon, std::size_t replications,
                                       unsigned threads) {
  const auto c1 = alpha.c1();
  if (!c1 || !*c1) fail(ErrorCode::WrongRegime, "a.s. diagnostic needs C1 for " + alpha.describe());
  require(horizon >= 20, ErrorCode::InvalidArgument, "a.s. diagnostic needs horizon >= 20");
  const auto law = record_law_summary(alpha, horizon);
  const auto s = alpha.partial_sums(horizon);
  const std::array<std::size_t, 3> n0{horizon / 10, horizon / 4, horizon / 2};

  using Sups = std::vector<std::array<double, 6>>;
  const auto chunks = map_chunks<Sups>(replications, threads, [&](std::size_t b, std::size_t e) {
    Sups out;
    Trajectory t;
    for (std::size_t r = b; r < e; ++r) {
      source(r, t);
      std::array<double, 6> sup{};
      double ratio = 0.0, logd = 0.0;
      std::size_t slot = 2;
      for (std::size_t n = horizon; n >= n0[0]; --n) {
        const double dev = static_cast<double>(t.N[n - 1]) - law.E[n - 1];
        ratio = std::max(ratio, std::abs(dev) / law.E[n - 1]);
        const double ls = std::log(s[n]);
        if (ls > 0.0) logd = std::max(logd, std::abs(dev) / ls);
        while (n == n0[slot]) {
          sup[slot] = ratio;
          sup[3 + slot] = logd;
          if (slot == 0) break;
          --slot;
        }
      }
      out.push_back(sup);
    }
    return out;
  });
  std::array<std::vector<double>, 6> cols;
  for (const auto& c : chunks)
    for (const auto& row : c)
      for (std::size_t i = 0; i < 6; ++i) cols[i].push_back(row[i]);
  for (auto& c : cols) std::sort(c.begin(), c.end());

  AsDiagnostic d;
  d.replications = replications;
  d.horizon = horizon;
  for (std::size_t i = 0; i < 3; ++i) {
    AsRow row;
    row.n0 = n0[i];
    for (double p : {0.5, 0.9}) {
      row.ratio_dev.emplace_back(p, quantile_sorted(cols[i], p));
      row.log_dev.emplace_back(p, quantile_sorted(cols[3 + i], p));
    }
    d.rows.push_back(row);
  }
  d.decreasing = d.rows[1].ratio_dev[0].second < d.rows[0].ratio_dev[0].second &&
                 d.rows[2].ratio_dev[0].second < d.rows[1].ratio_dev[0].second;
  return d;
}

}  // namespace records
