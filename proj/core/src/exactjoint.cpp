#include "records/exactjoint.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "records/csv.hpp"
#include "records/error.hpp"
#include "records/parallel.hpp"

namespace records {

double Interval::deviation_from(double x) const { return std::max(std::abs(hi - x), std::abs(x - lo)); }

Interval operator+(Interval a, Interval b) { return {a.lo + b.lo, a.hi + b.hi}; }
Interval operator+(Interval a, double b) { return {a.lo + b, a.hi + b}; }
Interval operator*(double k, Interval a) { return {k * a.lo, k * a.hi}; }

namespace {

// h^s, with 0^s = 0 for s > 0.
double hpow(double log_h, double s) { return std::exp(s * log_h); }

// 1 - h^s
double one_minus_hpow(double log_h, double s) { return -std::expm1(s * log_h); }

struct Terms {
  double am, an, sm, sn, log_h;
};

Terms terms(const AlphaSequence& alpha, double h, std::size_t m, std::size_t n) {
  if (n <= m || m < 1) fail(ErrorCode::IndexOrder, "joint law needs n > m >= 1");
  require(h >= 0.0 && h < 1.0, ErrorCode::InvalidArgument, "h must lie in [0, 1)");
  Terms t{alpha.term(m), alpha.term(n), alpha.partial_sum(m), alpha.partial_sum(n),
          h == 0.0 ? -std::numeric_limits<double>::infinity() : std::log(h)};
  require(std::isfinite(t.sn) && t.sn > t.sm, ErrorCode::OutOfRange,
          "partial sums overflow or do not increase at n = " + std::to_string(n));
  return t;
}

// P1 = a_m a_n / (s_n - s_m) ((1 - h^{s_m}) / s_m - (1 - h^{s_n}) / s_n)
double p1(const Terms& t) {
  const double d = one_minus_hpow(t.log_h, t.sm) / t.sm - one_minus_hpow(t.log_h, t.sn) / t.sn;
  return t.am * t.an / (t.sn - t.sm) * std::max(0.0, d);
}

double p2_factor(const Terms& t) {
  return t.an * one_minus_hpow(t.log_h, t.sn - t.sm) / (t.sn - t.sm);
}

// max of s^2 h^s over [a, b]; the function peaks at s = -2 / ln h.
double max_s2hs(double log_h, double a, double b) {
  if (std::isinf(log_h)) return 0.0;
  const double peak = -2.0 / log_h;
  const double s = std::clamp(peak, a, b);
  return s * s * hpow(log_h, s);
}

}  // namespace

JointRecordLaw joint_record_law(const AlphaSequence& alpha, double h, std::size_t m,
                                std::size_t n, const KnownTerms& known) {
  const auto t = terms(alpha, h, m, n);
  JointRecordLaw j;
  j.m = m;
  j.n = n;
  j.h = h;
  j.P1 = p1(t);
  const auto box = [](std::optional<double> v, double top) {
    return v ? Interval::point(*v) : Interval{0.0, top};
  };
  j.b_m = box(known.b_m, hpow(t.log_h, t.sm));
  j.b_n = box(known.b_n, hpow(t.log_h, t.sn));
  j.c_mn = box(known.c_mn, hpow(t.log_h, t.sn));
  const double kappa = p2_factor(t);
  j.P2 = kappa * j.b_m;
  j.joint = (j.P2 + j.c_mn) + j.P1;
  const double Am = t.am / t.sm * one_minus_hpow(t.log_h, t.sm);
  const double An = t.an / t.sn * one_minus_hpow(t.log_h, t.sn);
  j.marginal_m = j.b_m + Am;
  j.marginal_n = j.b_n + An;

  // The ratio is monotone in each unknown separately, so its range over the
  // box is attained at a vertex.
  if (j.marginal_m.lo <= 0.0 || j.marginal_n.lo <= 0.0) {
    j.ratio = {-std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
    return j;
  }
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (double b : {j.b_m.lo, j.b_m.hi})
    for (double bn : {j.b_n.lo, j.b_n.hi})
      for (double c : {j.c_mn.lo, j.c_mn.hi}) {
        const double r = (j.P1 + kappa * b + c) / ((Am + b) * (An + bn));
        lo = std::min(lo, r);
        hi = std::max(hi, r);
      }
  j.ratio = {lo, hi};
  return j;
}

KnownTerms pure_scheme_terms(const AlphaSequence& alpha, double h, std::size_t m, std::size_t n) {
  const auto t = terms(alpha, h, m, n);
  const double pm = t.am / t.sm, pn = t.an / t.sn;
  return {pm * hpow(t.log_h, t.sm), pn * hpow(t.log_h, t.sn), pm * pn * hpow(t.log_h, t.sn)};
}

double theorem3_condition(const AlphaSequence& alpha, double h, std::size_t k) {
  require(k >= 1, ErrorCode::InvalidArgument, "k must be >= 1");
  require(h >= 0.0 && h < 1.0, ErrorCode::InvalidArgument, "h must lie in [0, 1)");
  if (h == 0.0) return 0.0;
  const double a = alpha.term(k), s = alpha.partial_sum(k);
  const double log_v = 2.0 * std::log(s) - std::log(a) + std::log(std::max(a, 1.0)) + s * std::log(h);
  return std::exp(log_v);
}

RatioBound ratio_bound(const AlphaSequence& alpha, double h, std::size_t m, std::size_t n) {
  const auto j = joint_record_law(alpha, h, m, n);
  if (!(j.marginal_m.lo > 0.0) || !(j.marginal_n.lo > 0.0)) {
    fail(ErrorCode::DegenerateDenominator,
         "marginal record probability lower bound vanishes at m = " + std::to_string(m));
  }
  const auto t = terms(alpha, h, m, n);
  RatioBound r;
  r.ratio = j.ratio;
  if (h == 0.0) {
    r.derived = {1.0, 1.0};
    return r;
  }
  const double scale = t.sm * t.sn / (t.am * t.an);
  const double p1n = scale * j.P1;
  const double e2 = std::abs(t.log_h) * max_s2hs(t.log_h, t.sm, t.sn) / t.am;
  const double e3 = scale * hpow(t.log_h, t.sn);
  const double em = t.sm / t.am * hpow(t.log_h, t.sm);
  const double en = t.sn / t.an * hpow(t.log_h, t.sn);
  const double lo = p1n / ((1.0 + em) * (1.0 + en));
  const double den = (1.0 - em) * (1.0 - en);
  const double hi = den > 0.0 ? (p1n + e2 + e3) / den : std::numeric_limits<double>::infinity();
  r.derived = {lo, hi};
  return r;
}

std::vector<SupRatioRow> sup_ratio_decay(const AlphaSequence& alpha, double h,
                                         const std::vector<std::size_t>& k_list, std::size_t N) {
  require(N >= 2, ErrorCode::InvalidArgument, "N must be >= 2");
  std::size_t k_min = N;
  for (auto k : k_list) {
    require(k >= 1 && k < N, ErrorCode::InvalidArgument, "each k must satisfy 1 <= k < N");
    k_min = std::min(k_min, k);
  }
  // row maxima over n for each m, then suffix maxima over m
  std::vector<double> row(N + 1, 0.0), row_derived(N + 1, 0.0);
  if (h > 0.0) {
    for (std::size_t m = k_min; m < N; ++m)
      for (std::size_t n = m + 1; n <= N; ++n) {
        const auto r = ratio_bound(alpha, h, m, n);
        row[m] = std::max(row[m], r.halfwidth());
        row_derived[m] = std::max(row_derived[m], r.derived_halfwidth());
      }
  }
  for (std::size_t m = N; m-- > k_min;) {
    row[m] = std::max(row[m], row[m + 1]);
    row_derived[m] = std::max(row_derived[m], row_derived[m + 1]);
  }
  std::vector<SupRatioRow> out;
  for (auto k : k_list) out.push_back({k, row[k], row_derived[k], theorem3_condition(alpha, h, k)});
  return out;
}

std::vector<AssemblyRow> joint_assembly(const ThresholdSchemeSpec& spec,
                                        const std::vector<std::pair<std::size_t, std::size_t>>& pairs,
                                        std::size_t replications, std::uint64_t seed, unsigned threads) {
  require(spec.levels.is_flat() && !spec.levels.is_neg_infinity() && spec.independent() &&
              spec.exact_above_threshold(),
          ErrorCode::WrongRegime, "joint assembly needs independent X, a flat finite level and delta = 0");
  require(replications >= 2, ErrorCode::InvalidArgument, "joint assembly needs at least 2 replications");
  std::size_t top = 0;
  for (const auto& [m, n] : pairs) {
    require(m >= 1 && m < n, ErrorCode::IndexOrder,
            "pair (" + std::to_string(m) + ", " + std::to_string(n) + ") needs 1 <= m < n");
    top = std::max(top, n);
  }
  const double l = spec.levels.level(1);
  const double h = spec.F.cdf(l);
  std::vector<double> kappa;
  for (const auto& [m, n] : pairs) {
    const double sm = spec.alpha.partial_sum(m), sn = spec.alpha.partial_sum(n);
    kappa.push_back(spec.alpha.term(n) * -std::expm1((sn - sm) * std::log(h)) / (sn - sm));
  }
  const CoupledSampler sampler(spec, top, seed);
  // per pair: both, P2 event, c event, sum z1, sum z1^2, sum z2, sum z2^2
  using Acc = std::vector<std::array<double, 7>>;
  const auto chunks = map_chunks<Acc>(replications, threads, [&](std::size_t b, std::size_t e) {
    Acc a(pairs.size(), std::array<double, 7>{});
    CoupledTrajectory t;
    for (std::size_t r = b; r < e; ++r) {
      sampler.sample_into(r, t);
      const auto& x = t.x;
      for (std::size_t i = 0; i < pairs.size(); ++i) {
        const auto m = pairs[i].first - 1, n = pairs[i].second - 1;
        const double both = x.I[m] && x.I[n] ? 1.0 : 0.0;
        const double bm = x.I[m] && x.M[m] <= l ? 1.0 : 0.0;
        const double c = both > 0 && x.M[n] <= l ? 1.0 : 0.0;
        const double p2 = both > 0 && x.M[m] <= l && x.M[n] > l ? 1.0 : 0.0;
        const double z1 = both - p2 - c;
        const double z2 = p2 - kappa[i] * bm;
        auto& s = a[i];
        s[0] += both;
        s[1] += p2;
        s[2] += c;
        s[3] += z1;
        s[4] += z1 * z1;
        s[5] += z2;
        s[6] += z2 * z2;
      }
    }
    return a;
  });
  Acc tot(pairs.size(), std::array<double, 7>{});
  for (const auto& c : chunks)
    for (std::size_t i = 0; i < pairs.size(); ++i)
      for (std::size_t k = 0; k < 7; ++k) tot[i][k] += c[i][k];

  const double R = static_cast<double>(replications);
  std::vector<AssemblyRow> out;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const auto& s = tot[i];
    AssemblyRow row;
    row.m = pairs[i].first;
    row.n = pairs[i].second;
    row.P1 = joint_record_law(spec.alpha, h, row.m, row.n).P1;
    row.joint = s[0] / R;
    row.P2 = s[1] / R;
    row.c = s[2] / R;
    const double m1 = s[3] / R, m2 = s[5] / R;
    row.residual = m1 - row.P1;
    row.residual_se = std::sqrt(std::max(0.0, s[4] / R - m1 * m1) / (R - 1.0));
    row.p2_residual = m2;
    row.p2_se = std::sqrt(std::max(0.0, s[6] / R - m2 * m2) / (R - 1.0));
    out.push_back(row);
  }
  return out;
}

void write_joint_csv(std::ostream& os, const std::vector<JointRecordLaw>& rows) {
  CsvWriter w(os);
  for (const char* c : {"m", "n", "P1", "joint_lo", "joint_hi", "ratio_lo", "ratio_hi"}) w.cell(c);
  w.end_row();
  for (const auto& r : rows) {
    w.cell(r.m).cell(r.n).cell(r.P1).cell(r.joint.lo).cell(r.joint.hi).cell(r.ratio.lo).cell(r.ratio.hi);
    w.end_row();
  }
}

}  // namespace records
