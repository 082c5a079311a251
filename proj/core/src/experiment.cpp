#include "records/experiment.hpp"

#include <algorithm>
#include <fstream>
#include <set>

#include "records/error.hpp"

namespace records {

namespace {

using nlohmann::json;

[[noreturn]] void bad(const std::string& path, const std::string& what) {
  fail(ErrorCode::ConfigError, path + ": " + what);
}

void only_keys(const json& j, const std::string& path, std::initializer_list<const char*> allowed) {
  if (!j.is_object()) bad(path, "must be an object");
  const std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& [k, v] : j.items())
    if (!ok.count(k)) bad(path.empty() ? k : path + "." + k, "unknown field");
}

std::string join(const std::string& path, const std::string& key) {
  return path.empty() ? key : path + "." + key;
}

double number(const json& j, const std::string& path, const std::string& key,
              std::optional<double> fallback = std::nullopt) {
  if (!j.contains(key)) {
    if (fallback) return *fallback;
    bad(join(path, key), "required number is missing");
  }
  const auto& v = j.at(key);
  if (!v.is_number()) bad(join(path, key), "must be a number");
  return v.get<double>();
}

std::uint64_t count(const json& j, const std::string& path, const std::string& key,
                    std::optional<std::uint64_t> fallback = std::nullopt) {
  if (!j.contains(key)) {
    if (fallback) return *fallback;
    bad(join(path, key), "required integer is missing");
  }
  const auto& v = j.at(key);
  if (!v.is_number_unsigned()) bad(join(path, key), "must be a non-negative integer");
  return v.get<std::uint64_t>();
}

std::string text(const json& j, const std::string& path, const std::string& key,
                 std::optional<std::string> fallback = std::nullopt) {
  if (!j.contains(key)) {
    if (fallback) return *fallback;
    bad(join(path, key), "required string is missing");
  }
  if (!j.at(key).is_string()) bad(join(path, key), "must be a string");
  return j.at(key).get<std::string>();
}

std::vector<double> numbers(const json& j, const std::string& path) {
  if (!j.is_array()) bad(path, "must be an array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) bad(path + "[" + std::to_string(i) + "]", "must be a number");
    out.push_back(j[i].get<double>());
  }
  return out;
}

std::vector<std::size_t> indices(const json& j, const std::string& path) {
  if (!j.is_array()) bad(path, "must be an array of integers");
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number_unsigned() || j[i].get<std::uint64_t>() == 0)
      bad(path + "[" + std::to_string(i) + "]", "must be a positive integer");
    out.push_back(j[i].get<std::size_t>());
  }
  return out;
}

// Library constructors validate their own arguments; re-label their
// failures with the config path.
template <class Fn>
auto build(const std::string& path, Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const Error& e) {
    if (e.code() == ErrorCode::ConfigError) throw;
    bad(path, e.what());
  }
}

ThresholdSequence parse_threshold(const json& j, const std::string& path, const Distribution& F) {
  const auto fam = text(j, path, "family");
  if (fam == "neg_infinity") {
    only_keys(j, path, {"family"});
    return ThresholdSequence::neg_infinity();
  }
  if (fam == "flat") {
    only_keys(j, path, {"family", "level", "h"});
    if (j.contains("h")) {
      if (j.contains("level")) bad(path, "give either level or h, not both");
      const double h = number(j, path, "h");
      if (!(h > 0.0 && h < 1.0)) bad(join(path, "h"), "must lie in (0, 1)");
      return build(path, [&] { return ThresholdSequence::flat(F.quantile(h)); });
    }
    return build(path, [&] { return ThresholdSequence::flat(number(j, path, "level")); });
  }
  if (fam == "log_scaled") {
    only_keys(j, path, {"family", "a", "b"});
    return build(path, [&] { return ThresholdSequence::log_scaled(number(j, path, "a"), number(j, path, "b", 0.0)); });
  }
  if (fam == "tail_quantile") {
    only_keys(j, path, {"family", "q", "start"});
    if (!j.contains("q")) bad(join(path, "q"), "required growth form is missing");
    const auto q = parse_growth_form(j.at("q"), join(path, "q"));
    return build(path, [&] { return ThresholdSequence::tail_quantile(F, q, count(j, path, "start", 1)); });
  }
  if (fam == "table") {
    only_keys(j, path, {"family", "levels", "declared_tail"});
    if (!j.contains("levels")) bad(join(path, "levels"), "required array is missing");
    std::optional<GrowthForm> tail;
    if (j.contains("declared_tail")) tail = parse_growth_form(j.at("declared_tail"), join(path, "declared_tail"));
    return build(path, [&] { return ThresholdSequence::table(numbers(j.at("levels"), join(path, "levels")), tail); });
  }
  bad(join(path, "family"), "unknown threshold family '" + fam + "'");
}

void parse_below(const json& j, const std::string& path, ThresholdSchemeSpec& s,
                 const std::filesystem::path& base) {
  const auto kind = text(j, path, "kind");
  if (kind == "vee") {
    only_keys(j, path, {"kind", "law", "offset", "spread", "rho"});
    s.below = BelowKind::Vee;
    const auto law = text(j, path, "law", "constant");
    if (law == "constant") s.vee.law = VeeLaw::Constant;
    else if (law == "iid") s.vee.law = VeeLaw::Iid;
    else if (law == "markov") s.vee.law = VeeLaw::Markov;
    else bad(join(path, "law"), "must be constant, iid or markov");
    s.vee.offset = number(j, path, "offset", 0.0);
    s.vee.spread = number(j, path, "spread", 1.0);
    s.vee.rho = number(j, path, "rho", 0.9);
    if (s.vee.offset < 0.0) bad(join(path, "offset"), "must be >= 0 (V_n may not exceed l_n)");
    if (s.vee.spread < 0.0) bad(join(path, "spread"), "must be >= 0");
    if (!(s.vee.rho >= 0.0 && s.vee.rho < 1.0)) bad(join(path, "rho"), "must lie in [0, 1)");
  } else if (kind == "tail_exact") {
    only_keys(j, path, {"kind", "law"});
    s.below = BelowKind::TailExact;
    if (!j.contains("law")) bad(join(path, "law"), "required distribution is missing");
    s.below_law = parse_distribution(j.at("law"), join(path, "law"), base);
  } else if (kind == "perturbed") {
    only_keys(j, path, {"kind", "delta", "eps0", "decay", "declared_tail"});
    s.below = BelowKind::Perturbed;
    if (!j.contains("delta")) bad(join(path, "delta"), "required distribution is missing");
    s.perturbed.delta = parse_distribution(j.at("delta"), join(path, "delta"), base);
    s.perturbed.eps0 = number(j, path, "eps0", 0.1);
    s.perturbed.decay = number(j, path, "decay", 2.0);
    if (!(s.perturbed.eps0 >= 0.0 && s.perturbed.eps0 <= 1.0)) bad(join(path, "eps0"), "must lie in [0, 1]");
    if (!(s.perturbed.decay > 0.0)) bad(join(path, "decay"), "must be positive");
    if (j.contains("declared_tail")) s.perturbed.declared_tail = number(j, path, "declared_tail");
  } else {
    bad(join(path, "kind"), "must be vee, tail_exact or perturbed");
  }
}

std::vector<std::string> known_checks() {
  return {"record_law", "chi2", "pmf", "embedding", "coupling", "c2", "criterion", "clt", "joint_law"};
}

}  // namespace

GrowthForm parse_growth_form(const json& j, const std::string& path) {
  only_keys(j, path, {"coef", "exp_rate", "exp_power", "pow_t", "pow_log", "pow_loglog", "exact"});
  GrowthForm g;
  g.coef = number(j, path, "coef", 1.0);
  g.exp_rate = number(j, path, "exp_rate", 0.0);
  g.exp_power = number(j, path, "exp_power", 1.0);
  g.pow_t = number(j, path, "pow_t", 0.0);
  g.pow_log = number(j, path, "pow_log", 0.0);
  g.pow_loglog = number(j, path, "pow_loglog", 0.0);
  if (j.contains("exact")) {
    if (!j.at("exact").is_boolean()) bad(join(path, "exact"), "must be a boolean");
    g.exact = j.at("exact").get<bool>();
  }
  if (!(g.coef >= 0.0)) bad(join(path, "coef"), "must be >= 0");
  return g;
}

Distribution parse_distribution(const json& j, const std::string& path, const std::filesystem::path& base) {
  const auto fam = text(j, path, "family");
  if (fam == "uniform") {
    only_keys(j, path, {"family"});
    return Distribution::uniform();
  }
  if (fam == "exponential") {
    only_keys(j, path, {"family", "rate"});
    return build(join(path, "rate"), [&] { return Distribution::exponential(number(j, path, "rate", 1.0)); });
  }
  if (fam == "pareto") {
    only_keys(j, path, {"family", "shape"});
    return build(join(path, "shape"), [&] { return Distribution::pareto(number(j, path, "shape")); });
  }
  if (fam == "gumbel") {
    only_keys(j, path, {"family"});
    return Distribution::gumbel();
  }
  if (fam == "table") {
    only_keys(j, path, {"family", "x", "cdf", "csv"});
    if (j.contains("csv")) {
      std::filesystem::path p = text(j, path, "csv");
      if (p.is_relative()) p = base / p;
      return build(join(path, "csv"), [&] { return Distribution::table_from_csv(p); });
    }
    if (!j.contains("x") || !j.contains("cdf")) bad(path, "table needs x and cdf arrays (or csv)");
    return build(path, [&] {
      return Distribution::table(numbers(j.at("x"), join(path, "x")), numbers(j.at("cdf"), join(path, "cdf")));
    });
  }
  bad(join(path, "family"), "unknown distribution family '" + fam + "'");
}

AlphaSequence parse_alpha(const json& j, const std::string& path) {
  const auto fam = text(j, path, "family");
  if (fam == "constant") {
    only_keys(j, path, {"family", "c"});
    return build(join(path, "c"), [&] { return AlphaSequence::constant(number(j, path, "c", 1.0)); });
  }
  if (fam == "geometric") {
    only_keys(j, path, {"family", "r"});
    return build(join(path, "r"), [&] { return AlphaSequence::geometric(number(j, path, "r")); });
  }
  if (fam == "polynomial") {
    only_keys(j, path, {"family", "theta"});
    return build(join(path, "theta"), [&] { return AlphaSequence::polynomial(number(j, path, "theta")); });
  }
  if (fam == "exp_power") {
    only_keys(j, path, {"family", "c", "kappa"});
    return build(path, [&] { return AlphaSequence::exp_power(number(j, path, "c"), number(j, path, "kappa")); });
  }
  if (fam == "table") {
    only_keys(j, path, {"family", "terms", "declared"});
    if (!j.contains("terms")) bad(join(path, "terms"), "required array is missing");
    DeclaredLimits d;
    if (j.contains("declared")) {
      const auto& dj = j.at("declared");
      const auto dp = join(path, "declared");
      only_keys(dj, dp, {"c1", "lim_p", "p_has_limit", "variance_finite", "term_form", "sum_form"});
      const auto flag = [&](const char* k) -> std::optional<bool> {
        if (!dj.contains(k)) return std::nullopt;
        if (!dj.at(k).is_boolean()) bad(join(dp, k), "must be a boolean");
        return dj.at(k).get<bool>();
      };
      d.c1 = flag("c1");
      d.variance_finite = flag("variance_finite");
      if (auto p = flag("p_has_limit")) d.p_has_limit = *p;
      if (dj.contains("lim_p")) d.lim_p = number(dj, dp, "lim_p");
      if (dj.contains("term_form")) d.term_form = parse_growth_form(dj.at("term_form"), join(dp, "term_form"));
      if (dj.contains("sum_form")) d.sum_form = parse_growth_form(dj.at("sum_form"), join(dp, "sum_form"));
    }
    return build(join(path, "terms"), [&] { return AlphaSequence::table(numbers(j.at("terms"), join(path, "terms")), d); });
  }
  bad(join(path, "family"), "unknown alpha family '" + fam + "'");
}

ExperimentConfig parse_config(const json& doc, const std::filesystem::path& base_dir) {
  only_keys(doc, "", {"schema_version", "seed", "replications", "horizon", "threads", "output", "scheme",
                      "criterion", "couple", "exact", "verify", "description"});
  if (!doc.contains("schema_version")) bad("schema_version", "required field is missing");
  if (!doc.at("schema_version").is_number_integer() || doc.at("schema_version").get<int>() != kSchemaVersion)
    bad("schema_version", "must be " + std::to_string(kSchemaVersion));

  ExperimentConfig c;
  c.seed = count(doc, "", "seed", 1);
  c.replications = count(doc, "", "replications", 10000);
  c.horizon = count(doc, "", "horizon", 1000);
  c.threads = static_cast<unsigned>(count(doc, "", "threads", 1));
  if (c.replications < 1) bad("replications", "must be >= 1");
  if (c.horizon < 1) bad("horizon", "must be >= 1");
  if (c.threads < 1) bad("threads", "must be >= 1");
  if (doc.contains("output")) {
    only_keys(doc.at("output"), "output", {"dir"});
    c.out_dir = text(doc.at("output"), "output", "dir", "out");
  }

  if (!doc.contains("scheme")) bad("scheme", "required object is missing");
  const auto& sj = doc.at("scheme");
  only_keys(sj, "scheme", {"F", "alpha", "threshold", "below_model"});
  if (!sj.contains("F")) bad("scheme.F", "required distribution is missing");
  if (!sj.contains("alpha")) bad("scheme.alpha", "required sequence is missing");
  c.F = parse_distribution(sj.at("F"), "scheme.F", base_dir);
  c.alpha = parse_alpha(sj.at("alpha"), "scheme.alpha");
  if (sj.contains("threshold")) c.levels = parse_threshold(sj.at("threshold"), "scheme.threshold", c.F);
  if (sj.contains("below_model")) {
    if (c.levels.is_neg_infinity() && !sj.contains("threshold"))
      bad("scheme.threshold", "a below_model needs a threshold");
    ThresholdSchemeSpec s{c.F, c.alpha, c.levels};
    parse_below(sj.at("below_model"), "scheme.below_model", s, base_dir);
    c.scheme = std::move(s);
  }

  if (doc.contains("criterion")) {
    const auto& cj = doc.at("criterion");
    only_keys(cj, "criterion", {"method", "declared_form", "a", "b", "expect"});
    c.criterion.method = text(cj, "criterion", "method", "k_sum");
    if (c.criterion.method != "k_sum" && c.criterion.method != "klass" && c.criterion.method != "j_log")
      bad("criterion.method", "must be k_sum, klass or j_log");
    if (cj.contains("declared_form"))
      c.criterion.declared_form = parse_growth_form(cj.at("declared_form"), "criterion.declared_form");
    c.criterion.boundary_a = number(cj, "criterion", "a", 1.0);
    c.criterion.boundary_b = number(cj, "criterion", "b", 0.0);
    if (cj.contains("expect")) {
      const auto e = text(cj, "criterion", "expect");
      if (e != "one" && e != "zero" && e != "undecided") bad("criterion.expect", "must be one, zero or undecided");
      c.criterion.expect = e;
    }
  }
  if (doc.contains("couple")) {
    only_keys(doc.at("couple"), "couple", {"checkpoints"});
    if (doc.at("couple").contains("checkpoints"))
      c.checkpoints = indices(doc.at("couple").at("checkpoints"), "couple.checkpoints");
  }
  if (doc.contains("exact")) {
    only_keys(doc.at("exact"), "exact", {"n"});
    if (doc.at("exact").contains("n")) c.exact_n = indices(doc.at("exact").at("n"), "exact.n");
  }
  if (doc.contains("verify")) {
    const auto& vj = doc.at("verify");
    only_keys(vj, "verify", {"checks", "chi2_m_min", "chi2_n_max", "clt_n", "joint_pairs"});
    if (vj.contains("checks")) {
      if (!vj.at("checks").is_array()) bad("verify.checks", "must be an array of check names");
      const auto known = known_checks();
      for (std::size_t i = 0; i < vj.at("checks").size(); ++i) {
        const auto& v = vj.at("checks")[i];
        const auto p = "verify.checks[" + std::to_string(i) + "]";
        if (!v.is_string()) bad(p, "must be a string");
        if (std::find(known.begin(), known.end(), v.get<std::string>()) == known.end())
          bad(p, "unknown check '" + v.get<std::string>() + "'");
        c.verify.checks.push_back(v.get<std::string>());
      }
    }
    c.verify.chi2_m_min = count(vj, "verify", "chi2_m_min", 2);
    c.verify.chi2_n_max = count(vj, "verify", "chi2_n_max", 30);
    if (c.verify.chi2_m_min < 2) bad("verify.chi2_m_min", "must be >= 2 (I_1 is constant)");
    if (c.verify.chi2_n_max <= c.verify.chi2_m_min) bad("verify.chi2_n_max", "must exceed chi2_m_min");
    if (vj.contains("clt_n")) c.verify.clt_n = indices(vj.at("clt_n"), "verify.clt_n");
    if (vj.contains("joint_pairs")) {
      const auto& pj = vj.at("joint_pairs");
      if (!pj.is_array()) bad("verify.joint_pairs", "must be an array of [m, n] pairs");
      c.verify.joint_pairs.clear();
      for (std::size_t i = 0; i < pj.size(); ++i) {
        const auto p = "verify.joint_pairs[" + std::to_string(i) + "]";
        const auto mn = indices(pj[i], p);
        if (mn.size() != 2 || mn[0] >= mn[1]) bad(p, "must be [m, n] with m < n");
        c.verify.joint_pairs.emplace_back(mn[0], mn[1]);
      }
    }
  }
  c.canonical = doc;
  c.canonical.erase("threads");
  c.canonical.erase("output");
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::ConfigError, path.string() + ": cannot open config file");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    fail(ErrorCode::ConfigError, path.string() + ": invalid JSON (" + e.what() + ")");
  }
  return parse_config(doc, path.parent_path());
}

void apply_overrides(ExperimentConfig& cfg, const Overrides& o) {
  if (o.seed) cfg.seed = *o.seed;
  if (o.replications) {
    if (*o.replications < 1) fail(ErrorCode::ConfigError, "--reps: must be >= 1");
    cfg.replications = *o.replications;
  }
  if (o.horizon) {
    if (*o.horizon < 1) fail(ErrorCode::ConfigError, "--horizon: must be >= 1");
    cfg.horizon = *o.horizon;
  }
  if (o.out_dir) cfg.out_dir = *o.out_dir;
  if (o.threads) cfg.threads = std::max(1u, *o.threads);
  cfg.canonical["seed"] = cfg.seed;
  cfg.canonical["replications"] = cfg.replications;
  cfg.canonical["horizon"] = cfg.horizon;
}

}  // namespace records
