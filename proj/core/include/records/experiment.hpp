#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "records/distribution.hpp"
#include "records/growth_form.hpp"
#include "records/sequences.hpp"
#include "records/threshold_scheme.hpp"

namespace records {

inline constexpr int kSchemaVersion = 1;

struct CriterionConfig {
  /// "k_sum" (step boundary through K), "klass" (i.i.d. sum), or "j_log"
  /// (extremal process against b_t = a ln t + b).
  std::string method = "k_sum";
  std::optional<GrowthForm> declared_form;
  double boundary_a = 1.0;
  double boundary_b = 0.0;
  std::optional<std::string> expect;
};

struct VerifyConfig {
  std::vector<std::string> checks;
  std::size_t chi2_m_min = 2;
  std::size_t chi2_n_max = 30;
  std::vector<std::size_t> clt_n{100, 1000, 10000};
  std::vector<std::pair<std::size_t, std::size_t>> joint_pairs{{2, 5}, {3, 10}, {5, 20}, {10, 40}};
};

/// A fully validated experiment. Every run is a function of this and the seed.
struct ExperimentConfig {
  std::uint64_t seed = 1;
  std::size_t replications = 10000;
  std::size_t horizon = 1000;
  unsigned threads = 1;
  std::filesystem::path out_dir = "out";

  Distribution F = Distribution::exponential();
  AlphaSequence alpha = AlphaSequence::constant();
  ThresholdSequence levels = ThresholdSequence::neg_infinity();
  /// Present when the config describes a threshold scheme.
  std::optional<ThresholdSchemeSpec> scheme;

  std::vector<std::size_t> checkpoints{10, 50, 200};
  CriterionConfig criterion;
  VerifyConfig verify;
  std::vector<std::size_t> exact_n;

  /// Canonical echo of the parsed config.
  nlohmann::json canonical;
};

/// Validates a schema-1 document. Throws ConfigError naming the offending
/// field. Relative paths resolve against base_dir.
ExperimentConfig parse_config(const nlohmann::json& doc, const std::filesystem::path& base_dir = {});
ExperimentConfig load_config(const std::filesystem::path& path);

struct Overrides {
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> replications;
  std::optional<std::size_t> horizon;
  std::optional<std::filesystem::path> out_dir;
  std::optional<unsigned> threads;
};

void apply_overrides(ExperimentConfig& cfg, const Overrides& o);

Distribution parse_distribution(const nlohmann::json& j, const std::string& path,
                                const std::filesystem::path& base_dir = {});
AlphaSequence parse_alpha(const nlohmann::json& j, const std::string& path);
GrowthForm parse_growth_form(const nlohmann::json& j, const std::string& path);

}  // namespace records
