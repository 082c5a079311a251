#pragma once

#include <ostream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "records/error.hpp"
#include "records/experiment.hpp"

namespace records {

enum class CheckStatus { Pass, Fail, Skip };
std::string to_string(CheckStatus s);

struct CheckResult {
  std::string name;
  CheckStatus status = CheckStatus::Skip;
  std::string summary;
  nlohmann::json detail;
};

/// Runs one named check against the config (see VerifyConfig for names).
CheckResult run_check(const std::string& name, const ExperimentConfig& cfg);
/// Checks that apply to the config when none are listed explicitly.
std::vector<std::string> default_checks(const ExperimentConfig& cfg);

/// Each command writes its files under cfg.out_dir and a short log to `log`.
/// The return value is the process exit code (0, or 1 when verify fails).
/// Certification and config problems are thrown as records::Error.
int cmd_simulate(const ExperimentConfig& cfg, std::ostream& log);
int cmd_exact(const ExperimentConfig& cfg, std::ostream& log);
int cmd_criterion(const ExperimentConfig& cfg, std::ostream& log);
int cmd_couple(const ExperimentConfig& cfg, std::ostream& log);
int cmd_verify(const ExperimentConfig& cfg, std::ostream& log);
int cmd_report(const ExperimentConfig& cfg, std::ostream& log);

int run_command(const std::string& name, const ExperimentConfig& cfg, std::ostream& log);

/// Exit code for an exception escaping a command: 2 config, 3 certification,
/// 4 anything else.
int exit_code_for(const Error& e);

}  // namespace records
