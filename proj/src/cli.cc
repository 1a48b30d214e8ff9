// Copyright 2026 The contdp Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "contdp/cli.h"

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "contdp/adversary.h"
#include "contdp/audit.h"
#include "contdp/errors.h"
#include "contdp/mechanisms.h"
#include "contdp/problem.h"
#include "contdp/reconstruction.h"
#include "contdp/wire.h"

namespace contdp {
namespace {

using nlohmann::json;

#ifndef CONTDP_VERSION
#define CONTDP_VERSION "0.0.0"
#endif

constexpr const char kToolName[] = "contdp";
constexpr const char kToolVersion[] = CONTDP_VERSION;

// %.17g round-trips every double; used for CSV and the params table so that
// identical runs emit identical bytes.
std::string Fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

// Writes to `path`, or to stdout when the path is empty.
void WriteOutput(const std::string& path, const std::string& content) {
  if (path.empty()) {
    std::cout << content;
    std::cout.flush();
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw IoError("cannot open '" + path + "' for writing");
  }
  out << content;
  if (!out) {
    throw IoError("failed while writing '" + path + "'");
  }
}

json ToolObject() {
  return json{{"name", kToolName}, {"version", kToolVersion}};
}

std::string DumpReport(const json& report) {
  return report.dump(2) + "\n";
}

// Options shared by every experiment subcommand.
struct CommonOptions {
  double alpha = 0.0;
  std::int64_t dim = 0;
  std::int64_t horizon = 0;  // 0 = auto (per-subcommand default)
  std::int64_t trials = 0;
  std::uint64_t seed = 0;
  int jobs = 0;  // 0 = one worker per hardware thread
  std::string mechanism;
  std::string mechanism_cmd;
  std::string out_path;
  std::string csv_path;
};

MechanismFactory ResolveMechanism(const CommonOptions& options) {
  if (!options.mechanism_cmd.empty()) {
    return SubprocessMechanismFactory(options.mechanism_cmd);
  }
  return BuiltinMechanismFactory(options.mechanism);
}

json ConfigObject(const char* subcommand, const CommonOptions& options,
                  const ProblemParams& params, bool horizon_auto) {
  return json{
      {"subcommand", subcommand},
      {"mechanism",
       options.mechanism_cmd.empty() ? options.mechanism : "subprocess"},
      {"mechanism_cmd", options.mechanism_cmd},
      {"alpha", params.alpha},
      {"d", params.dim},
      {"T", params.horizon},
      {"T_auto", horizon_auto},
      {"trials", options.trials},
      {"seed", options.seed},
  };
}

// ---------------------------------------------------------------------------
// oblivious-accuracy

void RunObliviousAccuracyCommand(const CommonOptions& options) {
  const bool horizon_auto = options.horizon == 0;
  std::int64_t horizon = options.horizon;
  if (horizon_auto) {
    // Default: at most 200 steps, capped by the regime in which the
    // mechanism is provably accurate; at least one step so a transcript
    // exists even where the guarantee is vacuous.
    horizon = std::max<std::int64_t>(
        1, std::min<std::int64_t>(200, MaxTOblivious(options.alpha,
                                                     options.dim)));
  }
  const ProblemParams params(options.alpha, options.dim, horizon);
  const ObliviousAccuracyResult result =
      RunObliviousAccuracy(ResolveMechanism(options), params, options.trials,
                           options.seed, options.jobs);

  json report{
      {"config", ConfigObject("oblivious-accuracy", options, params,
                              horizon_auto)},
      {"derived",
       {
           {"slack", params.slack},
           {"alpha_regime_flag", params.alpha_regime_flag},
           {"rr_privacy_exact", RrPrivacyExact(params.alpha)},
           {"three_alpha", 3.0 * params.alpha},
           {"hoeffding_failure_bound", result.hoeffding_bound},
           {"max_T_oblivious", MaxTOblivious(params.alpha, params.dim)},
       }},
      {"report",
       {
           {"trials", result.trials},
           {"accurate_trials", result.accurate_trials},
           {"accuracy_rate", result.accuracy_rate},
           {"worst_violation", result.worst_violation},
       }},
      {"tool", ToolObject()},
  };
  WriteOutput(options.out_path, DumpReport(report));

  if (!options.csv_path.empty()) {
    std::ostringstream csv;
    csv << "trial,t,passed,b_violation,worst_prefix_violation,"
           "worst_prefix_index\n";
    for (const auto& record : result.records) {
      for (std::size_t t = 0; t < record.steps.size(); ++t) {
        const LossVerdict& step = record.steps[t];
        csv << (record.trial + 1) << ',' << (t + 1) << ','
            << (step.passed ? 1 : 0) << ',' << Fmt(step.b_violation) << ','
            << Fmt(step.worst_prefix_violation) << ','
            << step.worst_prefix_index.value_or(0) << '\n';
      }
    }
    WriteOutput(options.csv_path, csv.str());
  }
}

// ---------------------------------------------------------------------------
// adaptive-attack / audit

struct AuditOptions {
  CommonOptions common;
  double confidence = 0.95;
  double epsilon = 0.2;
  double delta = 0.05;
};

void RunAuditCommand(const char* subcommand, const AuditOptions& options) {
  const bool horizon_auto = options.common.horizon == 0;
  const std::int64_t horizon = horizon_auto
                                   ? DefaultAttackHorizon(options.common.alpha)
                                   : options.common.horizon;
  const ProblemParams params(options.common.alpha, options.common.dim,
                             horizon);
  const PrivacyParams budget(options.epsilon, options.delta);
  const ChallengeAuditConfig config{params,
                                    options.common.trials,
                                    options.confidence,
                                    budget,
                                    options.common.seed,
                                    options.common.jobs};
  const ChallengeAuditResult result =
      EstimateChallengeAdvantage(ResolveMechanism(options.common), config);
  const AuditReport& audit = result.report;

  const ReconstructionParams lemma = AttackLemmaParams(params);
  json config_json =
      ConfigObject(subcommand, options.common, params, horizon_auto);
  config_json["confidence"] = options.confidence;
  config_json["epsilon"] = options.epsilon;
  config_json["delta"] = options.delta;

  json correlations = json::array();
  for (const auto& record : result.records) {
    correlations.push_back(record.reconstruction_correlation);
  }

  json report{
      {"config", std::move(config_json)},
      {"derived",
       {
           {"slack", params.slack},
           {"alpha_regime_flag", params.alpha_regime_flag},
           {"rr_privacy_exact", RrPrivacyExact(params.alpha)},
           {"three_alpha", 3.0 * params.alpha},
           {"dp_tv_budget", DpTvBound(budget)},
           {"dp_tv_linear", DpTvBoundLinear(budget)},
           {"attack_default_T", DefaultAttackHorizon(params.alpha)},
           {"lemma_p", lemma.p},
           {"lemma_q", lemma.q},
           {"lemma_k", lemma.k},
           {"lemma_bound", LemmaBound(lemma)},
           {"reconstruction_floor", kReconstructionCorrelationFloor},
       }},
      {"report",
       {
           {"trials", audit.trials},
           {"successes", audit.successes},
           {"p_hat", audit.p_hat},
           {"confidence", audit.confidence},
           {"ci_low", audit.ci_low},
           {"ci_high", audit.ci_high},
           {"tv_lower", audit.tv_lower},
           {"budget_tv", audit.budget_tv},
           {"verdict", VerdictName(audit.verdict)},
           {"accuracy_rate", audit.accuracy_rate},
           {"precondition_rate", audit.precondition_rate},
           {"precondition_trials", audit.precondition_trials},
           {"mean_reconstruction_correlation",
            audit.mean_reconstruction_correlation},
           {"reconstruction_floor_count", audit.reconstruction_floor_count},
           {"reconstruction_correlations", std::move(correlations)},
       }},
      {"tool", ToolObject()},
  };
  WriteOutput(options.common.out_path, DumpReport(report));

  if (!options.common.csv_path.empty()) {
    std::ostringstream csv;
    csv << "trial,side,guess,success,accurate,preconditions_ok,"
           "reconstruction_correlation\n";
    for (const auto& record : result.records) {
      csv << (record.trial + 1) << ',' << SideName(record.side) << ','
          << SideName(record.guess) << ',' << (record.success ? 1 : 0) << ','
          << (record.accurate ? 1 : 0) << ','
          << (record.preconditions_ok ? 1 : 0) << ','
          << Fmt(record.reconstruction_correlation) << '\n';
    }
    WriteOutput(options.common.csv_path, csv.str());
  }
}

// ---------------------------------------------------------------------------
// lemma-check

struct LemmaCheckOptions {
  std::int64_t instances = 1000;
  std::int64_t max_dim = 2000;
  std::int64_t max_k = 50;
  std::uint64_t seed = 0;
  std::string out_path;
};

void RunLemmaCheckCommand(const LemmaCheckOptions& options) {
  const LemmaCheckSummary summary = RunLemmaCheck(
      options.instances, options.max_dim, options.max_k, options.seed);
  json report{
      {"config",
       {
           {"subcommand", "lemma-check"},
           {"instances", options.instances},
           {"max_d", options.max_dim},
           {"max_k", options.max_k},
           {"seed", options.seed},
       }},
      {"derived",
       {
           {"margin_buckets", kLemmaMarginBuckets},
           {"margin_bucket_width", kLemmaMarginBucketWidth},
       }},
      {"report",
       {
           {"requested", summary.requested},
           {"generated", summary.generated},
           {"discarded", summary.discarded},
           {"applicable", summary.applicable},
           {"violations", summary.violations},
           {"margin_histogram", summary.margin_histogram},
       }},
      {"tool", ToolObject()},
  };
  WriteOutput(options.out_path, DumpReport(report));
}

// ---------------------------------------------------------------------------
// params

struct ParamsOptions {
  double alpha = 0.0;
  std::int64_t dim = 0;
  std::string out_path;
};

void RunParamsCommand(const ParamsOptions& options) {
  // Validate through the same gate as everything else (horizon unused here).
  const ProblemParams params(options.alpha, options.dim, 1);
  const std::int64_t attack_horizon = DefaultAttackHorizon(options.alpha);
  const ReconstructionParams lemma = AttackLemmaParams(
      ProblemParams(options.alpha, options.dim, attack_horizon));
  const double exact = RrPrivacyExact(options.alpha);
  const std::int64_t max_t = MaxTOblivious(options.alpha, options.dim);

  std::ostringstream table;
  table << "alpha               " << Fmt(options.alpha) << '\n'
        << "d                   " << options.dim << '\n'
        << "slack               " << Fmt(params.slack) << '\n'
        << "rr_privacy_exact    " << Fmt(exact) << '\n'
        << "three_alpha         " << Fmt(3.0 * options.alpha) << '\n'
        << "max_T_oblivious     " << max_t << '\n'
        << "attack_default_T    " << attack_horizon << '\n'
        << "lemma_p             " << Fmt(lemma.p) << '\n'
        << "lemma_q             " << Fmt(lemma.q) << '\n'
        << "lemma_bound         " << Fmt(LemmaBound(lemma)) << '\n';
  std::cout << table.str();
  std::cout.flush();

  if (!options.out_path.empty()) {
    json report{
        {"config",
         {
             {"subcommand", "params"},
             {"alpha", options.alpha},
             {"d", options.dim},
         }},
        {"derived",
         {
             {"slack", params.slack},
             {"alpha_regime_flag", params.alpha_regime_flag},
             {"rr_privacy_exact", exact},
             {"three_alpha", 3.0 * options.alpha},
             {"max_T_oblivious", max_t},
             {"attack_default_T", attack_horizon},
             {"lemma_p", lemma.p},
             {"lemma_q", lemma.q},
             {"lemma_k", lemma.k},
             {"lemma_bound", LemmaBound(lemma)},
         }},
        {"tool", ToolObject()},
    };
    WriteOutput(options.out_path, DumpReport(report));
  }
}

// ---------------------------------------------------------------------------
// wiring

void AddCommonOptions(CLI::App* sub, CommonOptions& options,
                      const char* default_mechanism,
                      std::int64_t default_trials) {
  options.mechanism = default_mechanism;
  options.trials = default_trials;
  // Options may come from a [subcommand] section of a --config file, and the
  // --config flag itself may appear after the subcommand name.
  sub->configurable();
  sub->fallthrough();
  sub->add_option("--alpha", options.alpha,
                  "Accuracy parameter alpha, strictly in (0, 1)")
      ->required();
  sub->add_option("--d", options.dim, "Dimension d of the secret")
      ->required();
  sub->add_option("--T", options.horizon,
                  "Horizon T (number of arrival steps); 0 picks the "
                  "subcommand's documented default")
      ->check(CLI::NonNegativeNumber);
  sub->add_option("--trials", options.trials, "Number of independent trials")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  sub->add_option("--seed", options.seed,
                  "Master seed; every trial derives its own streams from it")
      ->capture_default_str()
      ->envname("CONTDP_SEED");
  sub->add_option("--jobs", options.jobs,
                  "Worker threads (0 = one per hardware thread); results do "
                  "not depend on this")
      ->capture_default_str();
  sub->add_option("--mechanism", options.mechanism,
                  "Built-in mechanism name: oblivious-rr, fresh-rr, "
                  "fixed-output")
      ->capture_default_str();
  sub->add_option("--mechanism-cmd", options.mechanism_cmd,
                  "External mechanism command speaking the wire protocol on "
                  "stdin/stdout (overrides --mechanism); it receives the "
                  "trial's mechanism seed in CONTDP_MECH_SEED");
  sub->add_option("--out", options.out_path,
                  "Write the JSON report here (default: stdout)");
  sub->add_option("--csv", options.csv_path, "Write per-trial detail CSV here");
}

}  // namespace

int RunCli(int argc, const char* const* argv) {
  CLI::App app{
      "Simulation laboratory for oblivious versus adaptive differential "
      "privacy under continual observation"};
  app.set_version_flag("--version",
                       std::string(kToolName) + " " + kToolVersion);
  app.set_config("--config", "",
                 "Read options from a TOML/INI file (sections per "
                 "subcommand)");
  app.require_subcommand(1);

  CommonOptions oblivious;
  CLI::App* oblivious_cmd = app.add_subcommand(
      "oblivious-accuracy",
      "Accuracy of a mechanism on fixed uniform streams (no adaptivity)");
  AddCommonOptions(oblivious_cmd, oblivious, "oblivious-rr", 20);

  AuditOptions attack;
  CLI::App* attack_cmd = app.add_subcommand(
      "adaptive-attack",
      "Echo-back reconstruction attack in the challenge game, audited "
      "against a privacy budget");
  AddCommonOptions(attack_cmd, attack.common, "fresh-rr", 50);
  attack_cmd
      ->add_option("--confidence", attack.confidence,
                   "Confidence level of the exact binomial interval")
      ->capture_default_str();
  attack_cmd
      ->add_option("--epsilon", attack.epsilon,
                   "Privacy budget epsilon to audit against")
      ->capture_default_str();
  attack_cmd
      ->add_option("--delta", attack.delta,
                   "Privacy budget delta to audit against")
      ->capture_default_str();

  AuditOptions audit;
  CLI::App* audit_cmd = app.add_subcommand(
      "audit",
      "Audit a named mechanism's adaptive privacy against an (epsilon, "
      "delta) budget");
  AddCommonOptions(audit_cmd, audit.common, "", 100);
  audit_cmd->get_option("--mechanism")->required();
  audit_cmd
      ->add_option("--confidence", audit.confidence,
                   "Confidence level of the exact binomial interval")
      ->capture_default_str();
  audit_cmd
      ->add_option("--epsilon", audit.epsilon,
                   "Privacy budget epsilon to audit against")
      ->capture_default_str();
  audit_cmd
      ->add_option("--delta", audit.delta,
                   "Privacy budget delta to audit against")
      ->capture_default_str();

  LemmaCheckOptions lemma;
  CLI::App* lemma_cmd = app.add_subcommand(
      "lemma-check",
      "Probe the reconstruction guarantee on random planted instances");
  lemma_cmd->configurable();
  lemma_cmd->fallthrough();
  lemma_cmd
      ->add_option("--instances", lemma.instances,
                   "Planted instances to keep")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  lemma_cmd->add_option("--max-d", lemma.max_dim, "Largest dimension to draw")
      ->capture_default_str();
  lemma_cmd->add_option("--max-k", lemma.max_k, "Largest list length to draw")
      ->capture_default_str();
  lemma_cmd->add_option("--seed", lemma.seed, "Master seed")
      ->capture_default_str()
      ->envname("CONTDP_SEED");
  lemma_cmd->add_option("--out", lemma.out_path,
                        "Write the JSON report here (default: stdout)");

  ParamsOptions params;
  CLI::App* params_cmd = app.add_subcommand(
      "params", "Print derived constants for one (alpha, d) operating point");
  params_cmd->configurable();
  params_cmd->fallthrough();
  params_cmd->add_option("--alpha", params.alpha, "Accuracy parameter alpha")
      ->required();
  params_cmd->add_option("--d", params.dim, "Dimension d")->required();
  params_cmd->add_option("--out", params.out_path,
                         "Also write the table as JSON here");

  try {
    app.parse(argc, argv);
    // Dispatch by hand: a subcommand triggered both on the command line and
    // from a --config section must still run exactly once.
    if (*oblivious_cmd) {
      RunObliviousAccuracyCommand(oblivious);
    } else if (*attack_cmd) {
      RunAuditCommand("adaptive-attack", attack);
    } else if (*audit_cmd) {
      RunAuditCommand("audit", audit);
    } else if (*lemma_cmd) {
      RunLemmaCheckCommand(lemma);
    } else if (*params_cmd) {
      RunParamsCommand(params);
    }
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);  // prints the message
    return 2;
  } catch (const UsageError& e) {
    std::cerr << kToolName << ": " << e.what() << '\n';
    return 2;
  } catch (const ProtocolViolation& e) {
    std::cerr << kToolName << ": protocol violation: " << e.what() << '\n';
    return 3;
  } catch (const LifecycleError& e) {
    std::cerr << kToolName << ": lifecycle error: " << e.what() << '\n';
    return 3;
  } catch (const IoError& e) {
    std::cerr << kToolName << ": i/o error: " << e.what() << '\n';
    return 4;
  } catch (const std::exception& e) {
    std::cerr << kToolName << ": internal error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

}  // namespace contdp
