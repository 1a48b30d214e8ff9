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
//
// Empirical privacy auditing.  The bridge from game statistics to privacy
// claims is total variation: if a mechanism satisfies an (epsilon, delta)
// guarantee against adaptive adversaries, the two view distributions induced
// by the challenge sides are close in total variation, so *any* guessing
// rule's advantage is capped by dp_tv_bound(epsilon, delta).  The audit
// therefore plays many independent games, estimates the guess success rate
// with an exact (Clopper-Pearson) confidence interval, converts the interval
// into a certified lower bound on total variation, and declares a violation
// when that lower bound exceeds the budget's cap.  No consistent verdict is
// ever a proof of privacy; a violates verdict is statistical evidence of a
// broken guarantee.

#ifndef CONTDP_AUDIT_H_
#define CONTDP_AUDIT_H_

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "contdp/adversary.h"
#include "contdp/game.h"
#include "contdp/mechanisms.h"
#include "contdp/problem.h"

namespace contdp {

// An (epsilon, delta) differential-privacy budget; epsilon >= 0 and
// delta in [0, 1].  Default-constructed is the trivial budget (0, 0).
struct PrivacyParams {
  PrivacyParams() = default;
  PrivacyParams(double epsilon, double delta);
  double epsilon = 0.0;
  double delta = 0.0;
};

// Cap on the total variation distance between one-round output
// distributions under an (epsilon, delta) guarantee:
// min((e^epsilon - 1) + delta, and for epsilon <= 1 also 2*epsilon + delta),
// clipped above by 1.
double DpTvBound(const PrivacyParams& params);

// The small-epsilon linear form 2*epsilon + delta by itself (unclipped).
double DpTvBoundLinear(const PrivacyParams& params);

// Exact privacy loss of one randomized-response coordinate at rate alpha:
// ln((1 + alpha) / (1 - alpha)).  Bounded by 3*alpha on (0, 0.999];
// UsageError outside (0, 1).
double RrPrivacyExact(double alpha);

// Union-plus-Hoeffding bound on the probability that an oblivious
// randomized-response transcript is ever inaccurate:
// 2 * (T + 1) * exp(-alpha^4 * d / 20000).  The constant 20000 comes from
// squaring the slack alpha^2 d / 100 in the exponent: (slack/d)^2 * d / 2.
// Requires alpha in (0, 1), d >= 1, T >= 0.
double HoeffdingFailureBound(double alpha, std::int64_t dim,
                             std::int64_t horizon);

// Largest horizon T for which the failure bound stays below 1/T, i.e. the
// oblivious mechanism remains accurate except with probability o(1) in T.
// Returns 0 when even T = 1 fails; saturates at 2^62 for astronomically
// large answers.
std::int64_t MaxTOblivious(double alpha, std::int64_t dim);

// Exact (Clopper-Pearson) two-sided confidence interval for a binomial
// proportion.  confidence in (0, 1), 0 <= successes <= trials, trials >= 1.
std::pair<double, double> ClopperPearsonInterval(std::int64_t trials,
                                                 std::int64_t successes,
                                                 double confidence);

enum class Verdict { kConsistent, kViolates };

inline const char* VerdictName(Verdict v) {
  return v == Verdict::kViolates ? "violates" : "consistent";
}

// Reconstruction quality floor used in attack reports: the attack analysis
// guarantees inner(reconstruction, secret) >= 0.89 * d once the horizon
// reaches DefaultAttackHorizon(alpha).
inline constexpr double kReconstructionCorrelationFloor = 0.89;

// One audited game against the reconstruction adversary.
struct TrialRecord {
  std::int64_t trial = 0;
  Side side = Side::kLeft;
  Side guess = Side::kLeft;
  bool success = false;           // guess == side
  bool accurate = false;          // transcript passed every loss check
  std::optional<std::int64_t> first_failure_t;  // 1-based step, if inaccurate
  std::vector<std::uint8_t> step_passed;        // per-step loss verdicts
  double worst_violation = 0.0;   // largest margin over all steps
  bool preconditions_ok = false;  // reconstruction guarantee applicable
  double reconstruction_correlation = 0.0;  // inner(x~, b_side) / d
};

// Aggregate audit outcome.
struct AuditReport {
  std::int64_t trials = 0;
  std::int64_t successes = 0;
  double p_hat = 0.0;
  double confidence = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  double tv_lower = 0.0;      // max(0, 2 * ci_low - 1)
  PrivacyParams budget;
  double budget_tv = 0.0;     // DpTvBound(budget)
  Verdict verdict = Verdict::kConsistent;  // violates iff tv_lower > budget_tv
  double accuracy_rate = 0.0;
  double precondition_rate = 0.0;
  std::int64_t precondition_trials = 0;
  // Among precondition-satisfying trials:
  double mean_reconstruction_correlation = 0.0;
  std::int64_t reconstruction_floor_count = 0;  // corr >= 0.89
};

struct ChallengeAuditConfig {
  ProblemParams params;
  std::int64_t trials = 0;
  double confidence = 0.95;
  PrivacyParams budget;
  std::uint64_t master_seed = 0;
  int jobs = 1;  // worker threads; <= 0 picks the hardware concurrency
};

struct ChallengeAuditResult {
  AuditReport report;
  std::vector<TrialRecord> records;  // ordered by trial index
};

// Plays one attack game with seeds and hidden side derived from
// (master_seed, trial_index), evaluates accuracy, preconditions, and
// reconstruction quality against the delivered secret.
TrialRecord RunAttackTrial(const MechanismFactory& factory,
                           const ProblemParams& params,
                           std::int64_t trial_index, std::uint64_t master_seed);

// The full audit: config.trials independent attack games, exact interval on
// the success rate, verdict against the budget.  Identical inputs produce
// identical results regardless of the job count.
ChallengeAuditResult EstimateChallengeAdvantage(
    const MechanismFactory& factory, const ChallengeAuditConfig& config);

// One oblivious-mode accuracy trial and the aggregate experiment: uniform
// secret and arrivals, transcript judged against the loss checks.
struct ObliviousTrialRecord {
  std::int64_t trial = 0;
  bool accurate = false;
  std::optional<std::int64_t> first_failure_t;
  double worst_violation = 0.0;
  std::vector<LossVerdict> steps;
};

struct ObliviousAccuracyResult {
  std::int64_t trials = 0;
  std::int64_t accurate_trials = 0;
  double accuracy_rate = 0.0;
  double worst_violation = 0.0;  // max over trials
  double hoeffding_bound = 0.0;  // failure bound at these parameters
  std::vector<ObliviousTrialRecord> records;
};

ObliviousTrialRecord RunObliviousTrial(const MechanismFactory& factory,
                                       const ProblemParams& params,
                                       std::int64_t trial_index,
                                       std::uint64_t master_seed);

ObliviousAccuracyResult RunObliviousAccuracy(const MechanismFactory& factory,
                                             const ProblemParams& params,
                                             std::int64_t trials,
                                             std::uint64_t master_seed,
                                             int jobs);

// Runs body(0..trials-1), possibly across threads; results must be written
// to per-index slots.  Rethrows the first worker exception.
void ParallelTrials(std::int64_t trials, int jobs,
                    const std::function<void(std::int64_t)>& body);

}  // namespace contdp

#endif  // CONTDP_AUDIT_H_
