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

#include "contdp/audit.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <string>
#include <thread>

#include <boost/math/distributions/binomial.hpp>

#include "contdp/errors.h"
#include "contdp/reconstruction.h"
#include "contdp/rng.h"

namespace contdp {

PrivacyParams::PrivacyParams(double epsilon_in, double delta_in)
    : epsilon(epsilon_in), delta(delta_in) {
  if (!(epsilon >= 0.0)) {
    throw UsageError("epsilon must be nonnegative");
  }
  if (!(delta >= 0.0) || !(delta <= 1.0)) {
    throw UsageError("delta must lie in [0, 1]");
  }
}

double DpTvBound(const PrivacyParams& params) {
  double bound = std::expm1(params.epsilon) + params.delta;
  if (params.epsilon <= 1.0) {
    bound = std::min(bound, DpTvBoundLinear(params));
  }
  return std::min(bound, 1.0);
}

double DpTvBoundLinear(const PrivacyParams& params) {
  return 2.0 * params.epsilon + params.delta;
}

double RrPrivacyExact(double alpha) {
  if (!(alpha > 0.0) || !(alpha < 1.0)) {
    throw UsageError("alpha must lie strictly in (0, 1)");
  }
  // ln((1+a)/(1-a)) via log1p for accuracy near 0.  Note the 3*alpha cap
  // from the one-shot analysis holds for alpha <= 1/2 (and numerically up
  // to ~0.857); beyond that the exact loss exceeds 3*alpha.
  return std::log1p(alpha) - std::log1p(-alpha);
}

double HoeffdingFailureBound(double alpha, std::int64_t dim,
                             std::int64_t horizon) {
  if (!(alpha > 0.0) || !(alpha < 1.0)) {
    throw UsageError("alpha must lie strictly in (0, 1)");
  }
  if (dim < 1) {
    throw UsageError("dimension must be at least 1");
  }
  if (horizon < 0) {
    throw UsageError("horizon must be nonnegative");
  }
  // Union bound over the b-check and T prefix checks; each is a deviation of
  // d independent centered +-1 summands past slack = alpha^2 d / 100, so the
  // per-event Hoeffding bound is 2 exp(-(slack/sqrt(d))^2 / 2)
  // = 2 exp(-alpha^4 d / 20000).
  const double exponent =
      alpha * alpha * alpha * alpha * static_cast<double>(dim) / 20000.0;
  return 2.0 * static_cast<double>(horizon + 1) * std::exp(-exponent);
}

std::int64_t MaxTOblivious(double alpha, std::int64_t dim) {
  if (!(alpha > 0.0) || !(alpha < 1.0)) {
    throw UsageError("alpha must lie strictly in (0, 1)");
  }
  if (dim < 1) {
    throw UsageError("dimension must be at least 1");
  }
  // Want the largest T >= 1 with 2 (T+1) exp(-E) <= 1/T where
  // E = alpha^4 d / 20000; in logs, g(T) = ln 2 + ln(T+1) + ln T <= E.
  // g is increasing, so binary search over a doubling bracket.
  const double budget =
      alpha * alpha * alpha * alpha * static_cast<double>(dim) / 20000.0;
  const auto g = [](std::int64_t t) {
    return std::log(2.0) + std::log(static_cast<double>(t) + 1.0) +
           std::log(static_cast<double>(t));
  };
  if (g(1) > budget) return 0;
  constexpr std::int64_t kCap = std::int64_t{1} << 62;
  std::int64_t lo = 1;  // g(lo) <= budget
  std::int64_t hi = 1;
  while (g(hi) <= budget) {
    if (hi >= kCap) return kCap;  // saturate: the true answer is astronomical
    hi *= 2;
  }
  // Invariant: g(lo) <= budget < g(hi).
  while (hi - lo > 1) {
    const std::int64_t mid = lo + (hi - lo) / 2;
    if (g(mid) <= budget) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return lo;
}

std::pair<double, double> ClopperPearsonInterval(std::int64_t trials,
                                                 std::int64_t successes,
                                                 double confidence) {
  if (trials < 1) {
    throw UsageError("interval requires at least one trial");
  }
  if (successes < 0 || successes > trials) {
    throw UsageError("successes must lie in [0, trials]");
  }
  if (!(confidence > 0.0) || !(confidence < 1.0)) {
    throw UsageError("confidence must lie strictly in (0, 1)");
  }
  using boost::math::binomial_distribution;
  const double tail = (1.0 - confidence) / 2.0;
  const double lower = binomial_distribution<double>::find_lower_bound_on_p(
      static_cast<double>(trials), static_cast<double>(successes), tail);
  const double upper = binomial_distribution<double>::find_upper_bound_on_p(
      static_cast<double>(trials), static_cast<double>(successes), tail);
  return {lower, upper};
}

void ParallelTrials(std::int64_t trials, int jobs,
                    const std::function<void(std::int64_t)>& body) {
  if (trials < 1) {
    throw UsageError("at least one trial required");
  }
  int workers = jobs;
  if (workers <= 0) {
    workers = static_cast<int>(std::thread::hardware_concurrency());
    if (workers < 1) workers = 1;
  }
  workers = static_cast<int>(
      std::min<std::int64_t>(workers, trials));
  if (workers == 1) {
    for (std::int64_t i = 0; i < trials; ++i) body(i);
    return;
  }
  std::atomic<std::int64_t> next{0};
  std::mutex error_mutex;
  std::exception_ptr first_error;
  auto worker = [&]() {
    while (true) {
      const std::int64_t i = next.fetch_add(1);
      if (i >= trials) return;
      {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (first_error) return;  // stop early once something failed
      }
      try {
        body(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

TrialRecord RunAttackTrial(const MechanismFactory& factory,
                           const ProblemParams& params,
                           std::int64_t trial_index,
                           std::uint64_t master_seed) {
  const auto index = static_cast<std::uint64_t>(trial_index);
  const GameSeeds seeds{
      DeriveSeed(master_seed, seed_stream::kMechanism, index),
      DeriveSeed(master_seed, seed_stream::kAdversary, index)};
  const Side side =
      (DeriveSeed(master_seed, seed_stream::kSide, index) & 1) ? Side::kRight
                                                               : Side::kLeft;

  ReconstructionAdversary adversary(params, seeds.adversary_seed);
  const GameResult game = RunGame(factory, adversary, params, side, seeds);
  const AttackDecision decision = adversary.Finish();

  TrialRecord record;
  record.trial = trial_index;
  record.side = side;
  record.guess = decision.guess;
  record.success = decision.guess == side;

  // Judge the transcript against the secret that was actually delivered
  // (the adversary's bits with the challenge coordinate resolved).
  const SignVector& b_side = game.transcript.delivered_setup;
  InnerTable table;
  const TranscriptVerdict verdict = TranscriptAccurateWithTable(
      params, b_side, game.transcript.arrivals, game.transcript.outputs,
      table);
  record.accurate = verdict.accurate;
  record.first_failure_t = verdict.first_failure_t;
  record.step_passed.reserve(verdict.steps.size());
  for (const auto& step : verdict.steps) {
    record.step_passed.push_back(step.passed ? 1 : 0);
    record.worst_violation =
        std::max({record.worst_violation, step.b_violation,
                  step.worst_prefix_violation});
  }

  // Echo transcripts reuse the same vector pairs, so this adds almost no
  // fresh inner-product work on top of the loss evaluation.
  const PreconditionResult preconditions = CheckPreconditionsWithTable(
      b_side, game.transcript.outputs, AttackLemmaParams(params), table);
  record.preconditions_ok = preconditions.satisfied;
  record.reconstruction_correlation =
      static_cast<double>(Inner(decision.reconstruction, b_side)) /
      static_cast<double>(params.dim);
  return record;
}

ChallengeAuditResult EstimateChallengeAdvantage(
    const MechanismFactory& factory, const ChallengeAuditConfig& config) {
  if (config.trials < 1) {
    throw UsageError("audit requires at least one trial");
  }
  if (!(config.confidence > 0.0) || !(config.confidence < 1.0)) {
    throw UsageError("confidence must lie strictly in (0, 1)");
  }
  ChallengeAuditResult result;
  result.records.resize(static_cast<std::size_t>(config.trials));
  ParallelTrials(config.trials, config.jobs, [&](std::int64_t i) {
    result.records[static_cast<std::size_t>(i)] =
        RunAttackTrial(factory, config.params, i, config.master_seed);
  });

  AuditReport report;
  report.budget = config.budget;
  report.trials = config.trials;
  report.confidence = config.confidence;
  std::int64_t accurate = 0;
  double precondition_corr_sum = 0.0;
  for (const auto& record : result.records) {
    report.successes += record.success ? 1 : 0;
    accurate += record.accurate ? 1 : 0;
    if (record.preconditions_ok) {
      ++report.precondition_trials;
      precondition_corr_sum += record.reconstruction_correlation;
      if (record.reconstruction_correlation >=
          kReconstructionCorrelationFloor) {
        ++report.reconstruction_floor_count;
      }
    }
  }
  const auto trials_d = static_cast<double>(config.trials);
  report.p_hat = static_cast<double>(report.successes) / trials_d;
  std::tie(report.ci_low, report.ci_high) =
      ClopperPearsonInterval(config.trials, report.successes,
                             config.confidence);
  report.tv_lower = std::max(0.0, 2.0 * report.ci_low - 1.0);
  report.budget_tv = DpTvBound(config.budget);
  report.verdict = report.tv_lower > report.budget_tv ? Verdict::kViolates
                                                      : Verdict::kConsistent;
  report.accuracy_rate = static_cast<double>(accurate) / trials_d;
  report.precondition_rate =
      static_cast<double>(report.precondition_trials) / trials_d;
  report.mean_reconstruction_correlation =
      report.precondition_trials > 0
          ? precondition_corr_sum /
                static_cast<double>(report.precondition_trials)
          : 0.0;
  result.report = report;
  return result;
}

ObliviousTrialRecord RunObliviousTrial(const MechanismFactory& factory,
                                       const ProblemParams& params,
                                       std::int64_t trial_index,
                                       std::uint64_t master_seed) {
  const auto index = static_cast<std::uint64_t>(trial_index);
  Rng data_rng =
      MakeRng(DeriveSeed(master_seed, seed_stream::kData, index));
  const SignVector b = RandomSignVector(params.dim, data_rng);
  std::vector<SignVector> arrivals;
  arrivals.reserve(static_cast<std::size_t>(params.horizon));
  for (std::int64_t t = 0; t < params.horizon; ++t) {
    arrivals.push_back(RandomSignVector(params.dim, data_rng));
  }
  const std::vector<SignVector> outputs =
      RunOblivious(factory, params, b, arrivals,
                   DeriveSeed(master_seed, seed_stream::kMechanism, index));

  ObliviousTrialRecord record;
  record.trial = trial_index;
  TranscriptVerdict verdict = TranscriptAccurate(params, b, arrivals, outputs);
  record.accurate = verdict.accurate;
  record.first_failure_t = verdict.first_failure_t;
  for (const auto& step : verdict.steps) {
    record.worst_violation =
        std::max({record.worst_violation, step.b_violation,
                  step.worst_prefix_violation});
  }
  record.steps = std::move(verdict.steps);
  return record;
}

ObliviousAccuracyResult RunObliviousAccuracy(const MechanismFactory& factory,
                                             const ProblemParams& params,
                                             std::int64_t trials,
                                             std::uint64_t master_seed,
                                             int jobs) {
  if (trials < 1) {
    throw UsageError("at least one trial required");
  }
  ObliviousAccuracyResult result;
  result.trials = trials;
  result.records.resize(static_cast<std::size_t>(trials));
  ParallelTrials(trials, jobs, [&](std::int64_t i) {
    result.records[static_cast<std::size_t>(i)] =
        RunObliviousTrial(factory, params, i, master_seed);
  });
  for (const auto& record : result.records) {
    result.accurate_trials += record.accurate ? 1 : 0;
    result.worst_violation =
        std::max(result.worst_violation, record.worst_violation);
  }
  result.accuracy_rate =
      static_cast<double>(result.accurate_trials) / static_cast<double>(trials);
  result.hoeffding_bound =
      HoeffdingFailureBound(params.alpha, params.dim, params.horizon);
  return result;
}

}  // namespace contdp
