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
// Statistical oracles in this file (Clopper-Pearson endpoints, binomial
// quantile regions, dp_tv values) were frozen from an independent
// implementation based on beta/binomial quantile functions, so the library
// is tested against the definitions rather than against itself.

#include "contdp/audit.h"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "contdp/errors.h"
#include "contdp/mechanisms.h"
#include "doctest.h"

namespace contdp {
namespace {

TEST_CASE("PrivacyParams validates the budget") {
  CHECK_THROWS_AS(PrivacyParams(-0.1, 0.0), UsageError);
  CHECK_THROWS_AS(PrivacyParams(0.1, -0.01), UsageError);
  CHECK_THROWS_AS(PrivacyParams(0.1, 1.01), UsageError);
  CHECK_THROWS_AS(PrivacyParams(std::nan(""), 0.0), UsageError);
  const PrivacyParams def;
  CHECK(def.epsilon == 0.0);
  CHECK(def.delta == 0.0);
}

TEST_CASE("DpTvBound evaluates both branches and the clip") {
  // epsilon = 0.2, delta = 0.05: expm1 branch wins (frozen oracle value).
  CHECK(DpTvBound(PrivacyParams(0.2, 0.05)) ==
        doctest::Approx(0.27140275816016984).epsilon(1e-14));
  CHECK(DpTvBoundLinear(PrivacyParams(0.2, 0.05)) == 0.45);
  // Tiny epsilon: still the expm1 branch (e^x - 1 < 2x for x < ln 2 + ...).
  CHECK(DpTvBound(PrivacyParams(0.05, 0.0)) == std::expm1(0.05));
  // Large epsilon: the linear form no longer applies, and the value clips.
  CHECK(DpTvBound(PrivacyParams(2.0, 0.1)) == 1.0);
  CHECK(DpTvBound(PrivacyParams(1.0, 0.0)) == 1.0);
  // Pure-delta budget.
  CHECK(DpTvBound(PrivacyParams(0.0, 0.3)) == 0.3);
  // TV bounds never exceed 1.
  CHECK(DpTvBound(PrivacyParams(0.0, 1.0)) == 1.0);
}

TEST_CASE("RrPrivacyExact matches the closed form and its 3-alpha cap") {
  CHECK_THROWS_AS(RrPrivacyExact(0.0), UsageError);
  CHECK_THROWS_AS(RrPrivacyExact(1.0), UsageError);
  CHECK_THROWS_AS(RrPrivacyExact(-0.2), UsageError);
  CHECK(RrPrivacyExact(0.45) ==
        doctest::Approx(0.9694005571881035).epsilon(1e-14));
  // ln((1+a)/(1-a)) computed naively, across the range.
  for (double alpha = 0.05; alpha < 0.96; alpha += 0.05) {
    CHECK(RrPrivacyExact(alpha) ==
          doctest::Approx(std::log((1.0 + alpha) / (1.0 - alpha)))
              .epsilon(1e-12));
  }
  // The 3-alpha cap is a theorem for alpha <= 1/2 and remains numerically
  // true up to ~0.857; past that the exact loss exceeds it.  Both regimes
  // are pinned here so the crossover is a documented fact, not a surprise.
  for (const double alpha : {0.05, 0.2, 0.45, 0.5, 0.7, 0.85}) {
    CHECK(RrPrivacyExact(alpha) <= 3.0 * alpha);
  }
  for (const double alpha : {0.90, 0.95}) {
    CHECK(RrPrivacyExact(alpha) > 3.0 * alpha);
  }
  // Strictly increasing in alpha.
  CHECK(RrPrivacyExact(0.2) < RrPrivacyExact(0.3));
  CHECK(RrPrivacyExact(0.8) < RrPrivacyExact(0.9));
}

TEST_CASE("HoeffdingFailureBound matches the closed form") {
  CHECK_THROWS_AS(HoeffdingFailureBound(0.0, 100, 10), UsageError);
  CHECK_THROWS_AS(HoeffdingFailureBound(0.45, 0, 10), UsageError);
  CHECK_THROWS_AS(HoeffdingFailureBound(0.45, 100, -1), UsageError);
  // Frozen oracle values at the headline operating points.
  CHECK(HoeffdingFailureBound(0.45, 10000000, 200) ==
        doctest::Approx(5.00993399108249e-07).epsilon(1e-12));
  CHECK(HoeffdingFailureBound(0.45, 4000000, 200) ==
        doctest::Approx(0.11027280793234728).epsilon(1e-12));
  // T = 0 is the setup-only transcript: just the two-sided b-check event.
  CHECK(HoeffdingFailureBound(0.45, 1000, 0) ==
        doctest::Approx(2.0 * std::exp(-std::pow(0.45, 4) * 1000.0 / 20000.0))
            .epsilon(1e-12));
  // Monotone: looser in T, tighter in d and alpha.
  CHECK(HoeffdingFailureBound(0.45, 1000000, 50) <
        HoeffdingFailureBound(0.45, 1000000, 51));
  CHECK(HoeffdingFailureBound(0.45, 2000000, 50) <
        HoeffdingFailureBound(0.45, 1000000, 50));
  CHECK(HoeffdingFailureBound(0.5, 1000000, 50) <
        HoeffdingFailureBound(0.45, 1000000, 50));
}

TEST_CASE("MaxTOblivious is the exact crossing point") {
  CHECK_THROWS_AS(MaxTOblivious(0.0, 100), UsageError);
  CHECK_THROWS_AS(MaxTOblivious(0.45, 0), UsageError);
  // Small d: even T = 1 fails the 1/T test.
  CHECK(MaxTOblivious(0.45, 100) == 0);
  // Astronomical d saturates at 2^62.
  CHECK(MaxTOblivious(0.9, std::int64_t{1} << 50) == std::int64_t{1} << 62);
  // Where the answer is finite and positive, it is the largest T with
  // failure_bound(T) <= 1/T.
  for (const auto& [alpha, dim] :
       std::vector<std::pair<double, std::int64_t>>{
           {0.45, 1000000}, {0.45, 10000000}, {0.3, 50000000}, {0.7, 400000}}) {
    const std::int64_t t_max = MaxTOblivious(alpha, dim);
    REQUIRE(t_max >= 1);
    CHECK(HoeffdingFailureBound(alpha, dim, t_max) <=
          1.0 / static_cast<double>(t_max));
    CHECK(HoeffdingFailureBound(alpha, dim, t_max + 1) >
          1.0 / static_cast<double>(t_max + 1));
  }
  // Monotone in d.
  CHECK(MaxTOblivious(0.45, 2000000) >= MaxTOblivious(0.45, 1000000));
}

TEST_CASE("ClopperPearsonInterval matches frozen beta-quantile oracles") {
  // Each (trials, successes, confidence) endpoint below was frozen from an
  // independent beta-quantile computation.
  const auto all = ClopperPearsonInterval(50, 50, 0.95);
  CHECK(all.first == doctest::Approx(0.9288782635).epsilon(1e-8));
  CHECK(all.second == 1.0);

  const auto half = ClopperPearsonInterval(200, 100, 0.95);
  CHECK(half.first == doctest::Approx(0.4286584309).epsilon(1e-8));
  CHECK(half.second == doctest::Approx(0.5713415691).epsilon(1e-8));

  const auto none = ClopperPearsonInterval(200, 0, 0.95);
  CHECK(none.first == 0.0);
  CHECK(none.second == doctest::Approx(0.0182753404).epsilon(1e-8));

  const auto thirty = ClopperPearsonInterval(30, 30, 0.95);
  CHECK(thirty.first == doctest::Approx(0.8842966918).epsilon(1e-8));

  const auto big = ClopperPearsonInterval(100000, 72500, 0.99);
  CHECK(big.first == doctest::Approx(0.7213472618).epsilon(1e-8));
  CHECK(big.second == doctest::Approx(0.7286312931).epsilon(1e-8));

  const auto seven = ClopperPearsonInterval(10, 7, 0.90);
  CHECK(seven.first == doctest::Approx(0.3933757839).epsilon(1e-8));
  CHECK(seven.second == doctest::Approx(0.9127355661).epsilon(1e-8));
}

TEST_CASE("ClopperPearsonInterval basic properties and validation") {
  CHECK_THROWS_AS(ClopperPearsonInterval(0, 0, 0.95), UsageError);
  CHECK_THROWS_AS(ClopperPearsonInterval(10, -1, 0.95), UsageError);
  CHECK_THROWS_AS(ClopperPearsonInterval(10, 11, 0.95), UsageError);
  CHECK_THROWS_AS(ClopperPearsonInterval(10, 5, 0.0), UsageError);
  CHECK_THROWS_AS(ClopperPearsonInterval(10, 5, 1.0), UsageError);
  // The interval brackets the point estimate and tightens with more data.
  const auto narrow = ClopperPearsonInterval(1000, 500, 0.95);
  const auto wide = ClopperPearsonInterval(10, 5, 0.95);
  CHECK(narrow.first <= 0.5);
  CHECK(narrow.second >= 0.5);
  CHECK(narrow.second - narrow.first < wide.second - wide.first);
  // Higher confidence widens it.
  const auto conf99 = ClopperPearsonInterval(100, 50, 0.99);
  const auto conf90 = ClopperPearsonInterval(100, 50, 0.90);
  CHECK(conf99.first < conf90.first);
  CHECK(conf99.second > conf90.second);
}

TEST_CASE("ParallelTrials covers every index exactly once and rethrows") {
  std::vector<int> counts(100, 0);
  ParallelTrials(100, 4, [&](std::int64_t i) {
    // Per-index slots: no two workers touch the same entry.
    counts[static_cast<std::size_t>(i)] += 1;
  });
  for (const int c : counts) CHECK(c == 1);

  CHECK_THROWS_AS(ParallelTrials(0, 1, [](std::int64_t) {}), UsageError);
  CHECK_THROWS_AS(ParallelTrials(64, 4,
                                 [](std::int64_t i) {
                                   if (i == 57) {
                                     throw std::runtime_error("worker failed");
                                   }
                                 }),
                  std::runtime_error);
}

TEST_CASE("RunAttackTrial is deterministic and internally consistent") {
  const ProblemParams params(0.45, 2000, 40);
  const MechanismFactory factory = BuiltinMechanismFactory("fresh-rr");
  const TrialRecord a = RunAttackTrial(factory, params, 3, 987654);
  const TrialRecord b = RunAttackTrial(factory, params, 3, 987654);
  CHECK(a.trial == 3);
  CHECK(a.side == b.side);
  CHECK(a.guess == b.guess);
  CHECK(a.success == (a.guess == a.side));
  CHECK(a.accurate == b.accurate);
  CHECK(a.step_passed == b.step_passed);
  CHECK(a.reconstruction_correlation == b.reconstruction_correlation);
  REQUIRE(a.step_passed.size() == 40);
  // accurate / first_failure_t must agree with the per-step verdicts.
  bool all = true;
  std::optional<std::int64_t> first;
  for (std::size_t t = 0; t < a.step_passed.size(); ++t) {
    if (!a.step_passed[t] && all) {
      all = false;
      first = static_cast<std::int64_t>(t) + 1;
    }
  }
  CHECK(a.accurate == all);
  CHECK(a.first_failure_t == first);
  CHECK(a.worst_violation >= 0.0);
  CHECK(a.reconstruction_correlation >= -1.0);
  CHECK(a.reconstruction_correlation <= 1.0);
}

TEST_CASE("Attack trials reconstruct the secret against fresh-rr") {
  // d = 20000, T = 50: majority-of-releases recovers each coordinate with
  // probability ~0.9998, so the reconstruction correlation concentrates near
  // 2 * 0.9998 - 1 and the side guess is essentially always right.
  const ProblemParams params(0.45, 20000, 50);
  const MechanismFactory factory = BuiltinMechanismFactory("fresh-rr");
  int successes = 0;
  bool saw_left = false;
  bool saw_right = false;
  for (std::int64_t trial = 0; trial < 20; ++trial) {
    const TrialRecord record = RunAttackTrial(factory, params, trial, 555000);
    successes += record.success ? 1 : 0;
    saw_left = saw_left || record.side == Side::kLeft;
    saw_right = saw_right || record.side == Side::kRight;
    CHECK(record.reconstruction_correlation > 0.99);
  }
  CHECK(successes >= 19);
  // The hidden side is actually randomized across trials.
  CHECK(saw_left);
  CHECK(saw_right);
}

TEST_CASE("Echo attack breaks oblivious-rr accuracy at step 2") {
  // The oblivious mechanism republishes y_1; from step 2 on, the echoed
  // arrival v_2 = y_1 makes |<y - alpha b, y_1>| >= (1 - alpha) d, far above
  // slack -- so the t = 2 loss check fails deterministically.
  const ProblemParams params(0.45, 10000, 5);
  const MechanismFactory factory = BuiltinMechanismFactory("oblivious-rr");
  for (std::int64_t trial = 0; trial < 10; ++trial) {
    const TrialRecord record = RunAttackTrial(factory, params, trial, 321321);
    REQUIRE(record.step_passed.size() == 5);
    CHECK_FALSE(record.accurate);
    CHECK(record.step_passed[1] == 0);
    REQUIRE(record.first_failure_t.has_value());
    CHECK(*record.first_failure_t <= 2);
  }
}

TEST_CASE("EstimateChallengeAdvantage aggregates its records faithfully") {
  ChallengeAuditConfig config{ProblemParams(0.45, 2000, 40), 20, 0.95,
                              PrivacyParams(0.2, 0.05), 24680, 1};
  const MechanismFactory factory = BuiltinMechanismFactory("fresh-rr");
  const ChallengeAuditResult result =
      EstimateChallengeAdvantage(factory, config);
  REQUIRE(result.records.size() == 20);
  std::int64_t successes = 0;
  std::int64_t accurate = 0;
  std::int64_t precondition_trials = 0;
  std::int64_t floor_count = 0;
  double corr_sum = 0.0;
  for (std::size_t i = 0; i < result.records.size(); ++i) {
    const TrialRecord& record = result.records[i];
    CHECK(record.trial == static_cast<std::int64_t>(i));
    // Each record must be the trial the public single-trial API produces.
    const TrialRecord replay =
        RunAttackTrial(factory, config.params, record.trial,
                       config.master_seed);
    CHECK(replay.side == record.side);
    CHECK(replay.guess == record.guess);
    CHECK(replay.reconstruction_correlation ==
          record.reconstruction_correlation);
    successes += record.success ? 1 : 0;
    accurate += record.accurate ? 1 : 0;
    if (record.preconditions_ok) {
      ++precondition_trials;
      corr_sum += record.reconstruction_correlation;
      if (record.reconstruction_correlation >=
          kReconstructionCorrelationFloor) {
        ++floor_count;
      }
    }
  }
  const AuditReport& report = result.report;
  CHECK(report.trials == 20);
  CHECK(report.successes == successes);
  CHECK(report.p_hat == static_cast<double>(successes) / 20.0);
  const auto interval = ClopperPearsonInterval(20, successes, 0.95);
  CHECK(report.ci_low == interval.first);
  CHECK(report.ci_high == interval.second);
  CHECK(report.tv_lower == std::max(0.0, 2.0 * report.ci_low - 1.0));
  CHECK(report.budget_tv ==
        doctest::Approx(0.27140275816016984).epsilon(1e-14));
  CHECK((report.verdict == Verdict::kViolates) ==
        (report.tv_lower > report.budget_tv));
  CHECK(report.accuracy_rate == static_cast<double>(accurate) / 20.0);
  CHECK(report.precondition_trials == precondition_trials);
  CHECK(report.precondition_rate ==
        static_cast<double>(precondition_trials) / 20.0);
  CHECK(report.reconstruction_floor_count == floor_count);
  if (precondition_trials > 0) {
    CHECK(report.mean_reconstruction_correlation ==
          doctest::Approx(corr_sum / static_cast<double>(precondition_trials))
              .epsilon(1e-12));
  } else {
    CHECK(report.mean_reconstruction_correlation == 0.0);
  }
}

TEST_CASE("Audit results are identical across job counts") {
  ChallengeAuditConfig config{ProblemParams(0.45, 1000, 30), 12, 0.95,
                              PrivacyParams(0.2, 0.05), 13579, 1};
  const MechanismFactory factory = BuiltinMechanismFactory("fresh-rr");
  const ChallengeAuditResult serial =
      EstimateChallengeAdvantage(factory, config);
  config.jobs = 4;
  const ChallengeAuditResult parallel =
      EstimateChallengeAdvantage(factory, config);
  REQUIRE(serial.records.size() == parallel.records.size());
  for (std::size_t i = 0; i < serial.records.size(); ++i) {
    CHECK(serial.records[i].side == parallel.records[i].side);
    CHECK(serial.records[i].guess == parallel.records[i].guess);
    CHECK(serial.records[i].reconstruction_correlation ==
          parallel.records[i].reconstruction_correlation);
    CHECK(serial.records[i].step_passed == parallel.records[i].step_passed);
  }
  CHECK(serial.report.successes == parallel.report.successes);
  CHECK(serial.report.ci_low == parallel.report.ci_low);
  CHECK(serial.report.verdict == parallel.report.verdict);
}

TEST_CASE("Fresh-rr audit certifies a violation at moderate scale") {
  // The attack wins essentially every game, so the certified TV lower bound
  // rises far above any small budget's cap: statistical evidence that no
  // small (epsilon, delta) guarantee can hold adaptively.
  ChallengeAuditConfig config{ProblemParams(0.45, 20000, 50), 60, 0.95,
                              PrivacyParams(0.2, 0.05), 7777, 0};
  const ChallengeAuditResult result =
      EstimateChallengeAdvantage(BuiltinMechanismFactory("fresh-rr"), config);
  CHECK(result.report.p_hat >= 0.95);
  CHECK(result.report.tv_lower > 0.45);
  CHECK(result.report.verdict == Verdict::kViolates);
}

TEST_CASE("Fixed-output audit stays consistent (calibration control)") {
  // Against a secret-independent mechanism the adversary's guess is a coin
  // flip; with 200 trials the interval comfortably covers 1/2 and the
  // certified TV stays below the budget cap.
  ChallengeAuditConfig config{ProblemParams(0.45, 500, 10), 200, 0.95,
                              PrivacyParams(0.2, 0.05), 20232023, 0};
  const ChallengeAuditResult result =
      EstimateChallengeAdvantage(BuiltinMechanismFactory("fixed-output"),
                                 config);
  CHECK(result.report.p_hat > 0.30);
  CHECK(result.report.p_hat < 0.70);
  CHECK(result.report.verdict == Verdict::kConsistent);
  // A mechanism that ignores the secret is wildly inaccurate.
  CHECK(result.report.accuracy_rate == 0.0);
}

TEST_CASE("RunObliviousTrial judges a faithful transcript accurate") {
  // alpha^4 d / 20000 = 20.5 at d = 10^7: failure probability ~5e-7 per
  // 200-step transcript, so 3 short trials are accurate with certainty for
  // practical purposes.
  const ProblemParams params(0.45, 10000000, 5);
  const MechanismFactory factory = BuiltinMechanismFactory("oblivious-rr");
  for (std::int64_t trial = 0; trial < 3; ++trial) {
    const ObliviousTrialRecord record =
        RunObliviousTrial(factory, params, trial, 11223344);
    CHECK(record.trial == trial);
    CHECK(record.accurate);
    CHECK_FALSE(record.first_failure_t.has_value());
    REQUIRE(record.steps.size() == 5);
    CHECK(record.worst_violation <= params.slack);
    CHECK(record.worst_violation > 0.0);
  }
}

TEST_CASE("RunObliviousAccuracy aggregates and reports the failure bound") {
  const ProblemParams params(0.45, 10000000, 5);
  const ObliviousAccuracyResult result = RunObliviousAccuracy(
      BuiltinMechanismFactory("oblivious-rr"), params, 3, 11223344, 2);
  CHECK(result.trials == 3);
  CHECK(result.accurate_trials == 3);
  CHECK(result.accuracy_rate == 1.0);
  CHECK(result.hoeffding_bound ==
        HoeffdingFailureBound(0.45, 10000000, 5));
  REQUIRE(result.records.size() == 3);
  // Deterministic in the master seed, regardless of jobs.
  const ObliviousAccuracyResult replay = RunObliviousAccuracy(
      BuiltinMechanismFactory("oblivious-rr"), params, 3, 11223344, 1);
  CHECK(replay.worst_violation == result.worst_violation);
  CHECK(replay.records[2].worst_violation == result.records[2].worst_violation);
}

TEST_CASE("RunObliviousAccuracy flags a useless mechanism") {
  // fixed-output never tracks b: |<y, b> - alpha d| concentrates near
  // alpha d, hundreds of times the slack, so every trial fails at step 1.
  const ProblemParams params(0.45, 10000, 3);
  const ObliviousAccuracyResult result = RunObliviousAccuracy(
      BuiltinMechanismFactory("fixed-output"), params, 5, 999, 1);
  CHECK(result.accuracy_rate == 0.0);
  for (const auto& record : result.records) {
    REQUIRE(record.first_failure_t.has_value());
    CHECK(*record.first_failure_t == 1);
    CHECK(record.worst_violation > 100.0 * params.slack);
  }
}

}  // namespace
}  // namespace contdp
