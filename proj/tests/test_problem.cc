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

#include "contdp/problem.h"

#include <cmath>
#include <vector>

#include "contdp/errors.h"
#include "doctest.h"

namespace contdp {
namespace {

// alpha = 1 is outside the open parameter range; tests that want an
// essentially deterministic y = b regime use this instead.
constexpr double kNearOne = 1.0 - 1e-9;

// Naive oracle: evaluates the two loss checks directly on +-1 int vectors
// in double arithmetic, mirroring the definition rather than the packed
// implementation.
struct NaiveVerdict {
  bool passed;
  double b_violation;
  double worst_prefix_violation;
  std::int64_t worst_prefix_index;  // 1-based, 0 when prefix empty
};

NaiveVerdict NaiveLoss(double alpha, const std::vector<int>& b,
                       const std::vector<std::vector<int>>& prefix,
                       const std::vector<int>& y) {
  const double d = static_cast<double>(b.size());
  const double slack = alpha * alpha * d / 100.0;
  auto inner = [](const std::vector<int>& u, const std::vector<int>& v) {
    double acc = 0;
    for (std::size_t i = 0; i < u.size(); ++i) acc += u[i] * v[i];
    return acc;
  };
  NaiveVerdict out{};
  out.b_violation = std::abs(inner(y, b) - alpha * d);
  out.worst_prefix_violation = 0.0;
  out.worst_prefix_index = 0;
  for (std::size_t j = 0; j < prefix.size(); ++j) {
    const double viol =
        std::abs(inner(y, prefix[j]) - alpha * inner(b, prefix[j]));
    if (out.worst_prefix_index == 0 || viol > out.worst_prefix_violation) {
      out.worst_prefix_violation = viol;
      out.worst_prefix_index = static_cast<std::int64_t>(j) + 1;
    }
  }
  out.passed =
      out.b_violation <= slack && out.worst_prefix_violation <= slack;
  return out;
}

std::vector<int> RandomSigns(std::int64_t dim, Rng& rng) {
  std::vector<int> signs(static_cast<std::size_t>(dim));
  for (auto& s : signs) s = (rng() & 1) ? 1 : -1;
  return signs;
}

TEST_CASE("ProblemParams validates its domain") {
  CHECK_THROWS_AS(ProblemParams(0.0, 10, 1), UsageError);
  CHECK_THROWS_AS(ProblemParams(1.0, 10, 1), UsageError);
  CHECK_THROWS_AS(ProblemParams(-0.1, 10, 1), UsageError);
  CHECK_THROWS_AS(ProblemParams(1.5, 10, 1), UsageError);
  CHECK_THROWS_AS(ProblemParams(0.45, 0, 1), UsageError);
  CHECK_THROWS_AS(ProblemParams(0.45, 10, 0), UsageError);
}

TEST_CASE("ProblemParams slack is the exact double expression") {
  const ProblemParams params(0.45, 10000000, 200);
  CHECK(params.slack == 0.45 * 0.45 * 10000000.0 / 100.0);
  // Doubling d doubles slack exactly (scaling by 2 commutes with rounding).
  const ProblemParams twice(0.45, 20000000, 200);
  CHECK(twice.slack == 2.0 * params.slack);
}

TEST_CASE("ProblemParams flags the large-alpha regime") {
  CHECK_FALSE(ProblemParams(0.49, 10, 1).alpha_regime_flag);
  CHECK(ProblemParams(0.5, 10, 1).alpha_regime_flag);
  CHECK(ProblemParams(0.9, 10, 1).alpha_regime_flag);
}

TEST_CASE("Loss passes for a faithful estimate at alpha near 1") {
  // y = b makes both checks nearly zero: |<y,b> - alpha d| = (1-alpha) d.
  const ProblemParams params(kNearOne, 4, 2);
  const SignVector b = SignVector::AllPlus(4);
  const std::vector<SignVector> prefix = {b};
  const LossVerdict verdict = LossSatisfied(params, b, prefix, b);
  CHECK(verdict.passed);
  CHECK(verdict.b_violation == doctest::Approx(4e-9).epsilon(0.1));
  CHECK(verdict.worst_prefix_index == 1);
}

TEST_CASE("Loss fails when one coordinate is flipped at alpha near 1") {
  const ProblemParams params(kNearOne, 4, 2);
  const SignVector b = SignVector::AllPlus(4);
  const SignVector y = SignVector::FromSigns({1, 1, 1, -1});
  const std::vector<SignVector> prefix = {b};
  const LossVerdict verdict = LossSatisfied(params, b, prefix, y);
  CHECK_FALSE(verdict.passed);
  // |<y,b> - alpha*4| = |2 - 4| up to 4e-9, far above slack 0.04.
  CHECK(verdict.b_violation == doctest::Approx(2.0).epsilon(1e-6));
}

TEST_CASE("Loss at small d is unforgiving even for y = b") {
  // slack = alpha^2 d / 100 < 1 at small d: y = b has bias violation
  // (1 - alpha) d, which no integer-valued estimate can repair.
  const ProblemParams params(0.45, 4, 1);
  const SignVector b = SignVector::AllPlus(4);
  const LossVerdict verdict =
      LossSatisfied(params, b, std::span<const SignVector>(), b);
  CHECK_FALSE(verdict.passed);
  CHECK(verdict.b_violation == doctest::Approx(4.0 - 0.45 * 4.0));
  CHECK(verdict.worst_prefix_violation == 0.0);
  CHECK_FALSE(verdict.worst_prefix_index.has_value());
}

TEST_CASE("Loss validates dimensions and prefix length") {
  const ProblemParams params(0.45, 4, 2);
  const SignVector b = SignVector::AllPlus(4);
  const SignVector short_v = SignVector::AllPlus(3);
  CHECK_THROWS_AS(
      LossSatisfied(params, short_v, std::span<const SignVector>(), b),
      UsageError);
  CHECK_THROWS_AS(
      LossSatisfied(params, b, std::span<const SignVector>(), short_v),
      UsageError);
  const std::vector<SignVector> bad_prefix = {b, short_v};
  CHECK_THROWS_AS(LossSatisfied(params, b, bad_prefix, b), UsageError);
  const std::vector<SignVector> long_prefix = {b, b, b};
  CHECK_THROWS_AS(LossSatisfied(params, b, long_prefix, b), UsageError);
}

TEST_CASE("Loss matches the naive oracle on random instances") {
  Rng rng = MakeRng(424242);
  for (const double alpha : {0.05, 0.3, 0.45, 0.7, 0.95}) {
    for (const std::int64_t dim : {1, 5, 64, 65, 200}) {
      for (int rep = 0; rep < 6; ++rep) {
        const auto prefix_len = static_cast<std::size_t>(rng() % 4);
        const ProblemParams params(alpha, dim, 4);
        const auto bs = RandomSigns(dim, rng);
        const auto ys = RandomSigns(dim, rng);
        std::vector<std::vector<int>> prefix_signs;
        std::vector<SignVector> prefix;
        for (std::size_t j = 0; j < prefix_len; ++j) {
          prefix_signs.push_back(RandomSigns(dim, rng));
          prefix.push_back(SignVector::FromSigns(prefix_signs.back()));
        }
        const LossVerdict got =
            LossSatisfied(params, SignVector::FromSigns(bs), prefix,
                          SignVector::FromSigns(ys));
        const NaiveVerdict want = NaiveLoss(alpha, bs, prefix_signs, ys);
        CHECK(got.passed == want.passed);
        CHECK(got.b_violation == doctest::Approx(want.b_violation));
        CHECK(got.worst_prefix_violation ==
              doctest::Approx(want.worst_prefix_violation));
        if (want.worst_prefix_index > 0) {
          CHECK(got.worst_prefix_index == want.worst_prefix_index);
        } else {
          CHECK_FALSE(got.worst_prefix_index.has_value());
        }
      }
    }
  }
}

TEST_CASE("Transcript accuracy is the conjunction of per-step losses") {
  Rng rng = MakeRng(31415);
  const ProblemParams params(0.45, 100, 6);
  for (int rep = 0; rep < 10; ++rep) {
    const SignVector b = RandomSignVector(params.dim, rng);
    std::vector<SignVector> arrivals;
    std::vector<SignVector> outputs;
    for (std::int64_t t = 0; t < params.horizon; ++t) {
      arrivals.push_back(RandomSignVector(params.dim, rng));
      // Occasionally repeat an output handle to exercise shared storage.
      if (t > 0 && rng() % 3 == 0) {
        outputs.push_back(outputs.back());
      } else {
        outputs.push_back(RandomSignVector(params.dim, rng));
      }
    }
    const TranscriptVerdict verdict =
        TranscriptAccurate(params, b, arrivals, outputs);
    REQUIRE(verdict.steps.size() == static_cast<std::size_t>(params.horizon));
    bool all = true;
    std::optional<std::int64_t> first;
    for (std::int64_t t = 0; t < params.horizon; ++t) {
      const LossVerdict step = LossSatisfied(
          params, b,
          std::span<const SignVector>(arrivals.data(),
                                      static_cast<std::size_t>(t + 1)),
          outputs[static_cast<std::size_t>(t)]);
      const auto& got = verdict.steps[static_cast<std::size_t>(t)];
      CHECK(got.passed == step.passed);
      CHECK(got.b_violation == doctest::Approx(step.b_violation));
      CHECK(got.worst_prefix_violation ==
            doctest::Approx(step.worst_prefix_violation));
      if (!step.passed && all) {
        all = false;
        first = t + 1;
      }
    }
    CHECK(verdict.accurate == all);
    CHECK(verdict.first_failure_t == first);
  }
}

TEST_CASE("Transcript verdict pinpoints the first failing step") {
  // Step 1's estimate is anti-correlated with b; step 2 is faithful.
  const ProblemParams params(kNearOne, 4, 2);
  const SignVector b = SignVector::AllPlus(4);
  const std::vector<SignVector> arrivals = {
      SignVector::FromSigns({1, 1, -1, -1}), b};
  const std::vector<SignVector> outputs = {
      SignVector::FromSigns({1, 1, 1, -1}), b};
  const TranscriptVerdict verdict =
      TranscriptAccurate(params, b, arrivals, outputs);
  CHECK_FALSE(verdict.accurate);
  CHECK(verdict.first_failure_t == 1);
  CHECK_FALSE(verdict.steps[0].passed);
  CHECK(verdict.steps[1].passed);
}

TEST_CASE("Transcript accuracy validates lengths") {
  const ProblemParams params(0.45, 4, 2);
  const SignVector b = SignVector::AllPlus(4);
  const std::vector<SignVector> one = {b};
  const std::vector<SignVector> two = {b, b};
  CHECK_THROWS_AS(TranscriptAccurate(params, b, one, two), UsageError);
  CHECK_THROWS_AS(TranscriptAccurate(params, b, two, one), UsageError);
  CHECK(TranscriptAccurate(params, b, two, two).steps.size() == 2);
}

}  // namespace
}  // namespace contdp
