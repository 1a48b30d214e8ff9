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
// The estimation problem the laboratory studies.  A data holder receives a
// secret b in {-1,+1}^d during a setup phase, then T arrival vectors
// v_1..v_T; after each arrival it must republish an estimate y in {-1,+1}^d.
// The estimate at step t is "accurate" when y is close to alpha*b along b
// itself and along every arrival seen so far:
//
//     |<y - alpha*b, b>|   <= slack               (bias check)
//     |<y - alpha*b, v_j>| <= slack  for j <= t   (prefix checks)
//
// with slack = alpha^2 * d / 100.  A whole transcript is accurate when every
// step is.  These checks are what the oblivious mechanism passes with high
// probability and what the adaptive attack forces every mechanism to fail.

#ifndef CONTDP_PROBLEM_H_
#define CONTDP_PROBLEM_H_

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "contdp/signvec.h"

namespace contdp {

// Instance parameters.  alpha must lie strictly in (0, 1); the guarantees
// the laboratory probes are meaningful for alpha < 1/2, so alpha >= 1/2
// raises a flag instead of an error.
struct ProblemParams {
  ProblemParams(double alpha, std::int64_t dim, std::int64_t horizon);

  double alpha;
  std::int64_t dim;      // d, number of coordinates
  std::int64_t horizon;  // T, number of arrival steps
  double slack;          // alpha^2 * dim / 100, the loss threshold
  bool alpha_regime_flag;  // true when alpha >= 0.5
};

// Outcome of the loss check at one step.  Violations report the worst
// margin actually measured so callers can see how badly a check failed;
// `passed` compares margins against slack with plain <=, no tolerance.
struct LossVerdict {
  bool passed = false;
  double b_violation = 0.0;             // |<y - alpha b, b>|
  double worst_prefix_violation = 0.0;  // max_j |<y - alpha b, v_j>|, 0 if no prefix
  // 1-based index of the worst prefix element, absent when the prefix is empty.
  std::optional<std::int64_t> worst_prefix_index;
};

// Evaluates the step loss for estimate y against secret b and the arrival
// prefix.  All vectors must have dimension params.dim and the prefix must
// not exceed params.horizon.
LossVerdict LossSatisfied(const ProblemParams& params, const SignVector& b,
                          std::span<const SignVector> prefix,
                          const SignVector& y);

// Same, but pulls inner products from (and records them into) `table`,
// letting callers share work across steps of one transcript.
LossVerdict LossSatisfiedWithTable(const ProblemParams& params,
                                   const SignVector& b,
                                   std::span<const SignVector> prefix,
                                   const SignVector& y, InnerTable& table);

// Whole-transcript verdict: step t is judged against the prefix v_1..v_t.
struct TranscriptVerdict {
  bool accurate = false;
  std::vector<LossVerdict> steps;            // one per arrival step
  std::optional<std::int64_t> first_failure_t;  // 1-based, absent if accurate
};

// Judges a full transcript of `horizon` arrivals and outputs.  Repeated
// vector handles (shared storage) are evaluated once; the dominant cost is
// one blocked sweep over the distinct vector pairs involved.
TranscriptVerdict TranscriptAccurate(const ProblemParams& params,
                                     const SignVector& b,
                                     std::span<const SignVector> arrivals,
                                     std::span<const SignVector> outputs);

TranscriptVerdict TranscriptAccurateWithTable(
    const ProblemParams& params, const SignVector& b,
    std::span<const SignVector> arrivals, std::span<const SignVector> outputs,
    InnerTable& table);

}  // namespace contdp

#endif  // CONTDP_PROBLEM_H_
