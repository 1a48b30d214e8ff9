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
// The echo-back reconstruction adversary.  Strategy:
//
//   * Setup: send a uniform secret b, but at one uniformly chosen
//     coordinate i* submit the challenge pair (-1, +1) or (+1, -1).
//   * First arrival: send a uniform vector.
//   * Every later arrival: echo the mechanism's previous output back at it.
//
// Echoing makes each published estimate part of the arrival prefix, so an
// accurate mechanism is forced to stay correlated with the secret along all
// of its own past outputs; the sign majority of the outputs then
// reconstructs the delivered secret (reconstruction guarantee), including
// the challenged coordinate — which reveals the hidden side.

#ifndef CONTDP_ADVERSARY_H_
#define CONTDP_ADVERSARY_H_

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "contdp/game.h"
#include "contdp/problem.h"
#include "contdp/reconstruction.h"
#include "contdp/rng.h"
#include "contdp/signvec.h"

namespace contdp {

// Smallest horizon at which the attack's reconstruction guarantee becomes
// effective: ceil(1 + 100 / alpha^2).  UsageError unless alpha is in (0, 1).
std::int64_t DefaultAttackHorizon(double alpha);

// Reconstruction parameters the attack analysis plugs into the guarantee:
// p = 0.99 * alpha, q = 1.02 * alpha^2, k = horizon.
ReconstructionParams AttackLemmaParams(const ProblemParams& params);

struct AttackDecision {
  SignVector reconstruction;  // sign majority of the observed outputs
  Side guess = Side::kLeft;
};

class ReconstructionAdversary final : public Adversary {
 public:
  // All attack randomness (secret, challenge coordinate, pair orientation,
  // first arrival) comes from `seed`.
  ReconstructionAdversary(const ProblemParams& params, std::uint64_t seed);

  RoundAction NextRound(std::int64_t round) override;
  void Observe(const std::optional<SignVector>& output) override;

  // After all d + T rounds: majority reconstruction and side guess.  The
  // guess is L exactly when the reconstruction at i* matches the pair's L
  // candidate (ties in the majority resolve to +1 upstream, so the guess is
  // deterministic given the outputs).  LifecycleError before the game ends.
  AttackDecision Finish() const;

  const SignVector& secret() const { return secret_; }
  std::int64_t challenge_index() const { return challenge_index_; }  // 0-based
  int pair_left() const { return pair_left_; }
  int pair_right() const { return -pair_left_; }
  std::span<const SignVector> collected_outputs() const { return outputs_; }

 private:
  ProblemParams params_;
  Rng rng_;
  SignVector secret_;
  std::int64_t challenge_index_;
  int pair_left_;

  std::int64_t next_round_ = 1;
  bool awaiting_observe_ = false;
  std::optional<SignVector> last_output_;
  std::vector<SignVector> outputs_;
};

}  // namespace contdp

#endif  // CONTDP_ADVERSARY_H_
