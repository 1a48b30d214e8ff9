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

#include "contdp/adversary.h"

#include <cmath>
#include <string>

#include "contdp/errors.h"

namespace contdp {

std::int64_t DefaultAttackHorizon(double alpha) {
  if (!(alpha > 0.0) || !(alpha < 1.0)) {
    throw UsageError("alpha must lie strictly in (0, 1)");
  }
  return static_cast<std::int64_t>(std::ceil(1.0 + 100.0 / (alpha * alpha)));
}

ReconstructionParams AttackLemmaParams(const ProblemParams& params) {
  return ReconstructionParams(0.99 * params.alpha,
                              1.02 * params.alpha * params.alpha,
                              params.horizon);
}

ReconstructionAdversary::ReconstructionAdversary(const ProblemParams& params,
                                                 std::uint64_t seed)
    : params_(params), rng_(MakeRng(seed)) {
  // Fixed draw order so a seed pins the whole attack: secret, challenge
  // coordinate, pair orientation.  The first arrival is drawn when sent.
  secret_ = RandomSignVector(params_.dim, rng_);
  challenge_index_ =
      std::uniform_int_distribution<std::int64_t>(0, params_.dim - 1)(rng_);
  pair_left_ = (rng_() & 1) ? 1 : -1;
}

RoundAction ReconstructionAdversary::NextRound(std::int64_t round) {
  if (awaiting_observe_ || round != next_round_) {
    throw LifecycleError("adversary expected round " +
                         std::to_string(next_round_) +
                         (awaiting_observe_ ? " after an observation" : "") +
                         ", got round " + std::to_string(round));
  }
  if (round > params_.dim + params_.horizon) {
    throw LifecycleError("round " + std::to_string(round) +
                         " past the end of the game");
  }
  awaiting_observe_ = true;
  if (round <= params_.dim) {
    const std::int64_t i = round - 1;
    if (i == challenge_index_) {
      return RoundAction::Chall(StreamElement::Bit(pair_left_),
                                StreamElement::Bit(-pair_left_));
    }
    return RoundAction::Reg(StreamElement::Bit(secret_.sign_at(i)));
  }
  if (round == params_.dim + 1) {
    return RoundAction::Reg(
        StreamElement::Vector(RandomSignVector(params_.dim, rng_)));
  }
  if (!last_output_.has_value()) {
    throw LifecycleError("no previous output to echo at round " +
                         std::to_string(round));
  }
  return RoundAction::Reg(StreamElement::Vector(*last_output_));
}

void ReconstructionAdversary::Observe(const std::optional<SignVector>& output) {
  if (!awaiting_observe_) {
    throw LifecycleError("observation without a pending round");
  }
  awaiting_observe_ = false;
  const std::int64_t round = next_round_++;
  if (round <= params_.dim) {
    if (output.has_value()) {
      throw ProtocolViolation("unexpected output during setup round " +
                              std::to_string(round));
    }
    return;
  }
  if (!output.has_value()) {
    throw ProtocolViolation("missing output at arrival round " +
                            std::to_string(round));
  }
  if (output->dim() != params_.dim) {
    throw ProtocolViolation("output at round " + std::to_string(round) +
                            " has dimension " + std::to_string(output->dim()) +
                            ", expected " + std::to_string(params_.dim));
  }
  last_output_ = *output;
  outputs_.push_back(*output);
}

AttackDecision ReconstructionAdversary::Finish() const {
  if (static_cast<std::int64_t>(outputs_.size()) != params_.horizon) {
    throw LifecycleError("attack incomplete: observed " +
                         std::to_string(outputs_.size()) + " of " +
                         std::to_string(params_.horizon) + " outputs");
  }
  AttackDecision decision;
  decision.reconstruction = SignMajority(outputs_);
  decision.guess = decision.reconstruction.sign_at(challenge_index_) ==
                           pair_left_
                       ? Side::kLeft
                       : Side::kRight;
  return decision;
}

}  // namespace contdp
