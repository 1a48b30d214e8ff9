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

#include "contdp/game.h"

#include <string>

#include "contdp/errors.h"

namespace contdp {

StreamElement StreamElement::Bit(int sign) {
  if (sign != 1 && sign != -1) {
    throw UsageError("stream bit must be +1 or -1, got " +
                     std::to_string(sign));
  }
  return StreamElement(std::variant<int, SignVector>(std::in_place_index<0>,
                                                     sign));
}

StreamElement StreamElement::Vector(SignVector v) {
  if (v.empty()) {
    throw UsageError("stream vector must be non-empty");
  }
  return StreamElement(std::variant<int, SignVector>(std::in_place_index<1>,
                                                     std::move(v)));
}

int StreamElement::bit() const {
  if (!is_bit()) {
    throw UsageError("stream element is a vector, not a bit");
  }
  return std::get<0>(value_);
}

const SignVector& StreamElement::vector() const {
  if (is_bit()) {
    throw UsageError("stream element is a bit, not a vector");
  }
  return std::get<1>(value_);
}

RoundAction RoundAction::Reg(StreamElement element) {
  return RoundAction{RoundKind::kReg, std::move(element), std::nullopt};
}

RoundAction RoundAction::Chall(StreamElement left, StreamElement right) {
  return RoundAction{RoundKind::kChall, std::move(left), std::move(right)};
}

namespace {

void RequireBit(const StreamElement& e, std::int64_t round) {
  if (!e.is_bit()) {
    throw ProtocolViolation("round " + std::to_string(round) +
                            " is a setup round and requires bit elements");
  }
}

void RequireVector(const StreamElement& e, std::int64_t round,
                   std::int64_t dim) {
  if (e.is_bit()) {
    throw ProtocolViolation("round " + std::to_string(round) +
                            " is an arrival round and requires vector elements");
  }
  if (e.vector().dim() != dim) {
    throw ProtocolViolation("arrival at round " + std::to_string(round) +
                            " has dimension " +
                            std::to_string(e.vector().dim()) + ", expected " +
                            std::to_string(dim));
  }
}

void StoreBit(std::vector<std::uint64_t>& words, std::int64_t index, int sign) {
  if (sign == 1) {
    words[static_cast<std::size_t>(index / 64)] |= 1ULL << (index % 64);
  }
}

}  // namespace

GameResult RunGame(const MechanismFactory& factory, Adversary& adversary,
                   const ProblemParams& params, Side side,
                   const GameSeeds& seeds) {
  std::unique_ptr<ContinualMechanism> mechanism =
      factory(params, seeds.mechanism_seed);

  GameResult result;
  GameTranscript& tr = result.transcript;
  AdversaryView& view = result.view;
  tr.side = side;
  tr.setup_rounds = params.dim;
  tr.arrival_rounds = params.horizon;
  tr.mechanism_seed = seeds.mechanism_seed;
  tr.adversary_seed = seeds.adversary_seed;
  view.adversary_seed = seeds.adversary_seed;
  tr.arrivals.reserve(static_cast<std::size_t>(params.horizon));
  tr.outputs.reserve(static_cast<std::size_t>(params.horizon));

  bool challenged = false;
  std::vector<std::uint64_t> delivered_words(WordsForDim(params.dim), 0);
  std::vector<std::uint64_t> sent_words(WordsForDim(params.dim), 0);

  const std::int64_t total_rounds = params.dim + params.horizon;
  for (std::int64_t round = 1; round <= total_rounds; ++round) {
    RoundAction action = adversary.NextRound(round);
    const bool setup_phase = round <= params.dim;

    StreamElement delivered = action.element;
    if (action.kind == RoundKind::kChall) {
      if (challenged) {
        throw ProtocolViolation("second challenge at round " +
                                std::to_string(round));
      }
      if (!action.right.has_value()) {
        throw ProtocolViolation("challenge at round " + std::to_string(round) +
                                " is missing its R candidate");
      }
      challenged = true;
      tr.challenge =
          ChallengePair{round, action.element, *action.right};
      view.challenge = tr.challenge;
      delivered = side == Side::kLeft ? action.element : *action.right;
      tr.delivered_challenge = delivered;
    }

    if (setup_phase) {
      RequireBit(delivered, round);
      if (action.kind == RoundKind::kChall) {
        RequireBit(action.element, round);
        RequireBit(*action.right, round);
        // Placeholder +1 at the challenge position: the adversary's own
        // record of what it sent is the pair, kept in view.challenge.
        StoreBit(sent_words, round - 1, 1);
      } else {
        StoreBit(sent_words, round - 1, action.element.bit());
      }
      mechanism->AbsorbBit(round - 1, delivered.bit());
      StoreBit(delivered_words, round - 1, delivered.bit());
      adversary.Observe(std::nullopt);
      ++view.null_outputs;
    } else {
      RequireVector(delivered, round, params.dim);
      if (action.kind == RoundKind::kChall) {
        RequireVector(action.element, round, params.dim);
        RequireVector(*action.right, round, params.dim);
      } else {
        view.sent_arrivals.push_back(action.element.vector());
      }
      const SignVector& arrival = delivered.vector();
      SignVector output = mechanism->Step(arrival);
      tr.arrivals.push_back(arrival);
      tr.outputs.push_back(output);
      view.outputs.push_back(output);
      adversary.Observe(output);
    }
  }

  if (!challenged) {
    throw ProtocolViolation("game completed without a challenge round");
  }
  tr.delivered_setup = SignVector::FromWords(params.dim, std::move(delivered_words));
  view.sent_setup = SignVector::FromWords(params.dim, std::move(sent_words));
  return result;
}

std::vector<SignVector> RunOblivious(const MechanismFactory& factory,
                                     const ProblemParams& params,
                                     const SignVector& b,
                                     std::span<const SignVector> arrivals,
                                     std::uint64_t mechanism_seed) {
  if (b.dim() != params.dim) {
    throw UsageError("secret has dimension " + std::to_string(b.dim()) +
                     ", expected " + std::to_string(params.dim));
  }
  if (static_cast<std::int64_t>(arrivals.size()) != params.horizon) {
    throw UsageError("oblivious stream must contain exactly horizon = " +
                     std::to_string(params.horizon) + " arrivals, got " +
                     std::to_string(arrivals.size()));
  }
  for (const auto& v : arrivals) {
    if (v.dim() != params.dim) {
      throw UsageError("arrival has dimension " + std::to_string(v.dim()) +
                       ", expected " + std::to_string(params.dim));
    }
  }
  std::unique_ptr<ContinualMechanism> mechanism =
      factory(params, mechanism_seed);
  for (std::int64_t i = 0; i < params.dim; ++i) {
    mechanism->AbsorbBit(i, b.sign_at(i));
  }
  std::vector<SignVector> outputs;
  outputs.reserve(arrivals.size());
  for (const auto& v : arrivals) {
    outputs.push_back(mechanism->Step(v));
  }
  return outputs;
}

}  // namespace contdp
