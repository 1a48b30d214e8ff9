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
// The adaptive privacy game.  An adversary feeds a mechanism one stream
// element per round — a setup bit for rounds 1..d, an arrival vector for
// rounds d+1..d+T — and sees every published output (setup rounds publish
// nothing).  In exactly one round of its choosing the adversary submits a
// *pair* of candidate elements (L, R); the referee delivers the one selected
// by a hidden side chosen before the game, and the adversary's goal is to
// tell from the outputs which side was delivered.  A mechanism is private in
// the adaptive sense only if no adversary can guess the side much better
// than chance; the reconstruction attack in this library wins this game
// against every accurate mechanism.

#ifndef CONTDP_GAME_H_
#define CONTDP_GAME_H_

#include <cstdint>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "contdp/mechanisms.h"
#include "contdp/problem.h"
#include "contdp/signvec.h"

namespace contdp {

enum class Side { kLeft, kRight };

inline const char* SideName(Side s) { return s == Side::kLeft ? "L" : "R"; }

// One stream element: a setup bit (during rounds 1..d) or an arrival vector
// (during rounds d+1..d+T).
class StreamElement {
 public:
  static StreamElement Bit(int sign);
  static StreamElement Vector(SignVector v);

  bool is_bit() const { return std::holds_alternative<int>(value_); }
  int bit() const;                  // UsageError if not a bit
  const SignVector& vector() const; // UsageError if not a vector

 private:
  explicit StreamElement(std::variant<int, SignVector> v)
      : value_(std::move(v)) {}
  std::variant<int, SignVector> value_;
};

enum class RoundKind { kReg, kChall };

// What the adversary submits in one round: either a single element (kReg) or
// a candidate pair (kChall).  The challenge may sit in either phase, setup
// or arrival, but must appear exactly once per game.
struct RoundAction {
  static RoundAction Reg(StreamElement element);
  static RoundAction Chall(StreamElement left, StreamElement right);

  RoundKind kind;
  StreamElement element;                 // kReg payload, or the L candidate
  std::optional<StreamElement> right;    // R candidate, kChall only
};

// Adversary interface driven by RunGame: NextRound is called with the
// 1-based round number, then Observe delivers the mechanism's output for
// that round (nullopt during setup rounds).
class Adversary {
 public:
  virtual ~Adversary() = default;
  virtual RoundAction NextRound(std::int64_t round) = 0;
  virtual void Observe(const std::optional<SignVector>& output) = 0;
};

// The challenge as submitted (no side information).
struct ChallengePair {
  std::int64_t round = 0;  // 1-based, in [1, d+T]
  StreamElement left = StreamElement::Bit(1);
  StreamElement right = StreamElement::Bit(1);
};

// Referee's record of the completed game.  `delivered_setup` is the secret
// the mechanism actually absorbed — for a setup-phase challenge this is the
// adversary's bits with the challenged coordinate replaced by the delivered
// candidate, i.e. the ground truth the loss checks must run against.
struct GameTranscript {
  Side side = Side::kLeft;
  std::int64_t setup_rounds = 0;    // d
  std::int64_t arrival_rounds = 0;  // T
  ChallengePair challenge;
  StreamElement delivered_challenge = StreamElement::Bit(1);
  SignVector delivered_setup;
  std::vector<SignVector> arrivals;  // as delivered (challenge substituted)
  std::vector<SignVector> outputs;   // one per arrival round
  std::uint64_t mechanism_seed = 0;
  std::uint64_t adversary_seed = 0;
};

// Everything the adversary itself saw: its own actions and the outputs.
// Deliberately excludes the hidden side and the delivered candidate.
struct AdversaryView {
  std::uint64_t adversary_seed = 0;
  SignVector sent_setup;  // regular setup bits; +1 placeholder at a
                          // setup-phase challenge position
  ChallengePair challenge;
  std::vector<SignVector> sent_arrivals;  // regular arrival elements, in order
  std::int64_t null_outputs = 0;          // setup rounds observed (= d)
  std::vector<SignVector> outputs;        // arrival-round outputs, in order
};

struct GameSeeds {
  std::uint64_t mechanism_seed = 0;
  std::uint64_t adversary_seed = 0;
};

struct GameResult {
  GameTranscript transcript;
  AdversaryView view;
};

// Plays one full game: d setup rounds then T arrival rounds, with the
// challenge pair resolved to `side`.  ProtocolViolation if the adversary
// sends an element of the wrong phase, challenges twice, or never
// challenges.  The mechanism is built fresh from `factory` with
// seeds.mechanism_seed; seeds.adversary_seed is recorded for provenance
// (the caller seeds the adversary it passes in).
GameResult RunGame(const MechanismFactory& factory, Adversary& adversary,
                   const ProblemParams& params, Side side,
                   const GameSeeds& seeds);

// Oblivious mode: the entire stream (secret b, arrivals v_1..v_T) is fixed
// up front with no challenge.  Returns the T outputs.
std::vector<SignVector> RunOblivious(const MechanismFactory& factory,
                                     const ProblemParams& params,
                                     const SignVector& b,
                                     std::span<const SignVector> arrivals,
                                     std::uint64_t mechanism_seed);

}  // namespace contdp

#endif  // CONTDP_GAME_H_
