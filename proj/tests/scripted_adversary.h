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
// Test-only adversary that plays back a fixed script of round actions and
// records everything it observes, so referee behavior can be checked against
// hand-written games.

#ifndef CONTDP_TESTS_SCRIPTED_ADVERSARY_H_
#define CONTDP_TESTS_SCRIPTED_ADVERSARY_H_

#include <optional>
#include <utility>
#include <vector>

#include "contdp/errors.h"
#include "contdp/game.h"
#include "contdp/signvec.h"

namespace contdp {

class ScriptedAdversary final : public Adversary {
 public:
  explicit ScriptedAdversary(std::vector<RoundAction> script)
      : script_(std::move(script)) {}

  RoundAction NextRound(std::int64_t round) override {
    rounds_seen.push_back(round);
    if (next_ >= script_.size()) {
      throw LifecycleError("scripted adversary ran out of actions");
    }
    return script_[next_++];
  }

  void Observe(const std::optional<SignVector>& output) override {
    observations.push_back(output);
  }

  std::vector<std::int64_t> rounds_seen;
  std::vector<std::optional<SignVector>> observations;

 private:
  std::vector<RoundAction> script_;
  std::size_t next_ = 0;
};

}  // namespace contdp

#endif  // CONTDP_TESTS_SCRIPTED_ADVERSARY_H_
