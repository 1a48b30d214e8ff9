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
// Continual-release mechanisms.  A mechanism ingests the d secret bits one
// at a time (setup phase, no output), then answers T arrival steps, emitting
// a fresh estimate in {-1,+1}^d after each.  The two randomized-response
// variants share one primitive: every published coordinate equals the secret
// bit with probability (1+alpha)/2 and is flipped otherwise, which is an
// (ln((1+alpha)/(1-alpha)), 0)-differentially-private release of the secret.
//
//   * oblivious-rr samples that release once and republishes it at every
//     step; its whole output sequence is a single randomized response of b.
//   * fresh-rr draws an independent release per step.  Each step alone is
//     private, but correlations across steps are exactly what the adaptive
//     reconstruction attack exploits.
//   * fixed-output ignores the secret entirely (a calibration control: no
//     adversary can do better than guessing against it).

#ifndef CONTDP_MECHANISMS_H_
#define CONTDP_MECHANISMS_H_

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "contdp/problem.h"
#include "contdp/rng.h"
#include "contdp/signvec.h"

namespace contdp {

// Base class enforcing the two-phase lifecycle shared by all mechanisms:
// exactly d AbsorbBit calls in coordinate order, then at most T Step calls.
// Subclasses implement OnAbsorbBit / OnStep and never see ill-formed input.
class ContinualMechanism {
 public:
  virtual ~ContinualMechanism() = default;

  ContinualMechanism(const ContinualMechanism&) = delete;
  ContinualMechanism& operator=(const ContinualMechanism&) = delete;

  // Delivers secret coordinate `index` (0-based).  Indices must arrive in
  // order 0..d-1; UsageError for an out-of-range index, LifecycleError for
  // out-of-order delivery or delivery after the arrival phase began.
  void AbsorbBit(std::int64_t index, int sign);

  // Answers one arrival step.  LifecycleError before setup completes or
  // past the horizon; the returned estimate always has dimension d.
  SignVector Step(const SignVector& arrival);

  const ProblemParams& params() const { return params_; }
  std::int64_t bits_absorbed() const { return absorbed_; }
  std::int64_t steps_taken() const { return steps_; }

 protected:
  explicit ContinualMechanism(const ProblemParams& params) : params_(params) {}

  virtual void OnAbsorbBit(std::int64_t index, int sign) = 0;
  virtual SignVector OnStep(const SignVector& arrival) = 0;

 private:
  ProblemParams params_;
  std::int64_t absorbed_ = 0;
  std::int64_t steps_ = 0;
};

// One randomized-response release of b: each coordinate of the result keeps
// b's sign with probability (1+alpha)/2, independently.  Consumes exactly
// b.dim() engine draws.  Valid for alpha in [0, 1): alpha = 0 yields a
// uniform vector, larger alpha a more faithful copy.
SignVector SampleRrVector(const SignVector& b, double alpha, Rng& rng);

class ObliviousRrMechanism final : public ContinualMechanism {
 public:
  ObliviousRrMechanism(const ProblemParams& params, std::uint64_t seed);

 private:
  void OnAbsorbBit(std::int64_t index, int sign) override;
  SignVector OnStep(const SignVector& arrival) override;

  Rng rng_;
  std::vector<std::uint64_t> secret_words_;
  SignVector release_;  // sampled lazily at the first step, then shared
};

class FreshRrMechanism final : public ContinualMechanism {
 public:
  FreshRrMechanism(const ProblemParams& params, std::uint64_t seed);

 private:
  void OnAbsorbBit(std::int64_t index, int sign) override;
  SignVector OnStep(const SignVector& arrival) override;

  Rng rng_;
  std::vector<std::uint64_t> secret_words_;
  SignVector secret_;  // frozen at the first step
};

class FixedOutputMechanism final : public ContinualMechanism {
 public:
  FixedOutputMechanism(const ProblemParams& params, std::uint64_t seed);

 private:
  void OnAbsorbBit(std::int64_t index, int sign) override;
  SignVector OnStep(const SignVector& arrival) override;

  SignVector fixed_;  // drawn from the seed at construction; never mixes in b
};

// Constructs a mechanism for one game or trial.  `seed` pins down all of the
// mechanism's internal randomness.
using MechanismFactory = std::function<std::unique_ptr<ContinualMechanism>(
    const ProblemParams& params, std::uint64_t seed)>;

// Factory for a built-in mechanism: "oblivious-rr", "fresh-rr", or
// "fixed-output".  UsageError on any other name.
MechanismFactory BuiltinMechanismFactory(std::string_view name);

const std::vector<std::string>& BuiltinMechanismNames();

}  // namespace contdp

#endif  // CONTDP_MECHANISMS_H_
