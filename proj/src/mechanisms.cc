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

#include "contdp/mechanisms.h"

#include <cmath>
#include <string>

#include "contdp/errors.h"

namespace contdp {

void ContinualMechanism::AbsorbBit(std::int64_t index, int sign) {
  if (index < 0 || index >= params_.dim) {
    throw UsageError("setup index " + std::to_string(index) +
                     " out of range for dimension " +
                     std::to_string(params_.dim));
  }
  if (sign != 1 && sign != -1) {
    throw UsageError("setup bit must be +1 or -1, got " + std::to_string(sign));
  }
  if (steps_ > 0) {
    throw LifecycleError("setup bit delivered after the arrival phase began");
  }
  if (index != absorbed_) {
    throw LifecycleError("setup bits must arrive in order: expected index " +
                         std::to_string(absorbed_) + ", got " +
                         std::to_string(index));
  }
  OnAbsorbBit(index, sign);
  ++absorbed_;
}

SignVector ContinualMechanism::Step(const SignVector& arrival) {
  if (arrival.dim() != params_.dim) {
    throw UsageError("arrival has dimension " + std::to_string(arrival.dim()) +
                     ", expected " + std::to_string(params_.dim));
  }
  if (absorbed_ != params_.dim) {
    throw LifecycleError("arrival step before setup completed: " +
                         std::to_string(absorbed_) + " of " +
                         std::to_string(params_.dim) + " bits absorbed");
  }
  if (steps_ >= params_.horizon) {
    throw LifecycleError("arrival step past the horizon " +
                         std::to_string(params_.horizon));
  }
  SignVector out = OnStep(arrival);
  ++steps_;
  return out;
}

SignVector SampleRrVector(const SignVector& b, double alpha, Rng& rng) {
  if (b.dim() < 1) {
    throw UsageError("randomized response requires a nonzero dimension");
  }
  if (!(alpha >= 0.0) || !(alpha < 1.0)) {
    throw UsageError("randomized response requires alpha in [0, 1)");
  }
  // Each coordinate flips with probability (1 - alpha) / 2.  One engine draw
  // per coordinate; the top 53 bits are compared against the probability
  // scaled to 2^53, so the flip decision is exact at double precision.
  const auto threshold = static_cast<std::uint64_t>(
      std::llround(((1.0 - alpha) / 2.0) * 9007199254740992.0));
  const auto secret_words = b.words();
  const std::int64_t dim = b.dim();
  std::vector<std::uint64_t> words(secret_words.size());
  for (std::size_t k = 0; k < words.size(); ++k) {
    const int bits = k + 1 < words.size()
                         ? 64
                         : static_cast<int>(dim - 64 * static_cast<std::int64_t>(k));
    std::uint64_t flips = 0;
    for (int j = 0; j < bits; ++j) {
      if ((rng() >> 11) < threshold) flips |= 1ULL << j;
    }
    words[k] = secret_words[k] ^ flips;
  }
  return SignVector::FromWords(dim, std::move(words));
}

namespace {

// Shared by the RR mechanisms: collect setup bits into packed words.
void StoreBit(std::vector<std::uint64_t>& words, std::int64_t index, int sign) {
  if (sign == 1) {
    words[static_cast<std::size_t>(index / 64)] |= 1ULL << (index % 64);
  }
}

}  // namespace

ObliviousRrMechanism::ObliviousRrMechanism(const ProblemParams& params,
                                           std::uint64_t seed)
    : ContinualMechanism(params),
      rng_(MakeRng(seed)),
      secret_words_(WordsForDim(params.dim), 0) {}

void ObliviousRrMechanism::OnAbsorbBit(std::int64_t index, int sign) {
  StoreBit(secret_words_, index, sign);
}

SignVector ObliviousRrMechanism::OnStep(const SignVector& /*arrival*/) {
  if (release_.empty()) {
    const SignVector secret =
        SignVector::FromWords(params().dim, std::move(secret_words_));
    release_ = SampleRrVector(secret, params().alpha, rng_);
  }
  return release_;  // same shared release at every step
}

FreshRrMechanism::FreshRrMechanism(const ProblemParams& params,
                                   std::uint64_t seed)
    : ContinualMechanism(params),
      rng_(MakeRng(seed)),
      secret_words_(WordsForDim(params.dim), 0) {}

void FreshRrMechanism::OnAbsorbBit(std::int64_t index, int sign) {
  StoreBit(secret_words_, index, sign);
}

SignVector FreshRrMechanism::OnStep(const SignVector& /*arrival*/) {
  if (secret_.empty()) {
    secret_ = SignVector::FromWords(params().dim, std::move(secret_words_));
  }
  // An independent release per step; never reads the arrival, so the output
  // stream depends only on the secret and the seed.
  return SampleRrVector(secret_, params().alpha, rng_);
}

FixedOutputMechanism::FixedOutputMechanism(const ProblemParams& params,
                                           std::uint64_t seed)
    : ContinualMechanism(params) {
  Rng rng = MakeRng(seed);
  fixed_ = RandomSignVector(params.dim, rng);
}

void FixedOutputMechanism::OnAbsorbBit(std::int64_t /*index*/, int /*sign*/) {
  // Ignores the secret by design.
}

SignVector FixedOutputMechanism::OnStep(const SignVector& /*arrival*/) {
  return fixed_;
}

MechanismFactory BuiltinMechanismFactory(std::string_view name) {
  if (name == "oblivious-rr") {
    return [](const ProblemParams& params, std::uint64_t seed) {
      return std::unique_ptr<ContinualMechanism>(
          new ObliviousRrMechanism(params, seed));
    };
  }
  if (name == "fresh-rr") {
    return [](const ProblemParams& params, std::uint64_t seed) {
      return std::unique_ptr<ContinualMechanism>(
          new FreshRrMechanism(params, seed));
    };
  }
  if (name == "fixed-output") {
    return [](const ProblemParams& params, std::uint64_t seed) {
      return std::unique_ptr<ContinualMechanism>(
          new FixedOutputMechanism(params, seed));
    };
  }
  throw UsageError("unknown mechanism '" + std::string(name) +
                   "'; built-ins are oblivious-rr, fresh-rr, fixed-output");
}

const std::vector<std::string>& BuiltinMechanismNames() {
  static const std::vector<std::string> kNames = {"oblivious-rr", "fresh-rr",
                                                  "fixed-output"};
  return kNames;
}

}  // namespace contdp
