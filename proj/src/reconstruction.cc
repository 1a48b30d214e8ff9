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

#include "contdp/reconstruction.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "contdp/errors.h"
#include "contdp/mechanisms.h"

namespace contdp {

ReconstructionParams::ReconstructionParams(double p_in, double q_in,
                                           std::int64_t k_in)
    : p(p_in), q(q_in), k(k_in) {
  if (!(p >= 0.0) || !(p <= 1.0)) {
    throw UsageError("reconstruction parameter p must lie in [0, 1]");
  }
  if (!(q >= 0.0) || !(q <= 1.0)) {
    throw UsageError("reconstruction parameter q must lie in [0, 1]");
  }
  if (k < 1) {
    throw UsageError("reconstruction parameter k must be at least 1");
  }
}

double LemmaBound(const ReconstructionParams& params) {
  if (params.p == 0.0) {
    throw UsageError("the reconstruction bound is undefined at p = 0");
  }
  const double p2 = params.p * params.p;
  return 1.0 - 2.0 / (p2 * static_cast<double>(params.k)) -
         2.0 * (params.q - p2) / p2;
}

namespace {

void CheckInstanceShape(const SignVector& x, std::span<const SignVector> ys,
                        const ReconstructionParams& params) {
  if (x.dim() < 1) {
    throw UsageError("reconstruction target must be non-empty");
  }
  if (static_cast<std::int64_t>(ys.size()) != params.k) {
    throw UsageError("expected k = " + std::to_string(params.k) +
                     " vectors, got " + std::to_string(ys.size()));
  }
  for (const auto& y : ys) {
    if (y.dim() != x.dim()) {
      throw UsageError("list vector has dimension " + std::to_string(y.dim()) +
                       ", expected " + std::to_string(x.dim()));
    }
  }
}

}  // namespace

PreconditionResult CheckPreconditions(const SignVector& x,
                                      std::span<const SignVector> ys,
                                      const ReconstructionParams& params) {
  InnerTable table;
  return CheckPreconditionsWithTable(x, ys, params, table);
}

PreconditionResult CheckPreconditionsWithTable(
    const SignVector& x, std::span<const SignVector> ys,
    const ReconstructionParams& params, InnerTable& table) {
  CheckInstanceShape(x, ys, params);
  for (const auto& y : ys) table.Request(y, x);
  for (std::size_t j = 0; j < ys.size(); ++j) {
    for (std::size_t j2 = j + 1; j2 < ys.size(); ++j2) {
      table.Request(ys[j], ys[j2]);
    }
  }
  table.ComputeAll();

  const double d = static_cast<double>(x.dim());
  PreconditionResult result;
  for (std::size_t j = 0; j < ys.size(); ++j) {
    const std::int64_t inner = table.Get(ys[j], x);
    if (static_cast<double>(inner) < params.p * d) {
      result.satisfied = false;
      result.witness = PreconditionWitness{
          PreconditionWitness::Kind::kCorrelation,
          static_cast<std::int64_t>(j) + 1, 0, inner, params.p * d};
      return result;
    }
  }
  for (std::size_t j = 0; j < ys.size(); ++j) {
    for (std::size_t j2 = j + 1; j2 < ys.size(); ++j2) {
      const std::int64_t inner = table.Get(ys[j], ys[j2]);
      if (std::abs(static_cast<double>(inner)) > params.q * d) {
        result.satisfied = false;
        result.witness = PreconditionWitness{
            PreconditionWitness::Kind::kPairwise,
            static_cast<std::int64_t>(j) + 1,
            static_cast<std::int64_t>(j2) + 1, inner, params.q * d};
        return result;
      }
    }
  }
  result.satisfied = true;
  return result;
}

LemmaVerdict VerifyLemma(const SignVector& x, std::span<const SignVector> ys,
                         const ReconstructionParams& params) {
  const PreconditionResult pre = CheckPreconditions(x, ys, params);
  LemmaVerdict verdict;
  verdict.applicable = pre.satisfied;
  verdict.witness = pre.witness;
  verdict.bound_factor = LemmaBound(params);
  verdict.bound_value = verdict.bound_factor * static_cast<double>(x.dim());
  if (!pre.satisfied) {
    return verdict;  // guarantee makes no claim; holds stays false
  }
  verdict.majority_inner = Inner(SignMajority(ys), x);
  verdict.holds =
      static_cast<double>(verdict.majority_inner) >= verdict.bound_value;
  return verdict;
}

std::optional<LemmaInstance> GeneratePlantedInstance(std::int64_t max_dim,
                                                     std::int64_t max_k,
                                                     Rng& rng) {
  if (max_dim < 50) {
    throw UsageError("planted instances need max dimension >= 50");
  }
  if (max_k < 1) {
    throw UsageError("planted instances need max k >= 1");
  }
  // Draw a random corner of parameter space: modest dimensions keep the
  // harness fast while still exercising ragged word boundaries.
  const std::int64_t dim =
      std::uniform_int_distribution<std::int64_t>(50, max_dim)(rng);
  const std::int64_t k =
      std::uniform_int_distribution<std::int64_t>(1, max_k)(rng);
  const double alpha =
      std::uniform_real_distribution<double>(0.2, 0.9)(rng);

  LemmaInstance instance{SignVector(), {}, ReconstructionParams(0.5, 0.5, k),
                         alpha};
  instance.x = RandomSignVector(dim, rng);
  instance.ys.reserve(static_cast<std::size_t>(k));
  for (std::int64_t j = 0; j < k; ++j) {
    instance.ys.push_back(SampleRrVector(instance.x, alpha, rng));
  }

  // Measure the actual correlation floor and pairwise ceiling, then place
  // the thresholds half an integer below / above the measured extremes so
  // the precondition comparisons never sit on a floating-point tie.
  std::int64_t min_corr = dim;
  for (const auto& y : instance.ys) {
    min_corr = std::min(min_corr, Inner(y, instance.x));
  }
  if (min_corr < 1) {
    return std::nullopt;  // no positive correlation floor: no guarantee
  }
  std::int64_t max_pair = 0;
  for (std::size_t j = 0; j < instance.ys.size(); ++j) {
    for (std::size_t j2 = j + 1; j2 < instance.ys.size(); ++j2) {
      max_pair = std::max(
          max_pair, std::abs(Inner(instance.ys[j], instance.ys[j2])));
    }
  }
  const double d = static_cast<double>(dim);
  const double p = (static_cast<double>(min_corr) - 0.5) / d;
  const double q =
      std::min(1.0, (static_cast<double>(max_pair) + 0.5) / d);
  instance.params = ReconstructionParams(p, q, k);
  return instance;
}

LemmaCheckSummary RunLemmaCheck(std::int64_t instances, std::int64_t max_dim,
                                std::int64_t max_k, std::uint64_t seed) {
  if (instances < 1) {
    throw UsageError("lemma check needs at least one instance");
  }
  LemmaCheckSummary summary;
  summary.requested = instances;
  summary.margin_histogram.assign(kLemmaMarginBuckets, 0);
  Rng rng = MakeRng(DeriveSeed(seed, seed_stream::kLemma));
  const std::int64_t max_attempts = instances * 1000;
  std::int64_t attempts = 0;
  while (summary.generated < instances) {
    if (++attempts > max_attempts) {
      throw UsageError("planted-instance generation discarded too many draws;"
                       " widen the parameter ranges");
    }
    const auto instance = GeneratePlantedInstance(max_dim, max_k, rng);
    if (!instance.has_value()) {
      ++summary.discarded;
      continue;
    }
    ++summary.generated;
    const LemmaVerdict verdict =
        VerifyLemma(instance->x, instance->ys, instance->params);
    if (verdict.applicable) ++summary.applicable;
    if (verdict.applicable && !verdict.holds) ++summary.violations;
    if (verdict.applicable && verdict.holds) {
      // Margin in units of d; weak (vacuous) parameter draws can exceed 2,
      // and land in the top bucket.
      const double margin =
          static_cast<double>(verdict.majority_inner) /
              static_cast<double>(instance->x.dim()) -
          verdict.bound_factor;
      const int bucket = std::clamp(
          static_cast<int>(margin / kLemmaMarginBucketWidth), 0,
          kLemmaMarginBuckets - 1);
      ++summary.margin_histogram[static_cast<std::size_t>(bucket)];
    }
  }
  return summary;
}

}  // namespace contdp
