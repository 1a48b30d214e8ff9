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
// The sign-majority reconstruction guarantee.  Given k vectors y_1..y_k in
// {-1,+1}^d that each correlate with an unknown x (inner(y_j, x) >= p*d) and
// are pairwise nearly orthogonal (|inner(y_j, y_j')| <= q*d for j != j'),
// the coordinatewise sign majority x~ of the y_j recovers x up to
//
//     inner(x~, x) >= (1 - 2/(p^2 k) - 2 (q - p^2) / p^2) * d.
//
// For randomized-response releases at rate alpha, p approaches alpha and q
// approaches alpha^2, the bracket approaches 1 - 2/(alpha^2 k) - small, and
// a horizon k of order 1/alpha^2 already forces near-perfect recovery —
// this is the engine behind the adaptive attack.  This module makes the
// bound executable and provides a planted-instance harness that probes it
// empirically.

#ifndef CONTDP_RECONSTRUCTION_H_
#define CONTDP_RECONSTRUCTION_H_

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "contdp/rng.h"
#include "contdp/signvec.h"

namespace contdp {

// Parameters of the guarantee: correlation floor p, pairwise ceiling q, and
// list length k.  p and q must lie in [0, 1] and k must be >= 1; the bound
// itself additionally needs p > 0 to be defined.
struct ReconstructionParams {
  ReconstructionParams(double p, double q, std::int64_t k);

  double p;
  double q;
  std::int64_t k;
};

// The guarantee factor 1 - 2/(p^2 k) - 2 (q - p^2)/p^2, which may be
// negative (a vacuous guarantee) for weak parameters.  UsageError when
// p = 0; multiply by d for the inner-product floor.
double LemmaBound(const ReconstructionParams& params);

// Which precondition failed, with the offending indices (1-based; j2 = 0
// for the correlation condition) and measured value.
struct PreconditionWitness {
  enum class Kind { kCorrelation, kPairwise };
  Kind kind = Kind::kCorrelation;
  std::int64_t j = 0;
  std::int64_t j2 = 0;
  std::int64_t inner = 0;
  double threshold = 0.0;
};

struct PreconditionResult {
  bool satisfied = false;
  std::optional<PreconditionWitness> witness;  // first failure, if any
};

// Checks inner(y_j, x) >= p*d for all j and |inner(y_j, y_j')| <= q*d for
// all j < j'.  ys.size() must equal params.k and all dimensions must match.
PreconditionResult CheckPreconditions(const SignVector& x,
                                      std::span<const SignVector> ys,
                                      const ReconstructionParams& params);

// Same, sharing inner products through `table` (requests them if absent).
PreconditionResult CheckPreconditionsWithTable(
    const SignVector& x, std::span<const SignVector> ys,
    const ReconstructionParams& params, InnerTable& table);

// Full check of the guarantee on one instance: preconditions, majority,
// and the claimed floor on inner(majority, x).
struct LemmaVerdict {
  bool applicable = false;  // preconditions satisfied
  std::optional<PreconditionWitness> witness;
  std::int64_t majority_inner = 0;  // inner(x~, x); 0 when not applicable
  double bound_factor = 0.0;        // guarantee factor
  double bound_value = 0.0;         // bound_factor * d
  bool holds = false;               // applicable && majority_inner >= bound_value
};

LemmaVerdict VerifyLemma(const SignVector& x, std::span<const SignVector> ys,
                         const ReconstructionParams& params);

// One random planted instance: a hidden x, k noisy correlates, and the
// *measured* p and q (so preconditions hold by construction).  Instances
// whose measured correlation floor is not positive carry no guarantee and
// are reported as discarded by the harness.
struct LemmaInstance {
  SignVector x;
  std::vector<SignVector> ys;
  ReconstructionParams params;
  double noise_alpha = 0.0;  // correlation rate used to sample the ys
};

// Draws dimensions, list lengths, and noise rates from `rng`, bounded by
// max_dim / max_k.  Returns nullopt when the sampled instance's measured
// floor p is not positive.
std::optional<LemmaInstance> GeneratePlantedInstance(std::int64_t max_dim,
                                                     std::int64_t max_k,
                                                     Rng& rng);

// Margin histogram over [0, 2] in steps of 0.25 plus the verdict counts for
// a batch of planted instances.  `requested` instances are *kept* (generation
// retries past discarded draws); `violations` counts kept instances where
// the guarantee failed — always 0 unless the implementation is wrong.
struct LemmaCheckSummary {
  std::int64_t requested = 0;
  std::int64_t generated = 0;
  std::int64_t discarded = 0;
  std::int64_t applicable = 0;
  std::int64_t violations = 0;
  std::vector<std::int64_t> margin_histogram;  // 8 buckets, width 0.25
};

inline constexpr int kLemmaMarginBuckets = 8;
inline constexpr double kLemmaMarginBucketWidth = 0.25;

LemmaCheckSummary RunLemmaCheck(std::int64_t instances, std::int64_t max_dim,
                                std::int64_t max_k, std::uint64_t seed);

}  // namespace contdp

#endif  // CONTDP_RECONSTRUCTION_H_
