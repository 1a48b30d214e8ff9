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

#include "contdp/problem.h"

#include <cmath>
#include <string>

#include "contdp/errors.h"

namespace contdp {
namespace {

void CheckVectorDim(const ProblemParams& params, const SignVector& v,
                    const char* what) {
  if (v.dim() != params.dim) {
    throw UsageError(std::string(what) + " has dimension " +
                     std::to_string(v.dim()) + ", expected " +
                     std::to_string(params.dim));
  }
}

// |<y - alpha b, v>| evaluated as |<y,v> - alpha <b,v>| in double arithmetic.
double Violation(double alpha, std::int64_t inner_yv, std::int64_t inner_bv) {
  return std::abs(static_cast<double>(inner_yv) -
                  alpha * static_cast<double>(inner_bv));
}

LossVerdict LossFromTable(const ProblemParams& params, const SignVector& b,
                          std::span<const SignVector> prefix,
                          const SignVector& y, InnerTable& table) {
  LossVerdict verdict;
  // Bias check: <b, b> = d exactly.
  verdict.b_violation =
      Violation(params.alpha, table.Get(y, b), b.dim());
  verdict.worst_prefix_violation = 0.0;
  for (std::size_t j = 0; j < prefix.size(); ++j) {
    const double viol =
        Violation(params.alpha, table.Get(y, prefix[j]), table.Get(b, prefix[j]));
    if (!verdict.worst_prefix_index.has_value() ||
        viol > verdict.worst_prefix_violation) {
      verdict.worst_prefix_violation = viol;
      verdict.worst_prefix_index = static_cast<std::int64_t>(j) + 1;
    }
  }
  verdict.passed = verdict.b_violation <= params.slack &&
                   verdict.worst_prefix_violation <= params.slack;
  return verdict;
}

}  // namespace

ProblemParams::ProblemParams(double alpha_in, std::int64_t dim_in,
                             std::int64_t horizon_in)
    : alpha(alpha_in), dim(dim_in), horizon(horizon_in) {
  if (!(alpha > 0.0) || !(alpha < 1.0)) {
    throw UsageError("alpha must lie strictly in (0, 1)");
  }
  if (dim < 1) {
    throw UsageError("dimension must be at least 1");
  }
  if (horizon < 1) {
    throw UsageError("horizon must be at least 1");
  }
  slack = alpha * alpha * static_cast<double>(dim) / 100.0;
  alpha_regime_flag = alpha >= 0.5;
}

LossVerdict LossSatisfied(const ProblemParams& params, const SignVector& b,
                          std::span<const SignVector> prefix,
                          const SignVector& y) {
  InnerTable table;
  return LossSatisfiedWithTable(params, b, prefix, y, table);
}

LossVerdict LossSatisfiedWithTable(const ProblemParams& params,
                                   const SignVector& b,
                                   std::span<const SignVector> prefix,
                                   const SignVector& y, InnerTable& table) {
  CheckVectorDim(params, b, "secret");
  CheckVectorDim(params, y, "estimate");
  if (static_cast<std::int64_t>(prefix.size()) > params.horizon) {
    throw UsageError("prefix length " + std::to_string(prefix.size()) +
                     " exceeds horizon " + std::to_string(params.horizon));
  }
  for (const auto& v : prefix) CheckVectorDim(params, v, "arrival");
  return LossFromTable(params, b, prefix, y, table);
}

TranscriptVerdict TranscriptAccurate(const ProblemParams& params,
                                     const SignVector& b,
                                     std::span<const SignVector> arrivals,
                                     std::span<const SignVector> outputs) {
  InnerTable table;
  return TranscriptAccurateWithTable(params, b, arrivals, outputs, table);
}

TranscriptVerdict TranscriptAccurateWithTable(
    const ProblemParams& params, const SignVector& b,
    std::span<const SignVector> arrivals, std::span<const SignVector> outputs,
    InnerTable& table) {
  CheckVectorDim(params, b, "secret");
  if (static_cast<std::int64_t>(arrivals.size()) != params.horizon ||
      static_cast<std::int64_t>(outputs.size()) != params.horizon) {
    throw UsageError("transcript must contain exactly horizon = " +
                     std::to_string(params.horizon) +
                     " arrivals and outputs, got " +
                     std::to_string(arrivals.size()) + " and " +
                     std::to_string(outputs.size()));
  }
  for (const auto& v : arrivals) CheckVectorDim(params, v, "arrival");
  for (const auto& y : outputs) CheckVectorDim(params, y, "estimate");

  // Queue every distinct pair the step losses will ask for, then evaluate
  // them in one blocked sweep.
  for (std::size_t t = 0; t < outputs.size(); ++t) {
    table.Request(outputs[t], b);
    for (std::size_t j = 0; j <= t; ++j) {
      table.Request(outputs[t], arrivals[j]);
      table.Request(b, arrivals[j]);
    }
  }
  table.ComputeAll();

  TranscriptVerdict verdict;
  verdict.accurate = true;
  verdict.steps.reserve(outputs.size());
  for (std::size_t t = 0; t < outputs.size(); ++t) {
    verdict.steps.push_back(
        LossFromTable(params, b, arrivals.subspan(0, t + 1), outputs[t], table));
    if (!verdict.steps.back().passed && verdict.accurate) {
      verdict.accurate = false;
      verdict.first_failure_t = static_cast<std::int64_t>(t) + 1;
    }
  }
  return verdict;
}

}  // namespace contdp
