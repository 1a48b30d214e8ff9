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
// Python bindings for the laboratory's main operations: packed sign vectors
// and their kernels, the loss checks, the mechanisms, the reconstruction
// guarantee, and the audit entry points.  Aggregate results cross the
// boundary as plain dicts so Python callers can serialize them directly.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "contdp/adversary.h"
#include "contdp/audit.h"
#include "contdp/errors.h"
#include "contdp/game.h"
#include "contdp/mechanisms.h"
#include "contdp/problem.h"
#include "contdp/reconstruction.h"
#include "contdp/rng.h"
#include "contdp/signvec.h"
#include "contdp/wire.h"

namespace py = pybind11;

namespace contdp {
namespace {

MechanismFactory ResolveFactory(const std::string& mechanism,
                                const std::string& mechanism_cmd) {
  if (!mechanism_cmd.empty()) {
    return SubprocessMechanismFactory(mechanism_cmd);
  }
  return BuiltinMechanismFactory(mechanism);
}

py::dict ToDict(const LossVerdict& v) {
  py::dict d;
  d["passed"] = v.passed;
  d["b_violation"] = v.b_violation;
  d["worst_prefix_violation"] = v.worst_prefix_violation;
  d["worst_prefix_index"] = v.worst_prefix_index;
  return d;
}

py::dict ToDict(const TranscriptVerdict& v) {
  py::dict d;
  d["accurate"] = v.accurate;
  d["first_failure_t"] = v.first_failure_t;
  py::list steps;
  for (const auto& step : v.steps) steps.append(ToDict(step));
  d["steps"] = std::move(steps);
  return d;
}

py::dict ToDict(const TrialRecord& r) {
  py::dict d;
  d["trial"] = r.trial;
  d["side"] = std::string(SideName(r.side));
  d["guess"] = std::string(SideName(r.guess));
  d["success"] = r.success;
  d["accurate"] = r.accurate;
  d["first_failure_t"] = r.first_failure_t;
  d["worst_violation"] = r.worst_violation;
  d["preconditions_ok"] = r.preconditions_ok;
  d["reconstruction_correlation"] = r.reconstruction_correlation;
  return d;
}

py::dict ToDict(const AuditReport& r) {
  py::dict d;
  d["trials"] = r.trials;
  d["successes"] = r.successes;
  d["p_hat"] = r.p_hat;
  d["confidence"] = r.confidence;
  d["ci_low"] = r.ci_low;
  d["ci_high"] = r.ci_high;
  d["tv_lower"] = r.tv_lower;
  d["budget_epsilon"] = r.budget.epsilon;
  d["budget_delta"] = r.budget.delta;
  d["budget_tv"] = r.budget_tv;
  d["verdict"] = std::string(VerdictName(r.verdict));
  d["accuracy_rate"] = r.accuracy_rate;
  d["precondition_rate"] = r.precondition_rate;
  d["precondition_trials"] = r.precondition_trials;
  d["mean_reconstruction_correlation"] = r.mean_reconstruction_correlation;
  d["reconstruction_floor_count"] = r.reconstruction_floor_count;
  return d;
}

py::dict ToDict(const LemmaVerdict& v) {
  py::dict d;
  d["applicable"] = v.applicable;
  d["majority_inner"] = v.majority_inner;
  d["bound_factor"] = v.bound_factor;
  d["bound_value"] = v.bound_value;
  d["holds"] = v.holds;
  return d;
}

py::dict ToDict(const LemmaCheckSummary& s) {
  py::dict d;
  d["requested"] = s.requested;
  d["generated"] = s.generated;
  d["discarded"] = s.discarded;
  d["applicable"] = s.applicable;
  d["violations"] = s.violations;
  d["margin_histogram"] = s.margin_histogram;
  return d;
}

py::dict ToDict(const ObliviousTrialRecord& r) {
  py::dict d;
  d["trial"] = r.trial;
  d["accurate"] = r.accurate;
  d["first_failure_t"] = r.first_failure_t;
  d["worst_violation"] = r.worst_violation;
  py::list steps;
  for (const auto& step : r.steps) steps.append(ToDict(step));
  d["steps"] = std::move(steps);
  return d;
}

}  // namespace
}  // namespace contdp

PYBIND11_MODULE(_core, m) {
  using namespace contdp;  // NOLINT(build/namespaces)

  m.doc() =
      "Core bindings: packed sign vectors, loss checks, continual-release "
      "mechanisms, the reconstruction guarantee, and privacy audits.";
  m.attr("__version__") = "0.1.0";
  m.attr("RECONSTRUCTION_FLOOR") = kReconstructionCorrelationFloor;

  py::register_exception<UsageError>(m, "UsageError", PyExc_ValueError);
  py::register_exception<LifecycleError>(m, "LifecycleError",
                                         PyExc_RuntimeError);
  py::register_exception<ProtocolViolation>(m, "ProtocolViolation",
                                            PyExc_RuntimeError);
  py::register_exception<IoError>(m, "IoError", PyExc_OSError);

  // -------------------------------------------------------------- vectors
  py::class_<SignVector>(m, "SignVector",
                         "Immutable vector in {-1,+1}^d, bit-packed; copies "
                         "share storage.")
      .def(py::init([](const std::vector<int>& signs) {
             return SignVector::FromSigns(signs);
           }),
           py::arg("signs"))
      .def_static("all_plus", &SignVector::AllPlus, py::arg("dim"))
      .def_static("all_minus", &SignVector::AllMinus, py::arg("dim"))
      .def_static("from_hex", &SignVector::FromHex, py::arg("dim"),
                  py::arg("hex"))
      .def_property_readonly("dim", &SignVector::dim)
      .def("__len__", &SignVector::dim)
      .def("sign_at", &SignVector::sign_at, py::arg("i"))
      .def("with_sign_at", &SignVector::WithSignAt, py::arg("i"),
           py::arg("sign"))
      .def("negated", &SignVector::Negated)
      .def("to_hex", &SignVector::ToHex)
      .def("digest", &SignVector::Digest)
      .def("signs",
           [](const SignVector& v) {
             std::vector<int> out(static_cast<std::size_t>(v.dim()));
             for (std::int64_t i = 0; i < v.dim(); ++i) {
               out[static_cast<std::size_t>(i)] = v.sign_at(i);
             }
             return out;
           })
      .def("__eq__",
           [](const SignVector& a, const SignVector& b) { return a == b; })
      .def("__ne__",
           [](const SignVector& a, const SignVector& b) { return a != b; })
      .def("__repr__", [](const SignVector& v) {
        return "SignVector(dim=" + std::to_string(v.dim()) + ")";
      });

  m.def("inner", &Inner, py::arg("u"), py::arg("v"),
        "Inner product <u, v> = d - 2 * hamming(u, v).");
  m.def(
      "sign_majority",
      [](const std::vector<SignVector>& vectors) {
        return SignMajority(vectors);
      },
      py::arg("vectors"),
      "Coordinatewise sign majority; ties resolve to +1.");
  m.def(
      "random_sign_vector",
      [](std::int64_t dim, std::uint64_t seed) {
        Rng rng = MakeRng(seed);
        return RandomSignVector(dim, rng);
      },
      py::arg("dim"), py::arg("seed"), "Uniform vector from a fresh engine.");
  m.def(
      "sample_rr",
      [](const SignVector& b, double alpha, std::uint64_t seed) {
        Rng rng = MakeRng(seed);
        return SampleRrVector(b, alpha, rng);
      },
      py::arg("b"), py::arg("alpha"), py::arg("seed"),
      "One randomized-response release of b at rate alpha.");
  m.def("derive_seed", &DeriveSeed, py::arg("master"), py::arg("stream"),
        py::arg("index"), "The library's per-trial seed derivation.");

  // -------------------------------------------------------------- problem
  py::class_<ProblemParams>(m, "ProblemParams",
                            "Instance parameters (alpha, d, T) plus derived "
                            "slack.")
      .def(py::init<double, std::int64_t, std::int64_t>(), py::arg("alpha"),
           py::arg("d"), py::arg("T"))
      .def_readonly("alpha", &ProblemParams::alpha)
      .def_readonly("d", &ProblemParams::dim)
      .def_readonly("T", &ProblemParams::horizon)
      .def_readonly("slack", &ProblemParams::slack)
      .def_readonly("alpha_regime_flag", &ProblemParams::alpha_regime_flag)
      .def("__repr__", [](const ProblemParams& p) {
        return "ProblemParams(alpha=" + std::to_string(p.alpha) +
               ", d=" + std::to_string(p.dim) +
               ", T=" + std::to_string(p.horizon) + ")";
      });

  m.def(
      "loss_satisfied",
      [](const ProblemParams& params, const SignVector& b,
         const std::vector<SignVector>& prefix, const SignVector& y) {
        return ToDict(LossSatisfied(params, b, prefix, y));
      },
      py::arg("params"), py::arg("b"), py::arg("prefix"), py::arg("y"),
      "Evaluates the step loss for estimate y.");
  m.def(
      "transcript_accurate",
      [](const ProblemParams& params, const SignVector& b,
         const std::vector<SignVector>& arrivals,
         const std::vector<SignVector>& outputs) {
        return ToDict(TranscriptAccurate(params, b, arrivals, outputs));
      },
      py::arg("params"), py::arg("b"), py::arg("arrivals"),
      py::arg("outputs"), "Judges a full transcript against the loss checks.");

  // ----------------------------------------------------------- mechanisms
  py::class_<ContinualMechanism>(m, "Mechanism",
                                 "A continual-release mechanism: feed the "
                                 "secret bit by bit, then answer arrivals.")
      .def("absorb_bit", &ContinualMechanism::AbsorbBit, py::arg("index"),
           py::arg("sign"))
      .def("step", &ContinualMechanism::Step, py::arg("arrival"))
      .def_property_readonly("bits_absorbed",
                             &ContinualMechanism::bits_absorbed)
      .def_property_readonly("steps_taken", &ContinualMechanism::steps_taken);

  m.def(
      "make_mechanism",
      [](const std::string& name, const ProblemParams& params,
         std::uint64_t seed) {
        return BuiltinMechanismFactory(name)(params, seed);
      },
      py::arg("name"), py::arg("params"), py::arg("seed"),
      "Builds a built-in mechanism: oblivious-rr, fresh-rr, fixed-output.");
  m.def(
      "make_subprocess_mechanism",
      [](const std::string& command, const ProblemParams& params,
         std::uint64_t seed) {
        return SubprocessMechanismFactory(command)(params, seed);
      },
      py::arg("command"), py::arg("params"), py::arg("seed"),
      "Spawns an external mechanism speaking the wire protocol.");
  m.def("builtin_mechanism_names", [] { return BuiltinMechanismNames(); });

  // ------------------------------------------------------- reconstruction
  py::class_<ReconstructionParams>(m, "ReconstructionParams",
                                   "Correlation floor p, pairwise ceiling q, "
                                   "list length k.")
      .def(py::init<double, double, std::int64_t>(), py::arg("p"),
           py::arg("q"), py::arg("k"))
      .def_readonly("p", &ReconstructionParams::p)
      .def_readonly("q", &ReconstructionParams::q)
      .def_readonly("k", &ReconstructionParams::k)
      .def("__repr__", [](const ReconstructionParams& r) {
        return "ReconstructionParams(p=" + std::to_string(r.p) +
               ", q=" + std::to_string(r.q) + ", k=" + std::to_string(r.k) +
               ")";
      });

  m.def("lemma_bound", &LemmaBound, py::arg("params"),
        "Guarantee factor 1 - 2/(p^2 k) - 2(q - p^2)/p^2.");
  m.def(
      "verify_lemma",
      [](const SignVector& x, const std::vector<SignVector>& ys,
         const ReconstructionParams& params) {
        return ToDict(VerifyLemma(x, ys, params));
      },
      py::arg("x"), py::arg("ys"), py::arg("params"),
      "Checks preconditions and the majority bound on one instance.");
  m.def(
      "run_lemma_check",
      [](std::int64_t instances, std::int64_t max_d, std::int64_t max_k,
         std::uint64_t seed) {
        LemmaCheckSummary summary;
        {
          py::gil_scoped_release release;
          summary = RunLemmaCheck(instances, max_d, max_k, seed);
        }
        return ToDict(summary);
      },
      py::arg("instances"), py::arg("max_d"), py::arg("max_k"),
      py::arg("seed"), "Probes the guarantee on random planted instances.");

  // --------------------------------------------------------------- attack
  m.def("default_attack_horizon", &DefaultAttackHorizon, py::arg("alpha"),
        "Echo-back horizon ceil(1 + 100 / alpha^2).");
  m.def("attack_lemma_params", &AttackLemmaParams, py::arg("params"),
        "Reconstruction parameters the attack analysis plugs into the "
        "guarantee.");

  // ---------------------------------------------------------------- audit
  m.def(
      "dp_tv_bound",
      [](double epsilon, double delta) {
        return DpTvBound(PrivacyParams(epsilon, delta));
      },
      py::arg("epsilon"), py::arg("delta"),
      "Total-variation cap implied by an (epsilon, delta) guarantee.");
  m.def("rr_privacy_exact", &RrPrivacyExact, py::arg("alpha"),
        "ln((1 + alpha) / (1 - alpha)).");
  m.def("hoeffding_failure_bound", &HoeffdingFailureBound, py::arg("alpha"),
        py::arg("d"), py::arg("T"),
        "2 (T + 1) exp(-alpha^4 d / 20000).");
  m.def("max_t_oblivious", &MaxTOblivious, py::arg("alpha"), py::arg("d"),
        "Largest T with failure bound below 1/T.");
  m.def("clopper_pearson_interval", &ClopperPearsonInterval,
        py::arg("trials"), py::arg("successes"), py::arg("confidence"),
        "Exact two-sided binomial confidence interval.");

  m.def(
      "run_attack_trial",
      [](const std::string& mechanism, const ProblemParams& params,
         std::int64_t trial, std::uint64_t seed,
         const std::string& mechanism_cmd) {
        const MechanismFactory factory =
            ResolveFactory(mechanism, mechanism_cmd);
        TrialRecord record;
        {
          py::gil_scoped_release release;
          record = RunAttackTrial(factory, params, trial, seed);
        }
        return ToDict(record);
      },
      py::arg("mechanism"), py::arg("params"), py::arg("trial"),
      py::arg("seed"), py::arg("mechanism_cmd") = std::string(),
      "Plays one attack game and reports the audited outcome.");

  m.def(
      "estimate_challenge_advantage",
      [](const std::string& mechanism, const ProblemParams& params,
         std::int64_t trials, double confidence, double epsilon, double delta,
         std::uint64_t seed, int jobs, const std::string& mechanism_cmd) {
        const MechanismFactory factory =
            ResolveFactory(mechanism, mechanism_cmd);
        const ChallengeAuditConfig config{
            params, trials, confidence, PrivacyParams(epsilon, delta), seed,
            jobs};
        ChallengeAuditResult result;
        {
          py::gil_scoped_release release;
          result = EstimateChallengeAdvantage(factory, config);
        }
        py::dict out = ToDict(result.report);
        py::list records;
        for (const auto& record : result.records) {
          records.append(ToDict(record));
        }
        out["records"] = std::move(records);
        return out;
      },
      py::arg("mechanism"), py::arg("params"), py::arg("trials"),
      py::arg("confidence") = 0.95, py::arg("epsilon") = 0.2,
      py::arg("delta") = 0.05, py::arg("seed") = 0, py::arg("jobs") = 0,
      py::arg("mechanism_cmd") = std::string(),
      "Full audit: many attack games, exact interval, verdict.");

  m.def(
      "run_oblivious_accuracy",
      [](const std::string& mechanism, const ProblemParams& params,
         std::int64_t trials, std::uint64_t seed, int jobs,
         const std::string& mechanism_cmd) {
        const MechanismFactory factory =
            ResolveFactory(mechanism, mechanism_cmd);
        ObliviousAccuracyResult result;
        {
          py::gil_scoped_release release;
          result = RunObliviousAccuracy(factory, params, trials, seed, jobs);
        }
        py::dict out;
        out["trials"] = result.trials;
        out["accurate_trials"] = result.accurate_trials;
        out["accuracy_rate"] = result.accuracy_rate;
        out["worst_violation"] = result.worst_violation;
        out["hoeffding_bound"] = result.hoeffding_bound;
        py::list records;
        for (const auto& record : result.records) {
          records.append(ToDict(record));
        }
        out["records"] = std::move(records);
        return out;
      },
      py::arg("mechanism"), py::arg("params"), py::arg("trials"),
      py::arg("seed") = 0, py::arg("jobs") = 0,
      py::arg("mechanism_cmd") = std::string(),
      "Accuracy experiment on fixed uniform streams.");
}
