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
// The contdp experiment driver.  Subcommands wire the library into the two
// headline experiments plus parameter calculators:
//
//   oblivious-accuracy   fixed-stream accuracy trials for a mechanism
//   adaptive-attack      the echo-back challenge attack, audited
//   audit                the same audit against an explicitly named mechanism
//   lemma-check          planted-instance probe of the reconstruction bound
//   params               derived constants for one (alpha, d) operating point
//
// Reports are JSON (--out, stdout by default); per-trial / per-step detail
// is CSV (--csv).  Identical configuration and seed produce byte-identical
// reports.  Exit codes: 0 success, 2 usage error, 3 protocol violation,
// 4 I/O error.

#ifndef CONTDP_CLI_H_
#define CONTDP_CLI_H_

namespace contdp {

// Parses argv and runs the selected subcommand.  Never throws; all errors
// are printed to stderr and folded into the exit code.
int RunCli(int argc, const char* const* argv);

}  // namespace contdp

#endif  // CONTDP_CLI_H_
