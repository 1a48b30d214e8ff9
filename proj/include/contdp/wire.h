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
// Third-party mechanisms over a subprocess wire protocol.  The mechanism is
// any program speaking newline-delimited messages on stdin/stdout:
//
//   -> SETUP <d> <alpha>         once, before anything else
//   -> BIT <i> <b_i>             d lines; i is 1-based, b_i is 1 or -1
//   -> VEC <hex>                 one line per arrival step
//   <- OUT <hex>                 the step's estimate, same encoding
//
// <hex> is the SignVector hex encoding: little-endian bytes, two lowercase
// hex digits per byte, bit j of byte k holding coordinate 8k + j (+1 = set
// bit), padding bits zero.  Only VEC is answered; SETUP and BIT lines are
// absorbed silently.  The child receives the mechanism seed in the
// CONTDP_MECH_SEED environment variable so its randomness can be pinned.
//
// Error mapping: failure to spawn the child is an IoError; everything the
// child does wrong afterwards (closing the stream, answering with garbage or
// the wrong dimension) is a ProtocolViolation.

#ifndef CONTDP_WIRE_H_
#define CONTDP_WIRE_H_

#include <cstdint>
#include <cstdio>
#include <string>

#include "contdp/mechanisms.h"
#include "contdp/problem.h"

namespace contdp {

// Runs `command` through /bin/sh -c and drives it over the wire protocol.
// The lifecycle contract is the usual one (d ordered AbsorbBit calls, then
// Step calls), enforced by the base class before anything hits the wire.
//
// Constructing the first instance installs SIG_IGN for SIGPIPE (once,
// process-wide, only if no handler was set) so that a child dying mid-write
// surfaces as a ProtocolViolation instead of killing the process.
class SubprocessMechanism final : public ContinualMechanism {
 public:
  SubprocessMechanism(const ProblemParams& params, std::uint64_t seed,
                      const std::string& command);

  // Closes the pipes (EOF to the child), waits up to ~2 seconds for a clean
  // exit, then kills the child.  Never throws.
  ~SubprocessMechanism() override;

 private:
  void OnAbsorbBit(std::int64_t index, int sign) override;
  SignVector OnStep(const SignVector& arrival) override;

  void SendLine(const std::string& line);
  std::string ReadLine();

  int child_pid_ = -1;
  std::FILE* to_child_ = nullptr;
  std::FILE* from_child_ = nullptr;
};

// Factory adapter so subprocess mechanisms plug into games and audits
// exactly like built-ins.  Each game spawns a fresh child.
MechanismFactory SubprocessMechanismFactory(std::string command);

}  // namespace contdp

#endif  // CONTDP_WIRE_H_
