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

#ifndef CONTDP_ERRORS_H_
#define CONTDP_ERRORS_H_

#include <stdexcept>
#include <string>

namespace contdp {

// Caller passed arguments outside a function's documented domain
// (bad dimensions, out-of-range parameters, malformed serialized input).
// The CLI maps this to exit code 2.
class UsageError : public std::runtime_error {
 public:
  explicit UsageError(const std::string& what) : std::runtime_error(what) {}
};

// A stateful object was driven through an illegal state transition
// (e.g. absorbing a setup bit after the arrival phase started).
// The CLI maps this to exit code 3.
class LifecycleError : public std::runtime_error {
 public:
  explicit LifecycleError(const std::string& what) : std::runtime_error(what) {}
};

// A counterpart in an interactive protocol (game adversary, subprocess
// mechanism) broke the protocol contract.  The CLI maps this to exit code 3.
class ProtocolViolation : public std::runtime_error {
 public:
  explicit ProtocolViolation(const std::string& what)
      : std::runtime_error(what) {}
};

// Filesystem or pipe I/O failed.  The CLI maps this to exit code 4.
class IoError : public std::runtime_error {
 public:
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace contdp

#endif  // CONTDP_ERRORS_H_
