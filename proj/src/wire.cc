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

#include "contdp/wire.h"

#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <chrono>
#include <cstdlib>
#include <cstring>
#include <mutex>
#include <thread>
#include <utility>

#include "contdp/errors.h"

namespace contdp {
namespace {

// A child dying while we write must surface as a ProtocolViolation, not a
// fatal SIGPIPE.  Installed once; an existing non-default handler is left
// alone.
void IgnoreSigpipeOnce() {
  static std::once_flag flag;
  std::call_once(flag, [] {
    struct sigaction current {};
    if (sigaction(SIGPIPE, nullptr, &current) == 0 &&
        current.sa_handler == SIG_DFL) {
      struct sigaction ignore {};
      ignore.sa_handler = SIG_IGN;
      sigaction(SIGPIPE, &ignore, nullptr);
    }
  });
}

void CloseFd(int fd) {
  if (fd >= 0) ::close(fd);
}

}  // namespace

SubprocessMechanism::SubprocessMechanism(const ProblemParams& params,
                                         std::uint64_t seed,
                                         const std::string& command)
    : ContinualMechanism(params) {
  if (command.empty()) {
    throw UsageError("mechanism command must not be empty");
  }
  IgnoreSigpipeOnce();

  int to_pipe[2] = {-1, -1};    // parent writes -> child stdin
  int from_pipe[2] = {-1, -1};  // child stdout -> parent reads
  if (::pipe(to_pipe) != 0) {
    throw IoError(std::string("pipe: ") + std::strerror(errno));
  }
  if (::pipe(from_pipe) != 0) {
    const int err = errno;
    CloseFd(to_pipe[0]);
    CloseFd(to_pipe[1]);
    throw IoError(std::string("pipe: ") + std::strerror(err));
  }

  const pid_t pid = ::fork();
  if (pid < 0) {
    const int err = errno;
    CloseFd(to_pipe[0]);
    CloseFd(to_pipe[1]);
    CloseFd(from_pipe[0]);
    CloseFd(from_pipe[1]);
    throw IoError(std::string("fork: ") + std::strerror(err));
  }
  if (pid == 0) {
    // Child: wire the pipes to stdin/stdout, expose the seed, exec the shell.
    ::dup2(to_pipe[0], STDIN_FILENO);
    ::dup2(from_pipe[1], STDOUT_FILENO);
    CloseFd(to_pipe[0]);
    CloseFd(to_pipe[1]);
    CloseFd(from_pipe[0]);
    CloseFd(from_pipe[1]);
    const std::string seed_text = std::to_string(seed);
    ::setenv("CONTDP_MECH_SEED", seed_text.c_str(), 1);
    ::execl("/bin/sh", "sh", "-c", command.c_str(),
            static_cast<char*>(nullptr));
    ::_exit(127);  // exec failed; the parent sees EOF and reports it
  }

  child_pid_ = pid;
  CloseFd(to_pipe[0]);
  CloseFd(from_pipe[1]);
  to_child_ = ::fdopen(to_pipe[1], "w");
  from_child_ = ::fdopen(from_pipe[0], "r");
  if (to_child_ == nullptr || from_child_ == nullptr) {
    const int err = errno;
    if (to_child_ != nullptr) std::fclose(to_child_);
    else CloseFd(to_pipe[1]);
    if (from_child_ != nullptr) std::fclose(from_child_);
    else CloseFd(from_pipe[0]);
    to_child_ = nullptr;
    from_child_ = nullptr;
    ::kill(pid, SIGKILL);
    ::waitpid(pid, nullptr, 0);
    throw IoError(std::string("fdopen: ") + std::strerror(err));
  }

  // %.17g round-trips every double, so the child sees alpha exactly.
  char setup[64];
  std::snprintf(setup, sizeof(setup), "SETUP %lld %.17g",
                static_cast<long long>(params.dim), params.alpha);
  SendLine(setup);
}

SubprocessMechanism::~SubprocessMechanism() {
  if (to_child_ != nullptr) {
    std::fclose(to_child_);  // EOF: a well-behaved child exits now
    to_child_ = nullptr;
  }
  if (from_child_ != nullptr) {
    std::fclose(from_child_);
    from_child_ = nullptr;
  }
  if (child_pid_ > 0) {
    // Give the child ~2 seconds to exit cleanly, then kill it.
    for (int i = 0; i < 100; ++i) {
      int status = 0;
      const pid_t done = ::waitpid(child_pid_, &status, WNOHANG);
      if (done == child_pid_ || (done < 0 && errno == ECHILD)) {
        child_pid_ = -1;
        return;
      }
      std::this_thread::sleep_for(std::chrono::milliseconds(20));
    }
    ::kill(child_pid_, SIGKILL);
    ::waitpid(child_pid_, nullptr, 0);
    child_pid_ = -1;
  }
}

void SubprocessMechanism::SendLine(const std::string& line) {
  if (std::fputs(line.c_str(), to_child_) == EOF ||
      std::fputc('\n', to_child_) == EOF) {
    throw ProtocolViolation(
        "mechanism process stopped accepting input (it likely exited)");
  }
}

std::string SubprocessMechanism::ReadLine() {
  if (std::fflush(to_child_) == EOF) {
    throw ProtocolViolation(
        "mechanism process stopped accepting input (it likely exited)");
  }
  std::string line;
  for (int c = std::fgetc(from_child_); c != '\n'; c = std::fgetc(from_child_)) {
    if (c == EOF) {
      throw ProtocolViolation(
          "mechanism process closed its output mid-protocol");
    }
    line.push_back(static_cast<char>(c));
  }
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return line;
}

void SubprocessMechanism::OnAbsorbBit(std::int64_t index, int sign) {
  // 1-based coordinate on the wire, matching every serialized surface.
  SendLine("BIT " + std::to_string(index + 1) + " " + std::to_string(sign));
}

SignVector SubprocessMechanism::OnStep(const SignVector& arrival) {
  SendLine("VEC " + arrival.ToHex());
  const std::string reply = ReadLine();
  constexpr const char kPrefix[] = "OUT ";
  if (reply.rfind(kPrefix, 0) != 0) {
    throw ProtocolViolation("expected an OUT line, got \"" +
                            reply.substr(0, 64) + "\"");
  }
  try {
    return SignVector::FromHex(params().dim, reply.substr(4));
  } catch (const UsageError& e) {
    throw ProtocolViolation(std::string("malformed OUT payload: ") + e.what());
  }
}

MechanismFactory SubprocessMechanismFactory(std::string command) {
  return [command = std::move(command)](const ProblemParams& params,
                                        std::uint64_t seed) {
    return std::unique_ptr<ContinualMechanism>(
        new SubprocessMechanism(params, seed, command));
  };
}

}  // namespace contdp
