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

#include "contdp/rng.h"

namespace contdp {

std::uint64_t SplitMix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::uint64_t DeriveSeed(std::uint64_t master, std::uint64_t stream,
                         std::uint64_t index) {
  // Absorb master, stream, and index through successive splitmix64 rounds.
  // The +1 offsets keep (stream=0, index=0) from collapsing to a bare
  // finalizer of the master seed alone.
  std::uint64_t state = master;
  std::uint64_t acc = SplitMix64(state);
  state ^= (stream + 1) * 0x9E3779B97F4A7C15ULL;
  acc ^= SplitMix64(state);
  state ^= (index + 1) * 0xC2B2AE3D27D4EB4FULL;
  acc ^= SplitMix64(state);
  return acc;
}

}  // namespace contdp
