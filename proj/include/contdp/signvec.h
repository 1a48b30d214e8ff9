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
// Dense vectors over {-1,+1}^d, packed one coordinate per bit (+1 <-> bit 1),
// plus the bulk kernels the rest of the library is built on: inner products
// via XOR + popcount, coordinatewise sign majority via bit-sliced counters,
// and batched pairwise inner products.  Dimensions up to ~10^7 are routine,
// so everything here is O(d/64) words and cache-conscious.

#ifndef CONTDP_SIGNVEC_H_
#define CONTDP_SIGNVEC_H_

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "contdp/rng.h"

namespace contdp {

// Number of 64-bit words used to store `dim` packed coordinates.
inline std::size_t WordsForDim(std::int64_t dim) {
  return static_cast<std::size_t>((dim + 63) / 64);
}

// An immutable vector in {-1,+1}^d.  Copies are cheap: the packed words live
// behind a shared_ptr, so a vector that appears many times in a transcript
// (e.g. the single output of an oblivious mechanism, or an echoed arrival)
// is stored once.  Coordinate i lives at bit (i % 64) of word (i / 64);
// padding bits past the dimension are always zero.
class SignVector {
 public:
  // Default-constructed vectors are empty (dim() == 0) and only useful as
  // placeholders in containers; all kernels require dim >= 1.
  SignVector() = default;

  // Builds from explicit signs; every entry must be +1 or -1.
  static SignVector FromSigns(std::span<const int> signs);
  static SignVector FromSigns(std::initializer_list<int> signs);

  // Takes ownership of packed words (low bit of words[0] is coordinate 0).
  // Padding bits beyond `dim` must be zero.
  static SignVector FromWords(std::int64_t dim, std::vector<std::uint64_t> words);

  static SignVector AllPlus(std::int64_t dim);
  static SignVector AllMinus(std::int64_t dim);

  // Parses the hex serialization produced by ToHex (see below).
  static SignVector FromHex(std::int64_t dim, std::string_view hex);

  std::int64_t dim() const { return dim_; }
  bool empty() const { return dim_ == 0; }

  // Sign (+1 or -1) of coordinate i, 0-based; UsageError out of range.
  int sign_at(std::int64_t i) const;

  // Copy with coordinate i replaced by `sign` (+1 or -1).
  SignVector WithSignAt(std::int64_t i, int sign) const;

  SignVector Negated() const;

  std::span<const std::uint64_t> words() const {
    return words_ ? std::span<const std::uint64_t>(*words_)
                  : std::span<const std::uint64_t>();
  }

  // Identity of the underlying storage.  Two handles with equal storage_key()
  // are guaranteed equal as vectors; the converse need not hold.  Used to
  // deduplicate repeated vectors in batched inner-product work.
  const void* storage_key() const { return words_ ? words_->data() : nullptr; }

  // Lowercase hex, two characters per byte, little-endian within each word:
  // byte k holds coordinates 8k..8k+7, so the encoding has 2*ceil(d/8)
  // characters and is independent of the word size.
  std::string ToHex() const;

  // FNV-1a over the dimension and packed words; stable across runs.
  std::uint64_t Digest() const;

  friend bool operator==(const SignVector& a, const SignVector& b);
  friend bool operator!=(const SignVector& a, const SignVector& b) {
    return !(a == b);
  }

 private:
  SignVector(std::int64_t dim,
             std::shared_ptr<const std::vector<std::uint64_t>> words)
      : dim_(dim), words_(std::move(words)) {}

  std::int64_t dim_ = 0;
  std::shared_ptr<const std::vector<std::uint64_t>> words_;
};

// Inner product <u, v> = d - 2 * hamming(u, v).  Requires equal nonzero
// dimensions.  Always has the same parity as d, and |Inner| <= d.
std::int64_t Inner(const SignVector& u, const SignVector& v);

// Fresh uniform vector; consumes exactly ceil(dim / 64) engine draws.
SignVector RandomSignVector(std::int64_t dim, Rng& rng);

// Coordinatewise sign majority with ties resolved to +1, i.e.
// majority_i = +1  iff  #{j : v_j[i] = +1} >= ceil(k / 2)    (k vectors).
// UsageError on an empty list or mismatched dimensions.
SignVector SignMajority(std::span<const SignVector> vectors);

// Streaming form of SignMajority: feed vectors one at a time and extract the
// majority at the end.  Internally keeps per-coordinate counters bit-sliced
// across ceil(log2(k+1)) planes, so Add is O(d/64 * log k) word operations
// and memory stays at O(d/64 * log k) words regardless of k.
class MajorityAccumulator {
 public:
  explicit MajorityAccumulator(std::int64_t dim);

  // Adds one vector; UsageError on dimension mismatch.
  void Add(const SignVector& v);

  std::int64_t count() const { return count_; }
  std::int64_t dim() const { return dim_; }

  // Majority of everything added so far; UsageError if count() == 0.
  SignVector Majority() const;

 private:
  std::int64_t dim_;
  std::int64_t count_ = 0;
  std::size_t num_words_;
  // planes_[p][w] holds bit p of the running +1-count for the 64 coordinates
  // in word w.  Plane list grows as count() needs more bits.
  std::vector<std::vector<std::uint64_t>> planes_;
};

// Batched pairwise inner products over vectors that may share storage.
// Request() queues pairs (deduplicated by storage identity, symmetric),
// ComputeAll() evaluates every queued pair in one cache-blocked sweep over
// the packed words, and Get() returns values, computing on the fly if a pair
// was never requested.  All vectors must share one dimension.
//
// The point of this class: a transcript evaluation at d = 10^7 needs ~10^5
// distinct inner products over ~500 vectors.  Computing them pair-by-pair
// streams ~hundreds of GB through memory; the blocked sweep reads each
// vector chunk once per block and stays compute-bound.
class InnerTable {
 public:
  InnerTable() = default;

  void Request(const SignVector& u, const SignVector& v);
  void ComputeAll();
  std::int64_t Get(const SignVector& u, const SignVector& v);

  std::size_t size() const { return values_.size(); }

 private:
  using Key = std::pair<const void*, const void*>;
  static Key MakeKey(const SignVector& u, const SignVector& v);
  void CheckDim(const SignVector& v);

  std::int64_t dim_ = 0;
  std::map<Key, std::int64_t> values_;
  // Pending unique pairs; handles retained so storage stays alive.
  std::vector<std::pair<SignVector, SignVector>> pending_;
  std::map<Key, std::size_t> pending_index_;
};

}  // namespace contdp

#endif  // CONTDP_SIGNVEC_H_
