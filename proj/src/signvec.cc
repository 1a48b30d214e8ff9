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

#include "contdp/signvec.h"

#include <algorithm>
#include <bit>
#include <cctype>

#include "contdp/errors.h"

namespace contdp {
namespace {

constexpr char kHexDigits[] = "0123456789abcdef";

// Mask selecting the valid (non-padding) bits of the last word.
std::uint64_t TailMask(std::int64_t dim) {
  const int rem = static_cast<int>(dim % 64);
  return rem == 0 ? ~0ULL : (~0ULL >> (64 - rem));
}

void CheckPadding(std::int64_t dim, const std::vector<std::uint64_t>& words) {
  if ((words.back() & ~TailMask(dim)) != 0) {
    throw UsageError("sign vector has nonzero padding bits past dimension " +
                     std::to_string(dim));
  }
}

int HexNibble(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

std::shared_ptr<const std::vector<std::uint64_t>> Freeze(
    std::vector<std::uint64_t> words) {
  return std::make_shared<const std::vector<std::uint64_t>>(std::move(words));
}

}  // namespace

SignVector SignVector::FromSigns(std::span<const int> signs) {
  if (signs.empty()) {
    throw UsageError("sign vector dimension must be at least 1");
  }
  const auto dim = static_cast<std::int64_t>(signs.size());
  std::vector<std::uint64_t> words(WordsForDim(dim), 0);
  for (std::int64_t i = 0; i < dim; ++i) {
    const int s = signs[static_cast<std::size_t>(i)];
    if (s != 1 && s != -1) {
      throw UsageError("sign vector entries must be +1 or -1, got " +
                       std::to_string(s) + " at index " + std::to_string(i));
    }
    if (s == 1) {
      words[static_cast<std::size_t>(i / 64)] |= 1ULL << (i % 64);
    }
  }
  return SignVector(dim, Freeze(std::move(words)));
}

SignVector SignVector::FromSigns(std::initializer_list<int> signs) {
  return FromSigns(std::span<const int>(signs.begin(), signs.size()));
}

SignVector SignVector::FromWords(std::int64_t dim,
                                 std::vector<std::uint64_t> words) {
  if (dim < 1) {
    throw UsageError("sign vector dimension must be at least 1");
  }
  if (words.size() != WordsForDim(dim)) {
    throw UsageError("word count " + std::to_string(words.size()) +
                     " does not match dimension " + std::to_string(dim));
  }
  CheckPadding(dim, words);
  return SignVector(dim, Freeze(std::move(words)));
}

SignVector SignVector::AllPlus(std::int64_t dim) {
  if (dim < 1) {
    throw UsageError("sign vector dimension must be at least 1");
  }
  std::vector<std::uint64_t> words(WordsForDim(dim), ~0ULL);
  words.back() &= TailMask(dim);
  return SignVector(dim, Freeze(std::move(words)));
}

SignVector SignVector::AllMinus(std::int64_t dim) {
  if (dim < 1) {
    throw UsageError("sign vector dimension must be at least 1");
  }
  return SignVector(dim, Freeze(std::vector<std::uint64_t>(WordsForDim(dim), 0)));
}

SignVector SignVector::FromHex(std::int64_t dim, std::string_view hex) {
  if (dim < 1) {
    throw UsageError("sign vector dimension must be at least 1");
  }
  const std::size_t num_bytes = static_cast<std::size_t>((dim + 7) / 8);
  if (hex.size() != 2 * num_bytes) {
    throw UsageError("hex encoding for dimension " + std::to_string(dim) +
                     " must have " + std::to_string(2 * num_bytes) +
                     " characters, got " + std::to_string(hex.size()));
  }
  std::vector<std::uint64_t> words(WordsForDim(dim), 0);
  for (std::size_t k = 0; k < num_bytes; ++k) {
    const int hi = HexNibble(hex[2 * k]);
    const int lo = HexNibble(hex[2 * k + 1]);
    if (hi < 0 || lo < 0) {
      throw UsageError("invalid hex character in sign vector encoding");
    }
    const std::uint64_t byte = static_cast<std::uint64_t>((hi << 4) | lo);
    words[k / 8] |= byte << ((k % 8) * 8);
  }
  CheckPadding(dim, words);
  return SignVector(dim, Freeze(std::move(words)));
}

int SignVector::sign_at(std::int64_t i) const {
  if (i < 0 || i >= dim_) {
    throw UsageError("coordinate " + std::to_string(i) +
                     " out of range for dimension " + std::to_string(dim_));
  }
  return ((*words_)[static_cast<std::size_t>(i / 64)] >> (i % 64)) & 1 ? 1 : -1;
}

SignVector SignVector::WithSignAt(std::int64_t i, int sign) const {
  if (i < 0 || i >= dim_) {
    throw UsageError("coordinate " + std::to_string(i) +
                     " out of range for dimension " + std::to_string(dim_));
  }
  if (sign != 1 && sign != -1) {
    throw UsageError("sign must be +1 or -1, got " + std::to_string(sign));
  }
  std::vector<std::uint64_t> words(*words_);
  const std::uint64_t bit = 1ULL << (i % 64);
  if (sign == 1) {
    words[static_cast<std::size_t>(i / 64)] |= bit;
  } else {
    words[static_cast<std::size_t>(i / 64)] &= ~bit;
  }
  return SignVector(dim_, Freeze(std::move(words)));
}

SignVector SignVector::Negated() const {
  if (empty()) {
    throw UsageError("cannot negate an empty sign vector");
  }
  std::vector<std::uint64_t> words(words_->size());
  for (std::size_t k = 0; k < words.size(); ++k) {
    words[k] = ~(*words_)[k];
  }
  words.back() &= TailMask(dim_);
  return SignVector(dim_, Freeze(std::move(words)));
}

std::string SignVector::ToHex() const {
  const std::size_t num_bytes = static_cast<std::size_t>((dim_ + 7) / 8);
  std::string out;
  out.reserve(2 * num_bytes);
  for (std::size_t k = 0; k < num_bytes; ++k) {
    const std::uint64_t byte = ((*words_)[k / 8] >> ((k % 8) * 8)) & 0xFF;
    out.push_back(kHexDigits[byte >> 4]);
    out.push_back(kHexDigits[byte & 0xF]);
  }
  return out;
}

std::uint64_t SignVector::Digest() const {
  constexpr std::uint64_t kOffset = 0xCBF29CE484222325ULL;
  constexpr std::uint64_t kPrime = 0x100000001B3ULL;
  std::uint64_t h = kOffset;
  auto absorb = [&h](std::uint64_t v) {
    for (int byte = 0; byte < 8; ++byte) {
      h ^= (v >> (8 * byte)) & 0xFF;
      h *= kPrime;
    }
  };
  absorb(static_cast<std::uint64_t>(dim_));
  if (words_ != nullptr) {
    for (const std::uint64_t w : *words_) absorb(w);
  }
  return h;
}

bool operator==(const SignVector& a, const SignVector& b) {
  if (a.dim_ != b.dim_) return false;
  if (a.dim_ == 0) return true;
  if (a.words_ == b.words_) return true;
  return *a.words_ == *b.words_;
}

std::int64_t Inner(const SignVector& u, const SignVector& v) {
  if (u.dim() < 1 || u.dim() != v.dim()) {
    throw UsageError("inner product requires equal nonzero dimensions, got " +
                     std::to_string(u.dim()) + " and " + std::to_string(v.dim()));
  }
  const auto uw = u.words();
  const auto vw = v.words();
  std::int64_t hamming = 0;
  for (std::size_t k = 0; k < uw.size(); ++k) {
    hamming += std::popcount(uw[k] ^ vw[k]);
  }
  return u.dim() - 2 * hamming;
}

SignVector RandomSignVector(std::int64_t dim, Rng& rng) {
  if (dim < 1) {
    throw UsageError("sign vector dimension must be at least 1");
  }
  std::vector<std::uint64_t> words(WordsForDim(dim));
  for (auto& w : words) w = rng();
  words.back() &= TailMask(dim);
  return SignVector::FromWords(dim, std::move(words));
}

SignVector SignMajority(std::span<const SignVector> vectors) {
  if (vectors.empty()) {
    throw UsageError("sign majority of an empty list");
  }
  MajorityAccumulator acc(vectors.front().dim());
  for (const auto& v : vectors) acc.Add(v);
  return acc.Majority();
}

MajorityAccumulator::MajorityAccumulator(std::int64_t dim)
    : dim_(dim), num_words_(WordsForDim(dim)) {
  if (dim < 1) {
    throw UsageError("sign vector dimension must be at least 1");
  }
}

void MajorityAccumulator::Add(const SignVector& v) {
  if (v.dim() != dim_) {
    throw UsageError("majority accumulator dimension " + std::to_string(dim_) +
                     " does not match vector dimension " +
                     std::to_string(v.dim()));
  }
  // Per-coordinate counts after this Add are at most count_ + 1; make sure
  // enough planes exist that the ripple-carry below cannot overflow the top.
  while (std::bit_width(static_cast<std::uint64_t>(count_ + 1)) >
         planes_.size()) {
    planes_.emplace_back(num_words_, 0);
  }
  const auto words = v.words();
  for (std::size_t k = 0; k < num_words_; ++k) {
    // Add the 64 incoming bits into the bit-sliced counters: a carry-save
    // ripple across planes, one lane per coordinate.
    std::uint64_t carry = words[k];
    for (std::size_t p = 0; carry != 0; ++p) {
      const std::uint64_t next = planes_[p][k] & carry;
      planes_[p][k] ^= carry;
      carry = next;
    }
  }
  ++count_;
}

SignVector MajorityAccumulator::Majority() const {
  if (count_ == 0) {
    throw UsageError("sign majority of an empty list");
  }
  // Coordinate i is +1 iff its +1-count is >= ceil(count/2).  Compare all 64
  // lanes of a word against the threshold at once, scanning bit planes from
  // most to least significant and tracking greater-than / equal lanes.
  const auto threshold = static_cast<std::uint64_t>((count_ + 1) / 2);
  std::vector<std::uint64_t> out(num_words_);
  for (std::size_t k = 0; k < num_words_; ++k) {
    std::uint64_t gt = 0;
    std::uint64_t eq = ~0ULL;
    for (std::size_t p = planes_.size(); p-- > 0;) {
      const std::uint64_t c = planes_[p][k];
      const std::uint64_t t = ((threshold >> p) & 1) ? ~0ULL : 0ULL;
      gt |= eq & c & ~t;
      eq &= ~(c ^ t);
    }
    out[k] = gt | eq;
  }
  out.back() &= TailMask(dim_);
  return SignVector::FromWords(dim_, std::move(out));
}

InnerTable::Key InnerTable::MakeKey(const SignVector& u, const SignVector& v) {
  const void* a = u.storage_key();
  const void* b = v.storage_key();
  return a <= b ? Key{a, b} : Key{b, a};
}

void InnerTable::CheckDim(const SignVector& v) {
  if (v.dim() < 1) {
    throw UsageError("inner table requires nonzero-dimension vectors");
  }
  if (dim_ == 0) {
    dim_ = v.dim();
  } else if (v.dim() != dim_) {
    throw UsageError("inner table dimension " + std::to_string(dim_) +
                     " does not match vector dimension " +
                     std::to_string(v.dim()));
  }
}

void InnerTable::Request(const SignVector& u, const SignVector& v) {
  CheckDim(u);
  CheckDim(v);
  const Key key = MakeKey(u, v);
  if (values_.contains(key) || pending_index_.contains(key)) return;
  pending_index_.emplace(key, pending_.size());
  pending_.emplace_back(u, v);
}

void InnerTable::ComputeAll() {
  if (pending_.empty()) return;
  // Deduplicate storage into rows and expand pending pairs into jobs.
  struct Job {
    std::size_t a;
    std::size_t b;
    Key key;
  };
  std::map<const void*, std::size_t> row_of;
  std::vector<const std::uint64_t*> rows;
  std::vector<Job> jobs;
  auto row_index = [&](const SignVector& v) {
    const auto [it, inserted] = row_of.try_emplace(v.storage_key(), rows.size());
    if (inserted) rows.push_back(v.words().data());
    return it->second;
  };
  for (const auto& [u, v] : pending_) {
    const Key key = MakeKey(u, v);
    if (values_.contains(key)) continue;
    if (key.first == key.second) {
      values_[key] = dim_;  // identical storage: <v, v> = d
      continue;
    }
    jobs.push_back(Job{row_index(u), row_index(v), key});
  }
  // One pass over the packed words in chunks small enough that every row's
  // chunk slice stays cache-resident while all jobs consume it.
  constexpr std::size_t kChunkWords = 512;
  const std::size_t num_words = WordsForDim(dim_);
  std::vector<std::int64_t> diffs(jobs.size(), 0);
  for (std::size_t w0 = 0; w0 < num_words; w0 += kChunkWords) {
    const std::size_t w1 = std::min(num_words, w0 + kChunkWords);
    for (std::size_t j = 0; j < jobs.size(); ++j) {
      const std::uint64_t* a = rows[jobs[j].a];
      const std::uint64_t* b = rows[jobs[j].b];
      std::int64_t acc = 0;
      for (std::size_t w = w0; w < w1; ++w) {
        acc += std::popcount(a[w] ^ b[w]);
      }
      diffs[j] += acc;
    }
  }
  for (std::size_t j = 0; j < jobs.size(); ++j) {
    values_[jobs[j].key] = dim_ - 2 * diffs[j];
  }
  pending_.clear();
  pending_index_.clear();
}

std::int64_t InnerTable::Get(const SignVector& u, const SignVector& v) {
  CheckDim(u);
  CheckDim(v);
  const Key key = MakeKey(u, v);
  if (const auto it = values_.find(key); it != values_.end()) {
    return it->second;
  }
  const std::int64_t value = Inner(u, v);
  values_.emplace(key, value);
  return value;
}

}  // namespace contdp
