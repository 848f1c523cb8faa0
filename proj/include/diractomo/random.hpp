// Copyright 2026 The diractomo Authors
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

#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace diractomo {

/// SplitMix64 finalizer.
inline std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// FNV-1a over raw bytes.
inline std::uint64_t fnv1a(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

/// Stream key for (seed, label, index). Streams with different keys are
/// independent of the order in which they are consumed.
inline std::uint64_t stream_key(std::uint64_t seed, std::string_view label, std::uint64_t index) {
  return mix64(mix64(seed) ^ mix64(fnv1a(label) + 0x632be59bd9b4e019ULL) ^ mix64(index + 0x2545f4914f6cdd1dULL));
}

inline std::mt19937_64 keyed_engine(std::uint64_t seed, std::string_view label, std::uint64_t index) {
  return std::mt19937_64(stream_key(seed, label, index));
}

}  // namespace diractomo
