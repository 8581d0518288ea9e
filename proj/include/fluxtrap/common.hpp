// Copyright 2026 The FluxTrap Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace fluxtrap {

using QubitId = std::int32_t;
using PositionId = std::int32_t;
using TrapId = std::int32_t;
using JunctionId = std::int32_t;
using GateId = std::int32_t;
using TimeUs = std::int64_t;

constexpr QubitId kVacant = -1;
constexpr PositionId kNoPosition = -1;
constexpr GateId kNoGate = -1;

/// Shift direction within a 1D trap. Right moves toward higher indices.
enum class ShiftDir : std::uint8_t { Left, Right };

inline int dir_step(ShiftDir d) { return d == ShiftDir::Right ? 1 : -1; }

inline const char* to_string(ShiftDir d) {
  return d == ShiftDir::Right ? "right" : "left";
}

/// Thrown when an input file or structure fails validation.
class InputError : public std::runtime_error {
 public:
  explicit InputError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Deterministic RNG used by generators and mapping shuffles.
///
/// splitmix64 core with hand-rolled bounded draws; std distributions are
/// implementation defined and would break byte-identical outputs across
/// standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed + 0x9e3779b97f4a7c15ULL) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Uniform integer in [0, n). n must be > 0.
  std::uint64_t below(std::uint64_t n) {
    // rejection sampling keeps the draw unbiased
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t v = next();
    while (v >= limit) v = next();
    return v % n;
  }

  /// Uniform double in [0, 1).
  double real01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::size_t j = static_cast<std::size_t>(below(i));
      std::swap(v[i - 1], v[j]);
    }
  }

 private:
  std::uint64_t state_;
};

/// Log level from FLUXTRAP_LOG (off | info | debug). Read once.
inline int log_level() {
  static const int level = [] {
    const char* env = std::getenv("FLUXTRAP_LOG");
    if (env == nullptr) return 0;
    std::string s(env);
    if (s == "debug") return 2;
    if (s == "info") return 1;
    return 0;
  }();
  return level;
}

template <typename... Args>
inline void log_info(const char* fmt, Args... args) {
  if (log_level() >= 1) {
    std::fprintf(stderr, "[fluxtrap] ");
    std::fprintf(stderr, fmt, args...);
    std::fprintf(stderr, "\n");
  }
}

template <typename... Args>
inline void log_debug(const char* fmt, Args... args) {
  if (log_level() >= 2) {
    std::fprintf(stderr, "[fluxtrap:debug] ");
    std::fprintf(stderr, fmt, args...);
    std::fprintf(stderr, "\n");
  }
}

}  // namespace fluxtrap
