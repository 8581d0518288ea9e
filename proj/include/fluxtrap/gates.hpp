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

#include <string>

#include "fluxtrap/common.hpp"

namespace fluxtrap {

/// Supported gate set: the QASM-subset single-qubit gates, the two-qubit
/// entanglers the generators emit, and measurement.
enum class GateKind : std::uint8_t {
  H, X, Y, Z, S, Sdg, T, Tdg, Rx, Ry, Rz,  // single qubit
  Cx, Cz, Rzz,                             // two qubit
  Measure,
};

inline bool is_two_qubit(GateKind k) {
  return k == GateKind::Cx || k == GateKind::Cz || k == GateKind::Rzz;
}

inline bool is_measure(GateKind k) { return k == GateKind::Measure; }

inline bool has_param(GateKind k) {
  return k == GateKind::Rx || k == GateKind::Ry || k == GateKind::Rz ||
         k == GateKind::Rzz;
}

inline const char* to_string(GateKind k) {
  switch (k) {
    case GateKind::H: return "h";
    case GateKind::X: return "x";
    case GateKind::Y: return "y";
    case GateKind::Z: return "z";
    case GateKind::S: return "s";
    case GateKind::Sdg: return "sdg";
    case GateKind::T: return "t";
    case GateKind::Tdg: return "tdg";
    case GateKind::Rx: return "rx";
    case GateKind::Ry: return "ry";
    case GateKind::Rz: return "rz";
    case GateKind::Cx: return "cx";
    case GateKind::Cz: return "cz";
    case GateKind::Rzz: return "rzz";
    case GateKind::Measure: return "measure";
  }
  return "?";
}

inline bool gate_kind_from_string(const std::string& s, GateKind& out) {
  static const std::pair<const char*, GateKind> table[] = {
      {"h", GateKind::H},     {"x", GateKind::X},     {"y", GateKind::Y},
      {"z", GateKind::Z},     {"s", GateKind::S},     {"sdg", GateKind::Sdg},
      {"t", GateKind::T},     {"tdg", GateKind::Tdg}, {"rx", GateKind::Rx},
      {"ry", GateKind::Ry},   {"rz", GateKind::Rz},   {"cx", GateKind::Cx},
      {"cz", GateKind::Cz},   {"rzz", GateKind::Rzz},
      {"measure", GateKind::Measure}};
  for (auto [name, kind] : table)
    if (s == name) {
      out = kind;
      return true;
    }
  return false;
}

}  // namespace fluxtrap
