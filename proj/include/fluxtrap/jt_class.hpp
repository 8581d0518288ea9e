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
#include <vector>

#include "fluxtrap/common.hpp"

namespace fluxtrap {

/// The four legs of a junction, one per compass direction.
enum class Leg : std::uint8_t { North = 0, East = 1, South = 2, West = 3 };

inline const char* to_string(Leg l) {
  switch (l) {
    case Leg::North: return "N";
    case Leg::East: return "E";
    case Leg::South: return "S";
    case Leg::West: return "W";
  }
  return "?";
}

/// One of the 18 globally synchronized junction-transfer classes:
/// 12 directional shifts (ordered leg pairs) and 6 swaps (unordered pairs,
/// stored with from < to).
struct JTClass {
  enum class Kind : std::uint8_t { Shift, Swap };

  Kind kind;
  Leg from;
  Leg to;

  bool operator==(const JTClass& o) const {
    return kind == o.kind && from == o.from && to == o.to;
  }

  std::string name() const {
    std::string s = kind == Kind::Shift ? "shift:" : "swap:";
    s += to_string(from);
    s += kind == Kind::Shift ? ">" : "-";
    s += to_string(to);
    return s;
  }
};

/// All 18 classes in a fixed order: shifts lexicographic by (from, to),
/// then swaps lexicographic by the unordered pair.
inline const std::vector<JTClass>& enumerate_jt_classes() {
  static const std::vector<JTClass> classes = [] {
    std::vector<JTClass> v;
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b)
        if (a != b)
          v.push_back({JTClass::Kind::Shift, Leg(a), Leg(b)});
    for (int a = 0; a < 4; ++a)
      for (int b = a + 1; b < 4; ++b)
        v.push_back({JTClass::Kind::Swap, Leg(a), Leg(b)});
    return v;
  }();
  return classes;
}

inline JTClass jt_class_from_name(const std::string& name) {
  for (const JTClass& c : enumerate_jt_classes())
    if (c.name() == name) return c;
  throw InputError("unknown JT class '" + name + "'");
}

}  // namespace fluxtrap
