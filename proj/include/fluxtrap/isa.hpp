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

#include <algorithm>
#include <string>
#include <variant>
#include <vector>

#include "fluxtrap/arch.hpp"
#include "fluxtrap/gates.hpp"

namespace fluxtrap {

// ---------------------------------------------------------------------------
// Instruction set
// ---------------------------------------------------------------------------

struct Gate1Q {
  QubitId qubit;
  GateKind gate;
  double param = 0.0;
  GateId gate_index = kNoGate;
};

/// Two-qubit gate. The adjacent form folds the shift-in / shift-out of the
/// partner ion into the gate's effective latency; the co-located form is the
/// bare gate. The compiler only ever emits the adjacent form since each
/// position holds at most one ion.
struct Gate2Q {
  QubitId q1;
  QubitId q2;
  GateKind gate;
  double param = 0.0;
  GateId gate_index = kNoGate;
  bool colocated = false;
};

struct MeasureOp {
  QubitId qubit;
  GateId gate_index = kNoGate;
};

struct IntraShift {
  TrapId trap;
  int src_index;
  int dst_index;  // must be src_index +- 1
};

struct IntraSwap {
  TrapId trap;
  int index;  // swaps index and index+1
};

/// Grouped shift of a contiguous run of ions by one step, costing a single
/// shift latency regardless of width. base_index is the lowest run index.
struct S3 {
  TrapId trap;
  ShiftDir dir;
  int base_index;
  int width;

  int head_index() const {
    return dir == ShiftDir::Right ? base_index + width - 1 : base_index;
  }
  int dest_index() const { return head_index() + dir_step(dir); }
};

/// Globally synchronized junction transfer: one class, applied at every
/// participating junction simultaneously. Junction ids are kept sorted.
struct JTSimd {
  JTClass cls;
  std::vector<JunctionId> junctions;
};

using Instruction =
    std::variant<Gate1Q, Gate2Q, MeasureOp, IntraShift, IntraSwap, S3, JTSimd>;

// ---------------------------------------------------------------------------
// Latency
// ---------------------------------------------------------------------------

/// Effective latency in microseconds. S3 and JT-SIMD are width independent:
/// one instruction costs one transport latency no matter how many ions ride
/// it. The adjacent two-qubit form costs gate + shift-in + shift-out.
inline TimeUs instruction_latency(const Instruction& instr,
                                  const OpTable& table) {
  struct Visitor {
    const OpTable& t;
    TimeUs operator()(const Gate1Q&) const { return t.gate1q.latency_us; }
    TimeUs operator()(const Gate2Q& g) const {
      return g.colocated ? t.gate2q.latency_us
                         : t.gate2q.latency_us + 2 * t.intra_shift.latency_us;
    }
    TimeUs operator()(const MeasureOp&) const { return t.measure.latency_us; }
    TimeUs operator()(const IntraShift&) const {
      return t.intra_shift.latency_us;
    }
    TimeUs operator()(const S3&) const { return t.intra_shift.latency_us; }
    TimeUs operator()(const IntraSwap&) const { return t.intra_swap.latency_us; }
    TimeUs operator()(const JTSimd& j) const {
      return j.cls.kind == JTClass::Kind::Shift ? t.inter_shift.latency_us
                                                : t.inter_swap.latency_us;
    }
  };
  return std::visit(Visitor{table}, instr);
}

// ---------------------------------------------------------------------------
// Validation
// ---------------------------------------------------------------------------

struct Violation {
  std::string rule;
  std::string detail;
};

namespace detail {

inline void check_trap_index(const PositionGraph& g, TrapId t, int index,
                             std::vector<Violation>& out) {
  if (t < 0 || t >= static_cast<TrapId>(g.traps.size()))
    out.push_back({"trap range", "trap " + std::to_string(t)});
  else if (index < 0 || index >= g.capacity())
    out.push_back({"index range", "index " + std::to_string(index)});
}

}  // namespace detail

/// Checks an instruction against the current graph state without mutating.
/// Returns the list of violated rules (empty means legal).
inline std::vector<Violation> validate(const Instruction& instr,
                                       const PositionGraph& g) {
  std::vector<Violation> v;

  auto require_in_zone = [&](QubitId q) {
    PositionId p = g.position_of(q);
    if (p == kNoPosition) {
      v.push_back({"qubit placed", "qubit " + std::to_string(q)});
    } else if (!g.is_gate_zone(p)) {
      v.push_back({"not in gate zone", "qubit " + std::to_string(q)});
    }
  };

  struct Visitor {
    const PositionGraph& g;
    std::vector<Violation>& v;
    decltype(require_in_zone)& in_zone;

    void operator()(const Gate1Q& i) const { in_zone(i.qubit); }

    void operator()(const MeasureOp& i) const { in_zone(i.qubit); }

    void operator()(const Gate2Q& i) const {
      PositionId p1 = g.position_of(i.q1);
      PositionId p2 = g.position_of(i.q2);
      if (p1 == kNoPosition || p2 == kNoPosition) {
        v.push_back({"qubit placed", "2Q gate"});
        return;
      }
      if (i.colocated) {
        // One ion per slot makes true co-location unrepresentable; the
        // 25us form can never be justified by a reachable state.
        v.push_back({"not co-located", "positions differ"});
        return;
      }
      const Position& a = g.at(p1);
      const Position& b = g.at(p2);
      if (a.trap != b.trap) {
        v.push_back({"same trap", "2Q gate spans traps"});
        return;
      }
      if (std::abs(a.index - b.index) != 1)
        v.push_back({"adjacent", "2Q qubits not adjacent"});
      if (a.kind != ZoneKind::GateZone && b.kind != ZoneKind::GateZone)
        v.push_back({"not in gate zone", "2Q gate"});
    }

    void operator()(const IntraShift& i) const {
      detail::check_trap_index(g, i.trap, i.src_index, v);
      detail::check_trap_index(g, i.trap, i.dst_index, v);
      if (!v.empty()) return;
      if (std::abs(i.src_index - i.dst_index) != 1)
        v.push_back({"adjacent", "shift must move one step"});
      PositionId src = g.position_id(i.trap, i.src_index);
      PositionId dst = g.position_id(i.trap, i.dst_index);
      if (g.vacant(src)) v.push_back({"source occupied", "intra shift"});
      if (!g.vacant(dst)) v.push_back({"destination occupied", "intra shift"});
    }

    void operator()(const IntraSwap& i) const {
      detail::check_trap_index(g, i.trap, i.index, v);
      detail::check_trap_index(g, i.trap, i.index + 1, v);
      if (!v.empty()) return;
      if (g.vacant(g.position_id(i.trap, i.index)) ||
          g.vacant(g.position_id(i.trap, i.index + 1)))
        v.push_back({"both occupied", "intra swap"});
    }

    void operator()(const S3& i) const {
      if (i.width < 1) {
        v.push_back({"width", "S3 width must be >= 1"});
        return;
      }
      detail::check_trap_index(g, i.trap, i.base_index, v);
      detail::check_trap_index(g, i.trap, i.base_index + i.width - 1, v);
      if (!v.empty()) return;
      if (i.dest_index() < 0 || i.dest_index() >= g.capacity()) {
        v.push_back({"dest in trap", "S3 run head at trap end"});
        return;
      }
      for (int k = 0; k < i.width; ++k)
        if (g.vacant(g.position_id(i.trap, i.base_index + k))) {
          v.push_back({"contiguous", "S3 run has a vacant slot"});
          return;
        }
      if (!g.vacant(g.position_id(i.trap, i.dest_index())))
        v.push_back({"destination occupied", "S3 head destination"});
    }

    void operator()(const JTSimd& i) const {
      std::vector<PositionId> touched;
      JunctionId prev = -1;
      for (JunctionId jid : i.junctions) {
        if (jid <= prev)
          v.push_back({"junction order", "participants must be sorted unique"});
        prev = jid;
        if (jid < 0 || jid >= static_cast<JunctionId>(g.junctions.size())) {
          v.push_back({"junction range", std::to_string(jid)});
          continue;
        }
        const Junction& j = g.junctions[jid];
        PositionId a = j.leg_end[static_cast<int>(i.cls.from)];
        PositionId b = j.leg_end[static_cast<int>(i.cls.to)];
        if (i.cls.kind == JTClass::Kind::Shift) {
          if (g.vacant(a))
            v.push_back({"source occupied",
                         "junction " + std::to_string(jid) + " source leg"});
          if (!g.vacant(b))
            v.push_back({"destination occupied",
                         "junction " + std::to_string(jid) + " dest leg"});
        } else {
          if (g.vacant(a) || g.vacant(b))
            v.push_back({"both occupied",
                         "junction " + std::to_string(jid) + " swap ends"});
        }
        touched.push_back(a);
        touched.push_back(b);
      }
      std::sort(touched.begin(), touched.end());
      if (std::adjacent_find(touched.begin(), touched.end()) != touched.end())
        v.push_back({"participants overlap", "shared trap-end position"});
    }
  };

  std::visit(Visitor{g, v, require_in_zone}, instr);
  return v;
}

// ---------------------------------------------------------------------------
// State transition
// ---------------------------------------------------------------------------

class ValidationError : public std::runtime_error {
 public:
  ValidationError(std::string msg, std::vector<Violation> violations)
      : std::runtime_error(std::move(msg)), violations(std::move(violations)) {}
  std::vector<Violation> violations;
};

/// Applies a legal instruction to the graph's occupancy. Gates and measures
/// leave occupancy unchanged; transports move or exchange occupants. Throws
/// ValidationError when the precondition fails.
inline void apply(const Instruction& instr, PositionGraph& g) {
  std::vector<Violation> violations = validate(instr, g);
  if (!violations.empty()) {
    std::string msg = "apply: illegal instruction:";
    for (const Violation& x : violations) msg += " [" + x.rule + "]";
    throw ValidationError(msg, std::move(violations));
  }

  struct Visitor {
    PositionGraph& g;
    void operator()(const Gate1Q&) const {}
    void operator()(const Gate2Q&) const {}
    void operator()(const MeasureOp&) const {}
    void operator()(const IntraShift& i) const {
      g.move_occupant(g.position_id(i.trap, i.src_index),
                      g.position_id(i.trap, i.dst_index));
    }
    void operator()(const IntraSwap& i) const {
      g.swap_occupants(g.position_id(i.trap, i.index),
                       g.position_id(i.trap, i.index + 1));
    }
    void operator()(const S3& i) const {
      // head first, walking back through freed slots
      int step = dir_step(i.dir);
      int head = i.head_index();
      for (int k = 0; k < i.width; ++k) {
        int idx = head - k * step;
        g.move_occupant(g.position_id(i.trap, idx),
                        g.position_id(i.trap, idx + step));
      }
    }
    void operator()(const JTSimd& i) const {
      for (JunctionId jid : i.junctions) {
        const Junction& j = g.junctions[jid];
        PositionId a = j.leg_end[static_cast<int>(i.cls.from)];
        PositionId b = j.leg_end[static_cast<int>(i.cls.to)];
        if (i.cls.kind == JTClass::Kind::Shift)
          g.move_occupant(a, b);
        else
          g.swap_occupants(a, b);
      }
    }
  };
  std::visit(Visitor{g}, instr);
}

// ---------------------------------------------------------------------------
// Footprints
// ---------------------------------------------------------------------------

/// Positions an instruction occupies for its whole duration: qubit slots for
/// gates, sources plus destinations for transports.
inline std::vector<PositionId> touched_positions(const Instruction& instr,
                                                 const PositionGraph& g) {
  struct Visitor {
    const PositionGraph& g;
    std::vector<PositionId> operator()(const Gate1Q& i) const {
      return {g.position_of(i.qubit)};
    }
    std::vector<PositionId> operator()(const Gate2Q& i) const {
      return {g.position_of(i.q1), g.position_of(i.q2)};
    }
    std::vector<PositionId> operator()(const MeasureOp& i) const {
      return {g.position_of(i.qubit)};
    }
    std::vector<PositionId> operator()(const IntraShift& i) const {
      return {g.position_id(i.trap, i.src_index),
              g.position_id(i.trap, i.dst_index)};
    }
    std::vector<PositionId> operator()(const IntraSwap& i) const {
      return {g.position_id(i.trap, i.index),
              g.position_id(i.trap, i.index + 1)};
    }
    std::vector<PositionId> operator()(const S3& i) const {
      std::vector<PositionId> out;
      for (int k = 0; k < i.width; ++k)
        out.push_back(g.position_id(i.trap, i.base_index + k));
      out.push_back(g.position_id(i.trap, i.dest_index()));
      return out;
    }
    std::vector<PositionId> operator()(const JTSimd& i) const {
      std::vector<PositionId> out;
      for (JunctionId jid : i.junctions) {
        const Junction& j = g.junctions[jid];
        out.push_back(j.leg_end[static_cast<int>(i.cls.from)]);
        out.push_back(j.leg_end[static_cast<int>(i.cls.to)]);
      }
      return out;
    }
  };
  return std::visit(Visitor{g}, instr);
}

/// Qubits bound by an instruction (the engaged set contribution). Must be
/// computed against the pre-application state.
inline std::vector<QubitId> touched_qubits(const Instruction& instr,
                                           const PositionGraph& g) {
  struct Visitor {
    const PositionGraph& g;
    std::vector<QubitId> operator()(const Gate1Q& i) const { return {i.qubit}; }
    std::vector<QubitId> operator()(const Gate2Q& i) const {
      return {i.q1, i.q2};
    }
    std::vector<QubitId> operator()(const MeasureOp& i) const {
      return {i.qubit};
    }
    std::vector<QubitId> operator()(const IntraShift& i) const {
      return {g.occupant(g.position_id(i.trap, i.src_index))};
    }
    std::vector<QubitId> operator()(const IntraSwap& i) const {
      return {g.occupant(g.position_id(i.trap, i.index)),
              g.occupant(g.position_id(i.trap, i.index + 1))};
    }
    std::vector<QubitId> operator()(const S3& i) const {
      std::vector<QubitId> out;
      for (int k = 0; k < i.width; ++k)
        out.push_back(g.occupant(g.position_id(i.trap, i.base_index + k)));
      return out;
    }
    std::vector<QubitId> operator()(const JTSimd& i) const {
      std::vector<QubitId> out;
      for (JunctionId jid : i.junctions) {
        const Junction& j = g.junctions[jid];
        QubitId a = g.occupant(j.leg_end[static_cast<int>(i.cls.from)]);
        QubitId b = g.occupant(j.leg_end[static_cast<int>(i.cls.to)]);
        if (a != kVacant) out.push_back(a);
        if (b != kVacant) out.push_back(b);
      }
      return out;
    }
  };
  return std::visit(Visitor{g}, instr);
}

}  // namespace fluxtrap
