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
#include <map>
#include <string>
#include <vector>

#include "fluxtrap/circuit.hpp"
#include "fluxtrap/scheduler.hpp"

namespace fluxtrap {

struct ScheduleViolation {
  TimeUs t;
  std::string rule;
  std::string detail;
};

/// Brute-force replay oracle for schedules, deliberately independent of the
/// compile loop: it rebuilds the machine from the spec and initial placement,
/// replays every event in start order, and cross-checks
///   - per-position and per-qubit interval exclusivity,
///   - intra/inter mode exclusivity and the single-JT-at-a-time rule,
///   - per-event ISA legality on the replayed pre-state,
///   - that executed gates cover the circuit exactly once, in dependency
///     order, with matching operands,
///   - the recorded total time.
inline std::vector<ScheduleViolation> validate_schedule(
    const Schedule& schedule, const HardwareSpec& spec, const Circuit& circuit,
    const std::vector<PositionId>& placement) {
  std::vector<ScheduleViolation> out;
  auto flag = [&](TimeUs t, const std::string& rule, const std::string& detail) {
    out.push_back({t, rule, detail});
  };

  PositionGraph graph = build_grid(spec);
  if (static_cast<int>(placement.size()) != circuit.n_qubits) {
    flag(0, "placement", "placement does not cover circuit qubits");
    return out;
  }
  for (QubitId q = 0; q < circuit.n_qubits; ++q) {
    if (placement[q] < 0 ||
        placement[q] >= static_cast<PositionId>(graph.positions.size()) ||
        !graph.vacant(placement[q])) {
      flag(0, "placement", "qubit " + std::to_string(q) + " placement invalid");
      return out;
    }
    graph.place(q, placement[q]);
  }

  // stable start order
  std::vector<std::size_t> order(schedule.events.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return schedule.events[a].t < schedule.events[b].t;
  });

  // interval exclusivity per position and per qubit
  struct Interval {
    TimeUs start, end;
    std::size_t ev;
  };
  std::map<PositionId, std::vector<Interval>> by_position;
  std::map<QubitId, std::vector<Interval>> by_qubit;
  std::vector<Interval> intra_intervals, jt_intervals;

  for (std::size_t i : order) {
    const ScheduleEvent& e = schedule.events[i];
    if (e.t < 0 || e.dur <= 0) flag(e.t, "event time", "non-positive duration");
    for (PositionId p : e.positions) by_position[p].push_back({e.t, e.t + e.dur, i});
    for (QubitId q : e.qubits) by_qubit[q].push_back({e.t, e.t + e.dur, i});
    bool intra = std::holds_alternative<IntraShift>(e.instr) ||
                 std::holds_alternative<IntraSwap>(e.instr) ||
                 std::holds_alternative<S3>(e.instr);
    bool inter = std::holds_alternative<JTSimd>(e.instr);
    if (intra) intra_intervals.push_back({e.t, e.t + e.dur, i});
    if (inter) jt_intervals.push_back({e.t, e.t + e.dur, i});
  }

  auto check_pairwise = [&](std::vector<Interval>& v, const std::string& rule,
                            const std::string& what) {
    std::sort(v.begin(), v.end(),
              [](const Interval& a, const Interval& b) { return a.start < b.start; });
    for (std::size_t k = 1; k < v.size(); ++k)
      if (v[k].start < v[k - 1].end)
        flag(v[k].start, rule, what + " busy until " + std::to_string(v[k - 1].end));
  };
  for (auto& [p, v] : by_position)
    check_pairwise(v, "position overlap", "position " + std::to_string(p));
  for (auto& [q, v] : by_qubit)
    check_pairwise(v, "qubit overlap", "qubit " + std::to_string(q));
  check_pairwise(jt_intervals, "single JT-SIMD", "another junction transfer");

  for (const Interval& a : intra_intervals)
    for (const Interval& b : jt_intervals)
      if (a.start < b.end && b.start < a.end)
        flag(std::max(a.start, b.start), "mode exclusivity",
             "intra transport overlaps junction transfer");

  // replay: occupancy changes at event start, legality checked on pre-state
  std::vector<int> gate_seen(circuit.ops.size(), 0);
  std::vector<TimeUs> gate_start(circuit.ops.size(), -1);
  std::vector<TimeUs> gate_end(circuit.ops.size(), -1);
  for (std::size_t i : order) {
    const ScheduleEvent& e = schedule.events[i];
    for (const Violation& v : validate(e.instr, graph))
      flag(e.t, "isa: " + v.rule, v.detail);

    std::vector<QubitId> ions = touched_qubits(e.instr, graph);
    if (ions != e.qubits)
      flag(e.t, "ion record", "event qubit list does not match replayed state");

    GateId g = kNoGate;
    if (const Gate1Q* x = std::get_if<Gate1Q>(&e.instr)) g = x->gate_index;
    if (const Gate2Q* x = std::get_if<Gate2Q>(&e.instr)) g = x->gate_index;
    if (const MeasureOp* x = std::get_if<MeasureOp>(&e.instr)) g = x->gate_index;
    if (g != kNoGate) {
      if (g < 0 || g >= static_cast<GateId>(circuit.ops.size())) {
        flag(e.t, "gate coverage", "gate index out of range");
      } else {
        ++gate_seen[g];
        gate_start[g] = e.t;
        gate_end[g] = e.t + e.dur;
        const CircuitOp& op = circuit.ops[g];
        bool match = false;
        if (const Gate1Q* x = std::get_if<Gate1Q>(&e.instr))
          match = op.arity() == 1 && x->gate == op.kind && x->qubit == op.q0;
        if (const Gate2Q* x = std::get_if<Gate2Q>(&e.instr))
          match = op.arity() == 2 && x->gate == op.kind && x->q1 == op.q0 &&
                  x->q2 == op.q1;
        if (const MeasureOp* x = std::get_if<MeasureOp>(&e.instr))
          match = op.kind == GateKind::Measure && x->qubit == op.q0;
        if (!match) flag(e.t, "gate coverage", "event disagrees with circuit op");
      }
    }

    try {
      fluxtrap::apply(e.instr, graph);
    } catch (const ValidationError&) {
      // already reported through validate(); stop replaying to avoid a
      // corrupted state cascading into noise
      flag(e.t, "replay stopped", "state could not be advanced");
      return out;
    }
  }

  // gate coverage and dependency order
  std::vector<GateId> last(circuit.n_qubits, kNoGate);
  for (GateId g = 0; g < static_cast<GateId>(circuit.ops.size()); ++g) {
    if (gate_seen[g] != 1) {
      flag(schedule.total_time, "gate coverage",
           "gate " + std::to_string(g) + " executed " +
               std::to_string(gate_seen[g]) + " times");
      continue;
    }
    const CircuitOp& op = circuit.ops[g];
    for (int s = 0; s < op.arity(); ++s) {
      QubitId q = s == 0 ? op.q0 : op.q1;
      GateId prev = last[q];
      if (prev != kNoGate && gate_seen[prev] == 1 &&
          gate_start[g] < gate_end[prev])
        flag(gate_start[g], "dependency order",
             "gate " + std::to_string(g) + " starts before gate " +
                 std::to_string(prev) + " completes");
      last[q] = g;
    }
  }

  TimeUs recomputed = 0;
  for (const ScheduleEvent& e : schedule.events)
    recomputed = std::max(recomputed, e.t + e.dur);
  if (recomputed != schedule.total_time)
    flag(recomputed, "total time",
         "recorded " + std::to_string(schedule.total_time) + ", replayed " +
             std::to_string(recomputed));

  return out;
}

}  // namespace fluxtrap
