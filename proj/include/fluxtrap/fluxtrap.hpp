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

#include "fluxtrap/aggregation.hpp"
#include "fluxtrap/arch.hpp"
#include "fluxtrap/circuit.hpp"
#include "fluxtrap/circuit_io.hpp"
#include "fluxtrap/generators.hpp"
#include "fluxtrap/heuristic.hpp"
#include "fluxtrap/isa.hpp"
#include "fluxtrap/metrics.hpp"
#include "fluxtrap/scheduler.hpp"
#include "fluxtrap/validator.hpp"

namespace fluxtrap {

struct CompileResult {
  Schedule schedule;
  Metrics metrics;
};

/// Compiles a circuit onto the machine and reports schedule plus metrics.
inline CompileResult compile(const Circuit& circuit, const PositionGraph& graph,
                             const std::vector<PositionId>& placement,
                             Policy policy, const HeuristicConfig& cfg) {
  CompileResult r;
  r.schedule = compile_schedule(circuit, graph, placement, policy, cfg);
  r.metrics = compute_metrics(r.schedule, circuit.n_qubits, graph.spec);
  return r;
}

/// Text gantt: one row per trap plus a junction row, time-proportional
/// blocks. 'G' gate, 'M' measure, 's' shift, 'S' swap, 'J' junction transfer.
inline std::string render_gantt(const Schedule& s, const PositionGraph& graph,
                                int width = 100) {
  if (s.total_time <= 0 || width <= 0) return "(empty schedule)\n";
  std::vector<std::string> rows(graph.traps.size() + 1,
                                std::string(width, '.'));
  auto paint = [&](std::size_t row, TimeUs t0, TimeUs t1, char ch) {
    int a = static_cast<int>(t0 * width / s.total_time);
    int b = static_cast<int>(t1 * width / s.total_time);
    if (b <= a) b = a + 1;
    for (int k = a; k < b && k < width; ++k) rows[row][k] = ch;
  };
  for (const ScheduleEvent& e : s.events) {
    // positions recorded at event start identify the trap even after moves
    char ch = 'G';
    std::size_t row = graph.traps.size();
    if (std::holds_alternative<JTSimd>(e.instr)) {
      ch = 'J';
    } else {
      row = static_cast<std::size_t>(graph.at(e.positions[0]).trap);
      if (std::holds_alternative<MeasureOp>(e.instr)) ch = 'M';
      if (std::holds_alternative<IntraShift>(e.instr) ||
          std::holds_alternative<S3>(e.instr))
        ch = 's';
      if (std::holds_alternative<IntraSwap>(e.instr)) ch = 'S';
    }
    paint(row, e.t, e.t + e.dur, ch);
  }
  std::string out;
  for (std::size_t t = 0; t < graph.traps.size(); ++t) {
    char label[32];
    std::snprintf(label, sizeof label, "trap %3zu |", t);
    out += label;
    out += rows[t];
    out += "|\n";
  }
  out += "junction |" + rows.back() + "|\n";
  char foot[64];
  std::snprintf(foot, sizeof foot, "total %lld us\n",
                static_cast<long long>(s.total_time));
  out += foot;
  return out;
}

}  // namespace fluxtrap
