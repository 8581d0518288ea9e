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

#include <limits>
#include <vector>

#include "fluxtrap/arch.hpp"
#include "fluxtrap/circuit.hpp"
#include "json.hpp"

namespace fluxtrap {

struct HeuristicConfig {
  double alpha = 0.3;          // weight of the inter-qubit distance term
  int lookahead_gates = 20;    // cap on gates scored per cycle
  int congestion_patience = 50;  // cycles before a zone is re-picked
  int zone_load_beta = 2;      // steps of penalty per outstanding assignment
  double lookahead_weight = 0.5;  // weight of second-level gates
  double inter_gain_factor = 2.0;  // switch rule factor
};

/// Costs are sums of small rational weights; comparisons that the contract
/// pins as strict (the switch rule ties to intra, a chain head must strictly
/// improve) use this slack so binary rounding cannot flip them.
constexpr double kCostEps = 1e-9;

inline nlohmann::ordered_json to_json(const HeuristicConfig& c) {
  nlohmann::ordered_json j;
  j["alpha"] = c.alpha;
  j["lookahead_gates"] = c.lookahead_gates;
  j["congestion_patience"] = c.congestion_patience;
  j["zone_load_beta"] = c.zone_load_beta;
  j["lookahead_weight"] = c.lookahead_weight;
  j["inter_gain_factor"] = c.inter_gain_factor;
  return j;
}

inline void heuristic_config_from_json(HeuristicConfig& c,
                                       const nlohmann::json& j) {
  if (j.contains("alpha")) c.alpha = j.at("alpha").get<double>();
  if (j.contains("lookahead_gates"))
    c.lookahead_gates = j.at("lookahead_gates").get<int>();
  if (j.contains("congestion_patience"))
    c.congestion_patience = j.at("congestion_patience").get<int>();
  if (j.contains("zone_load_beta"))
    c.zone_load_beta = j.at("zone_load_beta").get<int>();
  if (j.contains("lookahead_weight"))
    c.lookahead_weight = j.at("lookahead_weight").get<double>();
  if (j.contains("inter_gain_factor"))
    c.inter_gain_factor = j.at("inter_gain_factor").get<double>();
  if (c.alpha < 0) throw InputError("heuristic: alpha must be >= 0");
}

/// Target gate zone per pending gate plus per-zone outstanding load.
///
/// A gate is assigned a zone once and keeps it; the assignment is re-picked
/// only after the gate has waited in the front layer longer than
/// congestion_patience cycles. Load counts assignments of gates that have not
/// started yet, so popular zones get deprioritized for later gates.
class ZoneAssignment {
 public:
  ZoneAssignment(GateId n_gates, PositionId n_positions)
      : target_(n_gates, kNoPosition),
        entered_(n_gates, -1),
        load_(n_positions, 0) {}

  PositionId target(GateId g) const { return target_[g]; }
  const std::vector<int>& load() const { return load_; }

  void note_entered(GateId g, std::int64_t cycle) {
    if (entered_[g] < 0) entered_[g] = cycle;
  }
  std::int64_t entered(GateId g) const { return entered_[g]; }
  std::int64_t age(GateId g, std::int64_t cycle) const {
    return entered_[g] < 0 ? 0 : cycle - entered_[g];
  }

  /// Ensures g has a target zone; picks the load-penalized nearest zone.
  void assign(GateId g, const CircuitOp& op, const PositionGraph& graph,
              int beta) {
    if (target_[g] != kNoPosition) return;
    target_[g] = pick_zone(op, graph, beta);
    ++load_[target_[g]];
  }

  /// Load-aware re-pick once a gate has aged past `patience`; resets its age.
  /// Returns true when a reassignment happened.
  bool maybe_reassign(GateId g, const CircuitOp& op, const PositionGraph& graph,
                      int beta, std::int64_t cycle, int patience) {
    if (target_[g] == kNoPosition) return false;
    if (age(g, cycle) <= patience) return false;
    --load_[target_[g]];
    PositionId fresh = pick_zone(op, graph, beta);
    target_[g] = fresh;
    ++load_[fresh];
    entered_[g] = cycle;
    return true;
  }

  /// Drops g's load contribution once the gate starts executing.
  void release(GateId g) {
    if (target_[g] != kNoPosition) {
      --load_[target_[g]];
      target_[g] = kNoPosition;
    }
  }

 private:
  PositionId pick_zone(const CircuitOp& op, const PositionGraph& graph,
                       int beta) const {
    PositionId best = kNoPosition;
    long long best_score = std::numeric_limits<long long>::max();
    PositionId p0 = graph.position_of(op.q0);
    PositionId p1 = op.arity() == 2 ? graph.position_of(op.q1) : kNoPosition;
    // Single-qubit work stays in the qubit's own trap: every trap has a
    // zone, and junction transfers only ever carry ions of pending
    // two-qubit gates, so a cross-trap pick could never be delivered.
    TrapId only_trap = op.arity() == 1 ? graph.at(p0).trap : -1;
    for (PositionId z : graph.gate_zones()) {
      if (only_trap >= 0 && graph.at(z).trap != only_trap) continue;
      long long score = graph.distance(p0, z);
      if (p1 != kNoPosition) score += graph.distance(p1, z);
      score += static_cast<long long>(beta) * load_[z];
      if (score < best_score) {
        best_score = score;
        best = z;
      }
    }
    return best;
  }

  std::vector<PositionId> target_;
  std::vector<std::int64_t> entered_;
  std::vector<int> load_;
};

/// Gate sets scored in one scheduling cycle: eligible front-layer gates at
/// full weight plus second-level gates at lookahead_weight, capped at
/// lookahead_gates in total. The engaged-qubit exclusion applies to the
/// front layer only: a second-level gate whose predecessor is mid-flight is
/// exactly the one transport should be staging for. Under persistent
/// congestion only front gates at least as old as the oldest starving one
/// are kept.
struct CycleContext {
  std::vector<GateId> front_gates;
  std::vector<std::pair<GateId, double>> next_gates;  // gate, weight
  // qubit -> (gate, weight) memberships over the whole window
  std::vector<std::vector<std::pair<GateId, double>>> qubit_gates;
  bool congested = false;
};

inline CycleContext build_cycle_context(const DependencyDAG& dag,
                                        const ZoneAssignment& za,
                                        const std::vector<char>& engaged,
                                        const HeuristicConfig& cfg,
                                        std::int64_t cycle) {
  CycleContext ctx;
  auto is_engaged = [&](const CircuitOp& op) {
    if (engaged[op.q0]) return true;
    return op.arity() == 2 && engaged[op.q1];
  };

  std::int64_t oldest_blocked = -1;
  for (GateId g : dag.front()) {
    if (is_engaged(dag.op(g))) continue;
    if (za.age(g, cycle) > cfg.congestion_patience)
      if (oldest_blocked < 0 || za.entered(g) < oldest_blocked)
        oldest_blocked = za.entered(g);
  }
  ctx.congested = oldest_blocked >= 0;

  for (GateId g : dag.front()) {
    if (static_cast<int>(ctx.front_gates.size()) >= cfg.lookahead_gates) break;
    if (is_engaged(dag.op(g))) continue;
    if (ctx.congested && za.entered(g) > oldest_blocked) continue;
    ctx.front_gates.push_back(g);
  }
  if (!ctx.congested) {
    for (GateId g : dag.second_level()) {
      if (static_cast<int>(ctx.front_gates.size() + ctx.next_gates.size()) >=
          cfg.lookahead_gates)
        break;
      ctx.next_gates.emplace_back(g, cfg.lookahead_weight);
    }
  }

  ctx.qubit_gates.resize(dag.circuit().n_qubits);
  for (GateId g : ctx.front_gates) {
    const CircuitOp& op = dag.op(g);
    ctx.qubit_gates[op.q0].emplace_back(g, 1.0);
    if (op.arity() == 2) ctx.qubit_gates[op.q1].emplace_back(g, 1.0);
  }
  for (auto [g, w] : ctx.next_gates) {
    const CircuitOp& op = dag.op(g);
    ctx.qubit_gates[op.q0].emplace_back(g, w);
    if (op.arity() == 2) ctx.qubit_gates[op.q1].emplace_back(g, w);
  }
  return ctx;
}

/// Eq.-1 term of one gate: summed distance of its qubits to the target zone,
/// plus alpha * inter-qubit distance for two-qubit gates.
inline double gate_cost_term(const PositionGraph& graph, const CircuitOp& op,
                             PositionId zone, double alpha) {
  PositionId p0 = graph.position_of(op.q0);
  double term = graph.distance(p0, zone);
  if (op.arity() == 2) {
    PositionId p1 = graph.position_of(op.q1);
    term += graph.distance(p1, zone);
    term += alpha * graph.distance(p0, p1);
  }
  return term;
}

/// Front-layer cost (Eq. 1) on the given occupancy.
inline double front_cost(const PositionGraph& graph, const DependencyDAG& dag,
                         const ZoneAssignment& za, const CycleContext& ctx,
                         const HeuristicConfig& cfg) {
  double total = 0.0;
  for (GateId g : ctx.front_gates)
    total += gate_cost_term(graph, dag.op(g), za.target(g), cfg.alpha);
  return total;
}

/// Scheduling cost: Eq. 1 over the front layer plus the geometrically
/// down-weighted lookahead terms. This is the quantity the aggregation
/// passes and the switch rule compare.
inline double lookahead_cost(const PositionGraph& graph,
                             const DependencyDAG& dag, const ZoneAssignment& za,
                             const CycleContext& ctx,
                             const HeuristicConfig& cfg) {
  double total = front_cost(graph, dag, za, ctx, cfg);
  for (auto [g, w] : ctx.next_gates)
    total += w * gate_cost_term(graph, dag.op(g), za.target(g), cfg.alpha);
  return total;
}

/// Cost change if `qubit` alone moved from its current slot to `to`.
/// Positive means the layout got worse. Only the mover's gate terms can
/// change, so this stays cheap inside the aggregation search.
inline double move_delta(const PositionGraph& graph, const DependencyDAG& dag,
                         const ZoneAssignment& za, const CycleContext& ctx,
                         const HeuristicConfig& cfg, QubitId qubit,
                         PositionId to) {
  double delta = 0.0;
  PositionId from = graph.position_of(qubit);
  for (auto [g, w] : ctx.qubit_gates[qubit]) {
    const CircuitOp& op = dag.op(g);
    PositionId zone = za.target(g);
    delta += w * (graph.distance(to, zone) - graph.distance(from, zone));
    if (op.arity() == 2) {
      QubitId other = op.q0 == qubit ? op.q1 : op.q0;
      PositionId po = graph.position_of(other);
      delta += w * cfg.alpha *
               (graph.distance(to, po) - graph.distance(from, po));
    }
  }
  return delta;
}

}  // namespace fluxtrap
