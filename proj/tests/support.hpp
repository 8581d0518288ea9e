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

// Test-side oracles. Everything here re-derives its answer from first
// principles (trap lists, junction wiring, the raw circuit) rather than going
// through the library's cached or incremental paths, so the tests stay
// meaningful cross-checks.

#pragma once

#include <algorithm>
#include <map>
#include <queue>
#include <set>
#include <vector>

#include "fluxtrap/fluxtrap.hpp"

namespace fluxtrap::testing {

/// Plain BFS over an adjacency list rebuilt from the graph topology: linear
/// intra-trap edges plus a clique over each junction's leg ends.
inline int bfs_distance(const PositionGraph& g, PositionId a, PositionId b) {
  std::vector<std::vector<PositionId>> adj(g.positions.size());
  for (const auto& trap : g.traps)
    for (std::size_t i = 0; i + 1 < trap.size(); ++i) {
      adj[trap[i]].push_back(trap[i + 1]);
      adj[trap[i + 1]].push_back(trap[i]);
    }
  for (const Junction& j : g.junctions)
    for (int x = 0; x < 4; ++x)
      for (int y = 0; y < 4; ++y)
        if (x != y && j.leg_end[x] != j.leg_end[y])
          adj[j.leg_end[x]].push_back(j.leg_end[y]);

  std::vector<int> dist(g.positions.size(), -1);
  std::queue<PositionId> q;
  dist[a] = 0;
  q.push(a);
  while (!q.empty()) {
    PositionId u = q.front();
    q.pop();
    if (u == b) return dist[u];
    for (PositionId v : adj[u])
      if (dist[v] < 0) {
        dist[v] = dist[u] + 1;
        q.push(v);
      }
  }
  return dist[b];
}

/// Front layer recomputed from scratch given the set of completed gates.
inline std::set<GateId> front_oracle(const Circuit& c,
                                     const std::set<GateId>& done) {
  std::set<GateId> front;
  for (GateId g = 0; g < static_cast<GateId>(c.ops.size()); ++g) {
    if (done.count(g)) continue;
    bool ready = true;
    for (GateId h = 0; h < g; ++h) {
      if (done.count(h)) continue;
      const CircuitOp& a = c.ops[h];
      const CircuitOp& b = c.ops[g];
      bool shares = a.touches(b.q0) || (b.arity() == 2 && a.touches(b.q1));
      if (shares) {
        ready = false;
        break;
      }
    }
    if (ready) front.insert(g);
  }
  return front;
}

/// Brute-force Eq.-1 evaluation: for each front-layer gate with no engaged
/// qubit, distance of its qubits to the given target zone plus
/// alpha * inter-qubit distance, everything measured with the BFS oracle.
inline double eq1_oracle(const PositionGraph& g, const Circuit& c,
                         const std::set<GateId>& done,
                         const std::set<QubitId>& engaged,
                         const std::map<GateId, PositionId>& zones,
                         double alpha) {
  double total = 0.0;
  for (GateId gate : front_oracle(c, done)) {
    const CircuitOp& op = c.ops[gate];
    if (engaged.count(op.q0)) continue;
    if (op.arity() == 2 && engaged.count(op.q1)) continue;
    PositionId z = zones.at(gate);
    double term = bfs_distance(g, g.position_of(op.q0), z);
    if (op.arity() == 2) {
      term += bfs_distance(g, g.position_of(op.q1), z);
      term += alpha * bfs_distance(g, g.position_of(op.q0), g.position_of(op.q1));
    }
    total += term;
  }
  return total;
}

/// Seeded random circuit over a mixed gate alphabet; used by the legality
/// and determinism property tests.
inline Circuit random_circuit(int n, int gates, std::uint64_t seed,
                              bool with_measure = true) {
  Rng rng(seed);
  Circuit c;
  c.n_qubits = n;
  for (int i = 0; i < gates; ++i) {
    int pick = static_cast<int>(rng.below(with_measure ? 10 : 9));
    if (pick < 4) {
      static const GateKind oneq[] = {GateKind::H, GateKind::X, GateKind::T,
                                      GateKind::Rz};
      GateKind k = oneq[rng.below(4)];
      c.ops.push_back({k, static_cast<QubitId>(rng.below(n)), -1,
                       has_param(k) ? rng.real01() : 0.0});
    } else if (pick < 9) {
      QubitId a = static_cast<QubitId>(rng.below(n));
      QubitId b = static_cast<QubitId>(rng.below(n - 1));
      if (b >= a) ++b;
      c.ops.push_back({GateKind::Cx, a, b});
    } else {
      c.ops.push_back({GateKind::Measure, static_cast<QubitId>(rng.below(n))});
    }
  }
  return c;
}

/// Small random hardware spec for property tests.
inline HardwareSpec random_spec(std::uint64_t seed) {
  Rng rng(seed);
  HardwareSpec spec;
  spec.grid_dim = 1 + static_cast<int>(rng.below(2));       // 1..2
  spec.trap_capacity = 2 + static_cast<int>(rng.below(5));  // 2..6
  spec.gate_zones_per_trap =
      1 + static_cast<int>(rng.below(std::min(spec.trap_capacity, 3)));
  return spec;
}

inline PositionGraph graph_with(const HardwareSpec& spec,
                                const std::vector<std::pair<QubitId, PositionId>>&
                                    placements) {
  PositionGraph g = build_grid(spec);
  for (auto [q, p] : placements) g.place(q, p);
  return g;
}

struct Scenario {
  HardwareSpec spec;
  Circuit circuit;
  std::vector<PositionId> placement;  // qubit -> position
  HeuristicConfig cfg;
};

/// Five-qubit junction-batching scenario (qubits named Q1..Q5 = 0..4).
///
/// Q1 must take two in-trap steps to reach its junction leg while Q4 already
/// waits at another leg of the same transfer class. The batching policy rides
/// both ions on one junction shift; the eager policy fires two separate
/// shifts, paying exactly one extra inter-shift latency.
inline Scenario fig6_scenario() {
  Scenario s;
  s.spec.grid_dim = 2;
  s.spec.trap_capacity = 3;
  s.spec.gate_zones_per_trap = 1;  // zone at index 1 of every trap

  s.circuit.n_qubits = 5;
  s.circuit.ops.push_back({GateKind::Cx, 1, 2});  // Q2-Q3, executable at once
  s.circuit.ops.push_back({GateKind::Cx, 3, 4});  // Q4-Q5, needs a transfer
  s.circuit.ops.push_back({GateKind::Cx, 0, 2});  // Q1-Q3, needs a transfer

  // traps: H(r,seg) = r*3+seg, V(col,seg) = 6+col*3+seg; position = trap*3+i
  auto pos = [](TrapId t, int i) { return t * 3 + i; };
  s.placement = {
      pos(6, 0),  // Q1 high in the north trap of junction (0,0)
      pos(0, 0),  // Q2 beside Q3
      pos(0, 1),  // Q3 on the zone of H(0,0)
      pos(9, 2),  // Q4 already at the north leg of junction (0,1)
      pos(1, 1),  // Q5 on the zone of H(0,1)
  };
  return s;
}

/// Five-qubit time-slicing scenario: a grouped shift and a gate fit inside
/// the shadow of a long swap, which depth-synchronized scheduling cannot see.
inline Scenario fig7_scenario() {
  Scenario s;
  s.spec.grid_dim = 1;
  s.spec.trap_capacity = 9;
  s.spec.gate_zones_per_trap = 2;  // zones {2, 5}

  s.circuit.n_qubits = 5;
  s.circuit.ops.push_back({GateKind::X, 3});      // 1Q on Q4
  s.circuit.ops.push_back({GateKind::Cx, 2, 3});  // Q3-Q4
  s.circuit.ops.push_back({GateKind::Cx, 0, 2});  // Q1-Q3
  s.circuit.ops.push_back({GateKind::Cx, 2, 4});  // Q3-Q5

  s.placement = {0, 1, 2, 5, 6};  // Q1 Q2 Q3 . . Q4 Q5 . .
  return s;
}

}  // namespace fluxtrap::testing
