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
#include <set>
#include <string>
#include <vector>

#include "fluxtrap/common.hpp"
#include "fluxtrap/gates.hpp"

namespace fluxtrap {

struct CircuitOp {
  GateKind kind;
  QubitId q0;
  QubitId q1 = -1;  // second operand for two-qubit gates
  double param = 0.0;

  int arity() const { return is_two_qubit(kind) ? 2 : 1; }
  bool touches(QubitId q) const { return q0 == q || (arity() == 2 && q1 == q); }
};

struct Circuit {
  int n_qubits = 0;
  std::vector<CircuitOp> ops;

  void validate() const {
    if (n_qubits < 0) throw InputError("circuit: negative qubit count");
    for (const CircuitOp& op : ops) {
      if (op.q0 < 0 || op.q0 >= n_qubits ||
          (op.arity() == 2 && (op.q1 < 0 || op.q1 >= n_qubits)))
        throw InputError("circuit: qubit index out of range");
      if (op.arity() == 2 && op.q0 == op.q1)
        throw InputError("circuit: two-qubit gate on identical qubits");
    }
  }
};

/// Gate dependency graph with a maintained front layer.
///
/// Edges are strict per-qubit program order: each gate depends on the previous
/// gate touching each of its qubits. The front layer F is exactly the set of
/// gates whose predecessors have all completed.
class DependencyDAG {
 public:
  explicit DependencyDAG(const Circuit& c) : circuit_(&c) {
    c.validate();
    const GateId n = static_cast<GateId>(c.ops.size());
    succ_.resize(n);
    pred_.resize(n);
    indegree_.assign(n, 0);
    done_.assign(n, false);
    std::vector<GateId> last(c.n_qubits, kNoGate);
    for (GateId g = 0; g < n; ++g) {
      const CircuitOp& op = c.ops[g];
      for (int s = 0; s < op.arity(); ++s) {
        QubitId q = s == 0 ? op.q0 : op.q1;
        if (last[q] != kNoGate) {
          succ_[last[q]].push_back(g);
          pred_[g].push_back(last[q]);
          ++indegree_[g];
        }
        last[q] = g;
      }
    }
    for (GateId g = 0; g < n; ++g)
      if (indegree_[g] == 0) front_.insert(g);
  }

  const Circuit& circuit() const { return *circuit_; }
  const CircuitOp& op(GateId g) const { return circuit_->ops[g]; }

  const std::set<GateId>& front() const { return front_; }
  bool finished() const { return completed_ == static_cast<GateId>(done_.size()); }
  GateId remaining() const {
    return static_cast<GateId>(done_.size()) - completed_;
  }
  bool is_done(GateId g) const { return done_[g]; }
  const std::vector<GateId>& predecessors(GateId g) const { return pred_[g]; }

  /// Gates one level behind the front: all their unfinished predecessors are
  /// currently in F. In gate id order.
  std::vector<GateId> second_level() const {
    std::vector<GateId> out;
    std::set<GateId> seen;
    for (GateId f : front_)
      for (GateId s : succ_[f]) {
        if (seen.count(s)) continue;
        seen.insert(s);
        bool ready_next = true;
        for (GateId p : pred_[s])
          if (!done_[p] && !front_.count(p)) ready_next = false;
        if (ready_next) out.push_back(s);
      }
    std::sort(out.begin(), out.end());
    return out;
  }


  /// Marks a front-layer gate complete and promotes newly released gates.
  /// Returns the gates that just entered F.
  std::vector<GateId> complete_gate(GateId g) {
    if (!front_.count(g))
      throw InputError("complete_gate: gate not in front layer");
    front_.erase(g);
    done_[g] = true;
    ++completed_;
    std::vector<GateId> released;
    for (GateId s : succ_[g]) {
      if (--indegree_[s] == 0) {
        front_.insert(s);
        released.push_back(s);
      }
    }
    return released;
  }

 private:
  const Circuit* circuit_;
  std::vector<std::vector<GateId>> succ_;
  std::vector<std::vector<GateId>> pred_;
  std::vector<int> indegree_;
  std::vector<bool> done_;
  std::set<GateId> front_;
  GateId completed_ = 0;
};

inline DependencyDAG build_dag(const Circuit& c) { return DependencyDAG(c); }

}  // namespace fluxtrap
