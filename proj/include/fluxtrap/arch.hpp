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

#include <array>
#include <memory>
#include <optional>
#include <queue>
#include <string>
#include <vector>

#include "fluxtrap/common.hpp"
#include "fluxtrap/jt_class.hpp"
#include "fluxtrap/op_table.hpp"
#include "json.hpp"

namespace fluxtrap {

/// Machine description: a D x D junction grid whose every leg carries a 1D
/// trap of L positions, N_gz of them gate zones. Trap count is forced by the
/// topology to 2*D*(D+1).
struct HardwareSpec {
  int grid_dim = 2;
  int trap_capacity = 8;
  int gate_zones_per_trap = 2;
  double coherence_time_s = 600.0;
  OpTable op_table;

  void validate() const {
    if (grid_dim < 1) throw InputError("hardware: grid_dim must be >= 1");
    if (trap_capacity < 1)
      throw InputError("hardware: trap_capacity must be >= 1");
    if (gate_zones_per_trap < 1 || gate_zones_per_trap > trap_capacity)
      throw InputError("hardware: need 1 <= gate_zones_per_trap <= trap_capacity");
    if (coherence_time_s <= 0.0)
      throw InputError("hardware: coherence_time_s must be > 0");
    op_table.validate();
  }

  int trap_count() const { return 2 * grid_dim * (grid_dim + 1); }
  int position_count() const { return trap_count() * trap_capacity; }

  /// Gate zone indices within a trap: N zones separated by near-equal gaps,
  /// index_k = floor((k+1) * (L-N) / (N+1)) + k. For L=8, N=2 this places
  /// zones at {2, 5}.
  static std::vector<int> gate_zone_indices(int capacity, int zones) {
    std::vector<int> idx(zones);
    for (int k = 0; k < zones; ++k) {
      long long gap = static_cast<long long>(k + 1) * (capacity - zones);
      idx[k] = static_cast<int>(gap / (zones + 1)) + k;
    }
    return idx;
  }
};

enum class ZoneKind : std::uint8_t { GateZone, Auxiliary };

/// A physical ion slot.
struct Position {
  PositionId id;
  TrapId trap;
  int index;  // 0-based offset in the trap; 0 and L-1 are the trap ends
  ZoneKind kind;
  QubitId occupant = kVacant;
};

/// A four-leg junction. Junctions are pure connectors: ions are never inside
/// one, a transfer moves an ion directly between the attached trap ends.
struct Junction {
  JunctionId id;
  int row;
  int col;
  std::array<PositionId, 4> leg_end;  // indexed by Leg
};

/// Active connectivity mode: intra-trap edges only, or the junction edges of
/// a single JT class. Exactly one mode is active at any simulated instant.
struct GraphMode {
  std::optional<JTClass> inter;  // nullopt => intra mode

  bool is_intra() const { return !inter.has_value(); }
  bool operator==(const GraphMode& o) const {
    if (inter.has_value() != o.inter.has_value()) return false;
    return !inter.has_value() || *inter == *o.inter;
  }
};

/// Switchable position graph of the whole machine.
///
/// Positions are stored per trap in index order (id = trap * L + index), so
/// intra-trap adjacency is linear by construction. Occupancy is tracked on
/// both sides (position -> qubit, qubit -> position) and must always form a
/// partial bijection.
class PositionGraph {
 public:
  HardwareSpec spec;
  std::vector<Position> positions;
  std::vector<std::vector<PositionId>> traps;
  std::vector<Junction> junctions;
  GraphMode mode;

  int capacity() const { return spec.trap_capacity; }

  const Position& at(PositionId p) const { return positions[p]; }
  PositionId position_id(TrapId t, int index) const {
    return t * spec.trap_capacity + index;
  }

  QubitId occupant(PositionId p) const { return positions[p].occupant; }
  bool vacant(PositionId p) const { return positions[p].occupant == kVacant; }
  bool is_gate_zone(PositionId p) const {
    return positions[p].kind == ZoneKind::GateZone;
  }

  PositionId position_of(QubitId q) const {
    return q >= 0 && q < static_cast<QubitId>(qubit_pos_.size())
               ? qubit_pos_[q]
               : kNoPosition;
  }

  int placed_qubits() const { return placed_; }

  void place(QubitId q, PositionId p) {
    if (!vacant(p)) throw InputError("place: position already occupied");
    if (position_of(q) != kNoPosition)
      throw InputError("place: qubit already placed");
    if (q >= static_cast<QubitId>(qubit_pos_.size()))
      qubit_pos_.resize(q + 1, kNoPosition);
    positions[p].occupant = q;
    qubit_pos_[q] = p;
    ++placed_;
  }

  void remove(QubitId q) {
    PositionId p = position_of(q);
    if (p == kNoPosition) throw InputError("remove: qubit not placed");
    positions[p].occupant = kVacant;
    qubit_pos_[q] = kNoPosition;
    --placed_;
  }

  /// Moves the occupant of src to the vacant position dst.
  void move_occupant(PositionId src, PositionId dst) {
    QubitId q = positions[src].occupant;
    positions[src].occupant = kVacant;
    positions[dst].occupant = q;
    qubit_pos_[q] = dst;
  }

  void swap_occupants(PositionId a, PositionId b) {
    QubitId qa = positions[a].occupant;
    QubitId qb = positions[b].occupant;
    positions[a].occupant = qb;
    positions[b].occupant = qa;
    if (qa != kVacant) qubit_pos_[qa] = b;
    if (qb != kVacant) qubit_pos_[qb] = a;
  }

  /// Neighbors in the static union graph (all intra edges plus leg-to-leg
  /// junction cliques), independent of mode and occupancy. This is the graph
  /// the routing distance is measured on.
  const std::vector<PositionId>& union_neighbors(PositionId p) const {
    return union_adj_[p];
  }

  /// Edges enabled under the current mode, as directed (src, dst) pairs.
  /// Intra mode: both directions of every intra-trap edge. Inter mode:
  /// junction edges of the active class only.
  std::vector<std::pair<PositionId, PositionId>> enabled_edges() const {
    std::vector<std::pair<PositionId, PositionId>> out;
    if (mode.is_intra()) {
      for (const auto& trap : traps)
        for (std::size_t i = 0; i + 1 < trap.size(); ++i) {
          out.emplace_back(trap[i], trap[i + 1]);
          out.emplace_back(trap[i + 1], trap[i]);
        }
      return out;
    }
    const JTClass& c = *mode.inter;
    for (const Junction& j : junctions) {
      PositionId a = j.leg_end[static_cast<int>(c.from)];
      PositionId b = j.leg_end[static_cast<int>(c.to)];
      out.emplace_back(a, b);
      if (c.kind == JTClass::Kind::Swap) out.emplace_back(b, a);
    }
    return out;
  }

  /// BFS distance on the static union graph, lazily cached per source.
  int distance(PositionId a, PositionId b) const {
    if (a == b) return 0;
    const std::vector<std::int32_t>& row = dist_row(a);
    return row[b];
  }

  /// Junction and leg of a trap-end position, if any.
  struct LegRef {
    JunctionId junction;
    Leg leg;
  };
  const std::vector<std::vector<LegRef>>& leg_refs() const { return leg_of_; }

  const std::vector<PositionId>& gate_zones() const { return gate_zones_; }

 private:
  friend PositionGraph build_grid(const HardwareSpec&);

  std::vector<QubitId> qubit_pos_;
  int placed_ = 0;
  std::vector<std::vector<PositionId>> union_adj_;
  std::vector<std::vector<LegRef>> leg_of_;  // per position
  std::vector<PositionId> gate_zones_;

  // Distance cache is shared between copies: the union graph depends only on
  // the topology, which is immutable after build_grid.
  struct DistCache {
    std::vector<std::unique_ptr<std::vector<std::int32_t>>> rows;
  };
  std::shared_ptr<DistCache> dist_ = std::make_shared<DistCache>();

  const std::vector<std::int32_t>& dist_row(PositionId src) const {
    if (dist_->rows.empty()) dist_->rows.resize(positions.size());
    auto& slot = dist_->rows[src];
    if (!slot) {
      auto row = std::make_unique<std::vector<std::int32_t>>(positions.size(),
                                                             -1);
      std::queue<PositionId> q;
      (*row)[src] = 0;
      q.push(src);
      while (!q.empty()) {
        PositionId u = q.front();
        q.pop();
        for (PositionId v : union_adj_[u])
          if ((*row)[v] < 0) {
            (*row)[v] = (*row)[u] + 1;
            q.push(v);
          }
      }
      slot = std::move(row);
    }
    return *slot;
  }
};

/// Builds the position graph of a D x D junction grid.
///
/// Trap layout: D rows of D+1 horizontal segments, then D columns of D+1
/// vertical segments (2*D*(D+1) traps total). Horizontal traps run
/// west-to-east, vertical traps north-to-south, so index L-1 of a horizontal
/// trap is its east end. Every junction leg gets a trap: boundary legs attach
/// dedicated boundary traps.
inline PositionGraph build_grid(const HardwareSpec& spec) {
  spec.validate();
  const int d = spec.grid_dim;
  const int cap = spec.trap_capacity;

  PositionGraph g;
  g.spec = spec;
  g.mode = GraphMode{};

  const int n_traps = spec.trap_count();
  const std::vector<int> zone_idx =
      HardwareSpec::gate_zone_indices(cap, spec.gate_zones_per_trap);

  g.positions.reserve(static_cast<std::size_t>(n_traps) * cap);
  g.traps.resize(n_traps);
  for (TrapId t = 0; t < n_traps; ++t) {
    g.traps[t].reserve(cap);
    for (int i = 0; i < cap; ++i) {
      PositionId id = t * cap + i;
      ZoneKind kind = ZoneKind::Auxiliary;
      for (int z : zone_idx)
        if (z == i) kind = ZoneKind::GateZone;
      g.positions.push_back(Position{id, t, i, kind, kVacant});
      g.traps[t].push_back(id);
      if (kind == ZoneKind::GateZone) g.gate_zones_.push_back(id);
    }
  }

  // Trap numbering: horizontal trap (row r, segment s) = r*(D+1)+s, vertical
  // trap (col c, segment s) = D*(D+1) + c*(D+1)+s. Segment s of a row lies
  // west of junction column s; segment s of a column lies north of junction
  // row s.
  auto h_trap = [&](int r, int s) { return r * (d + 1) + s; };
  auto v_trap = [&](int c, int s) { return d * (d + 1) + c * (d + 1) + s; };

  g.junctions.reserve(static_cast<std::size_t>(d) * d);
  for (int r = 0; r < d; ++r)
    for (int c = 0; c < d; ++c) {
      Junction j;
      j.id = r * d + c;
      j.row = r;
      j.col = c;
      j.leg_end[static_cast<int>(Leg::North)] =
          g.position_id(v_trap(c, r), cap - 1);
      j.leg_end[static_cast<int>(Leg::East)] = g.position_id(h_trap(r, c + 1), 0);
      j.leg_end[static_cast<int>(Leg::South)] =
          g.position_id(v_trap(c, r + 1), 0);
      j.leg_end[static_cast<int>(Leg::West)] =
          g.position_id(h_trap(r, c), cap - 1);
      g.junctions.push_back(j);
    }

  // Static union adjacency: linear intra edges plus a clique over the four
  // leg ends of each junction.
  g.union_adj_.assign(g.positions.size(), {});
  g.leg_of_.assign(g.positions.size(), {});
  for (const auto& trap : g.traps)
    for (std::size_t i = 0; i + 1 < trap.size(); ++i) {
      g.union_adj_[trap[i]].push_back(trap[i + 1]);
      g.union_adj_[trap[i + 1]].push_back(trap[i]);
    }
  for (const Junction& j : g.junctions) {
    for (int a = 0; a < 4; ++a) {
      g.leg_of_[j.leg_end[a]].push_back({j.id, Leg(a)});
      for (int b = 0; b < 4; ++b) {
        if (a == b) continue;
        PositionId pa = j.leg_end[a];
        PositionId pb = j.leg_end[b];
        if (pa == pb) continue;  // L = 1 traps fold both ends onto one slot
        bool dup = false;
        for (PositionId n : g.union_adj_[pa]) dup = dup || n == pb;
        if (!dup) g.union_adj_[pa].push_back(pb);
      }
    }
  }
  return g;
}

/// Shortest-path step count between two positions on the static union graph.
inline int distance(const PositionGraph& g, PositionId a, PositionId b) {
  return g.distance(a, b);
}

/// Gate zone minimizing distance(pos, zone) + beta * load(zone); ties break
/// toward the lowest position id.
inline PositionId nearest_gate_zone(const PositionGraph& g, PositionId pos,
                                    const std::vector<int>& load,
                                    int beta = 2) {
  PositionId best = kNoPosition;
  long long best_score = 0;
  for (PositionId z : g.gate_zones()) {
    long long score = g.distance(pos, z);
    if (!load.empty()) score += static_cast<long long>(beta) * load[z];
    if (best == kNoPosition || score < best_score) {
      best = z;
      best_score = score;
    }
  }
  return best;
}

inline void set_mode(PositionGraph& g, GraphMode mode) { g.mode = mode; }

inline nlohmann::ordered_json to_json(const HardwareSpec& spec) {
  nlohmann::ordered_json j;
  j["grid_dim"] = spec.grid_dim;
  j["trap_capacity"] = spec.trap_capacity;
  j["gate_zones_per_trap"] = spec.gate_zones_per_trap;
  j["coherence_time_s"] = spec.coherence_time_s;
  j["op_table"] = to_json(spec.op_table);
  return j;
}

inline HardwareSpec hardware_spec_from_json(const nlohmann::json& j) {
  HardwareSpec spec;
  try {
    spec.grid_dim = j.at("grid_dim").get<int>();
    spec.trap_capacity = j.at("trap_capacity").get<int>();
    spec.gate_zones_per_trap = j.at("gate_zones_per_trap").get<int>();
    if (j.contains("coherence_time_s"))
      spec.coherence_time_s = j.at("coherence_time_s").get<double>();
    if (j.contains("op_table"))
      apply_op_table_overrides(spec.op_table, j.at("op_table"));
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("hardware spec: ") + e.what());
  }
  spec.validate();
  return spec;
}

}  // namespace fluxtrap
