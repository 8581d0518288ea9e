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
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "fluxtrap/aggregation.hpp"
#include "fluxtrap/circuit.hpp"
#include "fluxtrap/heuristic.hpp"
#include "fluxtrap/isa.hpp"
#include "json.hpp"

namespace fluxtrap {

/// Scheduling policies. FluxTrap batches junction transfers behind the
/// gain-factor switch rule; EagerJT fires a transfer as soon as it beats the
/// intra alternative; DepthSync keeps the switch rule but advances time in
/// whole depth steps, waiting for every active op each cycle.
enum class Policy { FluxTrap, EagerJT, DepthSync };

inline const char* to_string(Policy p) {
  switch (p) {
    case Policy::FluxTrap: return "fluxtrap";
    case Policy::EagerJT: return "eager-jt";
    case Policy::DepthSync: return "depth-sync";
  }
  return "?";
}

inline bool policy_from_string(const std::string& s, Policy& out) {
  if (s == "fluxtrap") out = Policy::FluxTrap;
  else if (s == "eager-jt") out = Policy::EagerJT;
  else if (s == "depth-sync") out = Policy::DepthSync;
  else return false;
  return true;
}

struct ScheduleEvent {
  TimeUs t = 0;
  TimeUs dur = 0;
  Instruction instr;
  std::vector<QubitId> qubits;
  std::vector<PositionId> positions;
};

struct Schedule {
  TimeUs total_time = 0;
  std::vector<ScheduleEvent> events;
};

/// Raised when the compiler makes no progress for longer than the congestion
/// patience even after zone reassignment. Carries a state dump for triage.
class DeadlockError : public std::runtime_error {
 public:
  DeadlockError(const std::string& msg, std::string dump)
      : std::runtime_error(msg), diagnostic(std::move(dump)) {}
  std::string diagnostic;
};

// ---------------------------------------------------------------------------
// Initial mapping
// ---------------------------------------------------------------------------

/// Default placement packs qubits trap by trap in index order, keeping trap
/// ends vacant as long as interior slots remain. "balanced" deals qubits
/// round-robin across traps, middle-out within each, which keeps vacancies
/// spread for shift chains. "random" shuffles all positions with the seed.
inline std::vector<PositionId> initial_mapping(const Circuit& circuit,
                                               const PositionGraph& graph,
                                               const std::string& strategy,
                                               std::uint64_t seed) {
  const int n = circuit.n_qubits;
  if (n > static_cast<int>(graph.positions.size()))
    throw InputError("initial_mapping: more qubits than positions");

  const int cap = graph.capacity();
  std::vector<PositionId> order;
  if (strategy == "random") {
    order.resize(graph.positions.size());
    for (std::size_t i = 0; i < order.size(); ++i)
      order[i] = static_cast<PositionId>(i);
    Rng rng(seed);
    rng.shuffle(order);
  } else if (strategy == "packed" || strategy.empty()) {
    for (const auto& trap : graph.traps)
      for (int i = 1; i + 1 < cap; ++i) order.push_back(trap[i]);
    for (const auto& trap : graph.traps) {
      order.push_back(trap[0]);
      if (cap > 1) order.push_back(trap[cap - 1]);
    }
  } else if (strategy == "balanced") {
    std::vector<std::vector<PositionId>> per_trap(graph.traps.size());
    for (std::size_t t = 0; t < graph.traps.size(); ++t) {
      std::vector<char> taken(cap, 0);
      auto take = [&](int idx) {
        if (idx >= 0 && idx < cap && !taken[idx]) {
          taken[idx] = 1;
          per_trap[t].push_back(graph.traps[t][idx]);
        }
      };
      int mid = cap / 2;
      take(mid);
      for (int off = 1; off < cap; ++off) {
        if (mid - off >= 1) take(mid - off);
        if (mid + off <= cap - 2) take(mid + off);
      }
      take(0);
      take(cap - 1);
    }
    for (int round = 0; round < cap; ++round)
      for (const auto& slots : per_trap)
        if (round < static_cast<int>(slots.size())) order.push_back(slots[round]);
  } else {
    throw InputError("initial_mapping: unknown strategy '" + strategy + "'");
  }

  std::vector<PositionId> placement(n);
  for (int q = 0; q < n; ++q) placement[q] = order[q];
  return placement;
}

// ---------------------------------------------------------------------------
// Compile loop
// ---------------------------------------------------------------------------

namespace detail {

struct ActiveOp {
  Instruction instr;
  TimeUs remaining;
  std::vector<QubitId> qubits;
  std::vector<PositionId> positions;
  GateId gate;  // kNoGate for transports
  bool intra_transport;
  bool inter_transport;
};

class CompileRun {
 public:
  CompileRun(const Circuit& circuit, const PositionGraph& graph,
             const std::vector<PositionId>& placement, Policy policy,
             const HeuristicConfig& cfg)
      : circuit_(circuit),
        graph_(graph),
        dag_(circuit),
        za_(static_cast<GateId>(circuit.ops.size()),
            static_cast<PositionId>(graph.positions.size())),
        policy_(policy),
        cfg_(cfg),
        engaged_(circuit.n_qubits, 0),
        reserved_(graph.positions.size(), 0),
        front_since_(circuit.ops.size(), -1),
        jt_hold_(circuit.n_qubits, 0) {
    if (static_cast<int>(placement.size()) != circuit.n_qubits)
      throw InputError("compile: placement must cover every circuit qubit");
    for (QubitId q = 0; q < circuit.n_qubits; ++q)
      graph_.place(q, placement[q]);
    for (GateId g : dag_.front()) {
      za_.note_entered(g, 0);
      front_since_[g] = 0;
    }
  }

  Schedule run() {
    while (!dag_.finished() || !active_.empty()) {
      ++cycle_;
      if (cycle_ > kCycleLimit)
        throw DeadlockError("compile: cycle limit exceeded", state_dump());
      progress_this_cycle_ = false;
      start_ready_gates();

      bool assist_took_junction = false;
      if (!jt_active() && !dag_.finished()) {
        update_assist();
        if (assisted_gate_ != kNoGate) {
          std::optional<Instruction> step = plan_assist_step();
          if (step && std::holds_alternative<JTSimd>(*step)) {
            // a junction step excludes any intra transport this cycle
            if (policy_ == Policy::DepthSync)
              drain_all();
            else
              drain_intra();
            // the drain may have started (and so released) the assisted
            // gate; only re-plan if it still needs help
            if (assisted_gate_ != kNoGate) {
              std::optional<Instruction> again = plan_assist_step();
              if (again) start_op(*again, kNoGate);
            }
            assist_took_junction = true;
          } else if (step) {
            start_op(*step, kNoGate);
          }
        }
      }

      if (!assist_took_junction && !jt_active() && !dag_.finished()) {
        CycleContext ctx = refresh_assignments();
        std::vector<char> frozen = transport_frozen();
        AggregationStats stats;
        IntraPlan intra = aggregate_s3(graph_, dag_, za_, ctx, frozen,
                                       reserved_, cfg_, &stats);
        JTAggregation jt =
            aggregate_jt(graph_, dag_, za_, ctx, frozen, reserved_, cfg_);

        const double c_now = intra.starting_cost;
        const double c_intra = intra.resulting_cost;
        const JTCandidate& best = jt.candidates[jt.best];
        const double c_inter = best.resulting_cost;
        const bool inter_available = !best.instr.junctions.empty();

        bool choose_inter;
        if (policy_ == Policy::EagerJT)
          choose_inter = inter_available && c_inter < c_intra - kCostEps;
        else
          choose_inter = inter_available &&
                         (c_now - c_inter) >
                             cfg_.inter_gain_factor * (c_now - c_intra) +
                                 kCostEps;

        if (choose_inter) {
          // Commit the decided transfer, then drain: all intra transports
          // complete before the junction round, gates keep starting at
          // completion boundaries (they conflict with neither transport
          // mode), and the committed ions are held back so a late gate
          // start cannot strip the transfer of its participants.
          for (QubitId q : touched_qubits(Instruction{best.instr}, graph_))
            jt_hold_[q] = 1;
          if (policy_ == Policy::DepthSync)
            drain_all();
          else
            drain_intra();
          // ions that finished their shifts during the drain ride along
          JTSimd issue = collect_riders(best.instr);
          std::fill(jt_hold_.begin(), jt_hold_.end(), 0);
          start_op(Instruction{issue}, kNoGate);
        } else {
          for (const Instruction& ins : intra.instrs) start_op(ins, kNoGate);
        }
      }

      // time advance: SRT normally, full barrier for depth-sync
      if (policy_ == Policy::DepthSync) {
        drain_all();
      } else if (!active_.empty()) {
        advance(min_remaining());
      }

      if (progress_this_cycle_) {
        stall_cycles_ = 0;
        reassign_credit_ = true;
      } else if (reassigned_this_cycle_ && reassign_credit_) {
        // a reassignment buys exactly one more patience window
        stall_cycles_ = 0;
        reassign_credit_ = false;
      } else if (active_.empty() && !dag_.finished()) {
        ++stall_cycles_;
        // the assist kicks in one cycle past the patience; the margin keeps
        // the abort from racing it
        if (stall_cycles_ > cfg_.congestion_patience + 8)
          throw DeadlockError("compile: no progress after zone reassignment",
                              state_dump());
      }
      reassigned_this_cycle_ = false;
    }
    schedule_.total_time = 0;
    for (const ScheduleEvent& e : schedule_.events)
      schedule_.total_time = std::max(schedule_.total_time, e.t + e.dur);
    return std::move(schedule_);
  }

  const PositionGraph& final_graph() const { return graph_; }

 private:
  static constexpr std::int64_t kCycleLimit = 2'000'000;

  bool jt_active() const {
    for (const ActiveOp& op : active_)
      if (op.inter_transport) return true;
    return false;
  }

  /// Ions the aggregation passes must not move: engaged ones plus the
  /// assisted gate's qubits, which only the assist itself may route.
  std::vector<char> transport_frozen() const {
    std::vector<char> frozen = engaged_;
    if (assisted_gate_ != kNoGate) {
      const CircuitOp& ao = dag_.op(assisted_gate_);
      frozen[ao.q0] = 1;
      if (ao.arity() == 2) frozen[ao.q1] = 1;
    }
    return frozen;
  }

  /// Extends a committed junction transfer with additional beneficial
  /// riders on the drained state. The committed junctions stay untouched:
  /// occupancy never changes during a drain, so they are still legal.
  JTSimd collect_riders(const JTSimd& committed) {
    JTSimd out = committed;
    CycleContext ctx = refresh_assignments();
    std::vector<PositionId> claimed;
    for (JunctionId jid : committed.junctions) {
      const Junction& j = graph_.junctions[jid];
      claimed.push_back(j.leg_end[static_cast<int>(committed.cls.from)]);
      claimed.push_back(j.leg_end[static_cast<int>(committed.cls.to)]);
    }
    auto taken = [&](PositionId p) {
      for (PositionId c : claimed)
        if (c == p) return true;
      return false;
    };
    auto pending_2q = [&](QubitId q) {
      if (q == kVacant || engaged_[q]) return false;
      for (auto [g, w] : ctx.qubit_gates[q])
        if (dag_.op(g).arity() == 2) return true;
      return false;
    };
    for (const Junction& j : graph_.junctions) {
      PositionId a = j.leg_end[static_cast<int>(committed.cls.from)];
      PositionId b = j.leg_end[static_cast<int>(committed.cls.to)];
      if (taken(a) || taken(b)) continue;
      if (committed.cls.kind == JTClass::Kind::Shift) {
        QubitId q = graph_.occupant(a);
        if (!pending_2q(q) || !graph_.vacant(b) || reserved_[b]) continue;
        if (move_delta(graph_, dag_, za_, ctx, cfg_, q, b) < -kCostEps) {
          out.junctions.push_back(j.id);
          claimed.push_back(a);
          claimed.push_back(b);
        }
      } else {
        QubitId x = graph_.occupant(a);
        QubitId y = graph_.occupant(b);
        if (x == kVacant || y == kVacant || engaged_[x] || engaged_[y])
          continue;
        if (reserved_[a] || reserved_[b]) continue;
        if (!pending_2q(x) && !pending_2q(y)) continue;
        PositionGraph probe = graph_;
        probe.swap_occupants(a, b);
        if (lookahead_cost(probe, dag_, za_, ctx, cfg_) <
            lookahead_cost(graph_, dag_, za_, ctx, cfg_) - kCostEps) {
          out.junctions.push_back(j.id);
          claimed.push_back(a);
          claimed.push_back(b);
        }
      }
    }
    std::sort(out.junctions.begin(), out.junctions.end());
    return out;
  }


  bool intra_transport_active() const {
    for (const ActiveOp& op : active_)
      if (op.intra_transport) return true;
    return false;
  }

  TimeUs min_remaining() const {
    TimeUs t = std::numeric_limits<TimeUs>::max();
    for (const ActiveOp& op : active_) t = std::min(t, op.remaining);
    return t;
  }

  TimeUs max_remaining() const {
    TimeUs t = 0;
    for (const ActiveOp& op : active_) t = std::max(t, op.remaining);
    return t;
  }

  void drain_intra() {
    while (intra_transport_active()) {
      advance(min_remaining());
      start_ready_gates();
    }
  }

  void drain_all() {
    while (!active_.empty()) {
      advance(min_remaining());
      start_ready_gates();
    }
  }

  /// Builds the cycle context and keeps zone assignments current: new window
  /// gates get a target zone, starving front gates get a load-aware re-pick.
  CycleContext refresh_assignments() {
    CycleContext ctx =
        build_cycle_context(dag_, za_, engaged_, cfg_, cycle_);
    for (GateId g : ctx.front_gates) {
      za_.assign(g, dag_.op(g), graph_, cfg_.zone_load_beta);
      if (g == assisted_gate_) continue;  // frozen while being routed
      if (za_.maybe_reassign(g, dag_.op(g), graph_, cfg_.zone_load_beta,
                             cycle_, cfg_.congestion_patience))
        reassigned_this_cycle_ = true;
    }
    for (auto [g, w] : ctx.next_gates)
      za_.assign(g, dag_.op(g), graph_, cfg_.zone_load_beta);
    return ctx;
  }

  /// Anti-starvation assist. When a front gate has waited longer than the
  /// congestion patience, the scheduler routes it directly: its zone pick is
  /// frozen, its qubits are kept out of the aggregation passes, and each
  /// cycle one step that strictly shrinks the remaining travel distance is
  /// forced (shift into a vacancy, swap past a blocker, or a single-ion
  /// junction transfer). Distances are static, so the residual distance is
  /// monotone and the gate always reaches an executable configuration.
  void update_assist() {
    if (assisted_gate_ != kNoGate) return;
    GateId oldest = kNoGate;
    for (GateId g : dag_.front()) {
      if (cycle_ - front_since_[g] <= cfg_.congestion_patience) continue;
      const CircuitOp& o = dag_.op(g);
      // skip gates already executing (they sit in F engaged until done)
      if (engaged_[o.q0] || (o.arity() == 2 && engaged_[o.q1])) continue;
      if (oldest == kNoGate || front_since_[g] < front_since_[oldest])
        oldest = g;
    }
    if (oldest == kNoGate) return;
    assisted_gate_ = oldest;
    assist_zone_q_ = kVacant;
    assist_flips_ = 0;
    za_.assign(oldest, dag_.op(oldest), graph_, cfg_.zone_load_beta);
    log_debug("assisting gate %d from cycle %lld", oldest,
              static_cast<long long>(cycle_));
  }

  /// In-trap neighbor slots of a zone; the partner of a two-qubit gate must
  /// finish on one of these.
  std::vector<PositionId> zone_flanks(PositionId z) const {
    std::vector<PositionId> out;
    const Position& p = graph_.at(z);
    if (p.index > 0) out.push_back(graph_.position_id(p.trap, p.index - 1));
    if (p.index + 1 < graph_.capacity())
      out.push_back(graph_.position_id(p.trap, p.index + 1));
    return out;
  }

  int residual_to(PositionId from, const std::vector<PositionId>& targets) const {
    int best = -1;
    for (PositionId t : targets) {
      int d = graph_.distance(from, t);
      if (best < 0 || d < best) best = d;
    }
    return best;
  }

  /// One strictly-improving step for the assisted gate, or nothing when its
  /// movers are pinned by in-flight operations. For two-qubit gates the role
  /// split (who parks on the zone, who takes the flank) is pinned and only
  /// flipped when the partner itself structurally blocks the path, which
  /// happens when the zone sits at a trap end.
  std::optional<Instruction> plan_assist_step() {
    GateId g = assisted_gate_;
    const CircuitOp& op = dag_.op(g);
    PositionId z = za_.target(g);
    if (z == kNoPosition) {
      za_.assign(g, op, graph_, cfg_.zone_load_beta);
      z = za_.target(g);
    }

    if (op.arity() == 1) {
      bool partner_blocked = false;
      return assist_leg_step(op.q0, {z}, kVacant, partner_blocked);
    }

    std::vector<PositionId> flanks = zone_flanks(z);
    if (flanks.empty()) return std::nullopt;  // single-slot traps
    if (assist_zone_q_ != op.q0 && assist_zone_q_ != op.q1) {
      PositionId p0 = graph_.position_of(op.q0);
      PositionId p1 = graph_.position_of(op.q1);
      int cost_a = graph_.distance(p0, z) + residual_to(p1, flanks);
      int cost_b = graph_.distance(p1, z) + residual_to(p0, flanks);
      assist_zone_q_ = cost_a <= cost_b ? op.q0 : op.q1;
    }

    for (int attempt = 0; attempt < 2; ++attempt) {
      QubitId zone_q = assist_zone_q_;
      QubitId part_q = zone_q == op.q0 ? op.q1 : op.q0;
      struct Leg {
        QubitId qubit;
        std::vector<PositionId> targets;
      };
      std::vector<Leg> legs = {{zone_q, {z}}, {part_q, flanks}};
      // move the farther ion first so the pair closes in from both ends
      int r0 = residual_to(graph_.position_of(legs[0].qubit), legs[0].targets);
      int r1 = residual_to(graph_.position_of(legs[1].qubit), legs[1].targets);
      if (r1 > r0) std::swap(legs[0], legs[1]);

      bool partner_blocked = false;
      for (const Leg& leg : legs) {
        QubitId other = leg.qubit == op.q0 ? op.q1 : op.q0;
        std::optional<Instruction> step =
            assist_leg_step(leg.qubit, leg.targets, other, partner_blocked);
        if (step) {
          assist_flips_ = 0;
          return step;
        }
      }
      if (!partner_blocked) return std::nullopt;
      // the partner sits across the only entry; exchange the roles
      assist_zone_q_ = part_q;
      ++assist_flips_;
    }
    return std::nullopt;
  }

  /// Best single step moving `q` one unit closer to any target, skipping the
  /// partner ion and anything in flight. Sets partner_blocked when the only
  /// frontier slots hold the partner.
  std::optional<Instruction> assist_leg_step(QubitId q,
                                             const std::vector<PositionId>& targets,
                                             QubitId other,
                                             bool& partner_blocked) {
    if (engaged_[q]) return std::nullopt;
    PositionId cur = graph_.position_of(q);
    int resid = residual_to(cur, targets);
    if (resid <= 0) return std::nullopt;
    for (PositionId n : graph_.union_neighbors(cur)) {
      if (residual_to(n, targets) != resid - 1) continue;
      if (reserved_[n]) continue;
      QubitId occ = graph_.occupant(n);
      if (occ == other && other != kVacant) {
        partner_blocked = true;
        continue;
      }
      if (occ != kVacant && engaged_[occ]) continue;
      const Position& a = graph_.at(cur);
      const Position& b = graph_.at(n);
      if (a.trap == b.trap) {
        if (occ == kVacant) return IntraShift{a.trap, a.index, b.index};
        return IntraSwap{a.trap, std::min(a.index, b.index)};
      }
      // junction hop: find the shared junction and the legs involved
      for (const PositionGraph::LegRef& la : graph_.leg_refs()[cur])
        for (const PositionGraph::LegRef& lb : graph_.leg_refs()[n])
          if (la.junction == lb.junction) {
            if (occ == kVacant)
              return JTSimd{{JTClass::Kind::Shift, la.leg, lb.leg},
                            {la.junction}};
            Leg2 legpair = normalize(la.leg, lb.leg);
            return JTSimd{{JTClass::Kind::Swap, legpair.a, legpair.b},
                          {la.junction}};
          }
    }
    return std::nullopt;
  }

  struct Leg2 {
    fluxtrap::Leg a, b;
  };
  static Leg2 normalize(fluxtrap::Leg x, fluxtrap::Leg y) {
    return static_cast<int>(x) < static_cast<int>(y) ? Leg2{x, y} : Leg2{y, x};
  }

  bool gate_executable(GateId g) const {
    const CircuitOp& op = dag_.op(g);
    if (engaged_[op.q0] || jt_hold_[op.q0]) return false;
    PositionId p0 = graph_.position_of(op.q0);
    if (op.arity() == 1) return graph_.is_gate_zone(p0);
    if (engaged_[op.q1] || jt_hold_[op.q1]) return false;
    PositionId p1 = graph_.position_of(op.q1);
    const Position& a = graph_.at(p0);
    const Position& b = graph_.at(p1);
    if (a.trap != b.trap || std::abs(a.index - b.index) != 1) return false;
    return a.kind == ZoneKind::GateZone || b.kind == ZoneKind::GateZone;
  }

  bool start_ready_gates() {
    bool any = false;
    // front() is ordered, so starts are deterministic; started gates stay in
    // F (engaged) until they complete
    std::vector<GateId> ready;
    for (GateId g : dag_.front())
      if (gate_executable(g)) ready.push_back(g);
    for (GateId g : ready) {
      if (g == assisted_gate_) assisted_gate_ = kNoGate;
      const CircuitOp& op = dag_.op(g);
      Instruction ins;
      if (op.kind == GateKind::Measure)
        ins = MeasureOp{op.q0, g};
      else if (op.arity() == 1)
        ins = Gate1Q{op.q0, op.kind, op.param, g};
      else
        ins = Gate2Q{op.q0, op.q1, op.kind, op.param, g, false};
      start_op(ins, g);
      za_.release(g);
      any = true;
    }
    return any;
  }

  void start_op(const Instruction& ins, GateId gate) {
    ActiveOp op;
    op.instr = ins;
    op.gate = gate;
    op.qubits = touched_qubits(ins, graph_);
    op.positions = touched_positions(ins, graph_);
    op.remaining = instruction_latency(ins, graph_.spec.op_table);
    op.intra_transport = std::holds_alternative<IntraShift>(ins) ||
                         std::holds_alternative<IntraSwap>(ins) ||
                         std::holds_alternative<S3>(ins);
    op.inter_transport = std::holds_alternative<JTSimd>(ins);
    fluxtrap::apply(ins, graph_);  // occupancy moves at issue time; time cost is held
                         // in the active table until completion
    for (QubitId q : op.qubits) engaged_[q] = 1;
    for (PositionId p : op.positions) reserved_[p] = 1;

    ScheduleEvent ev;
    ev.t = now_;
    ev.dur = op.remaining;
    ev.instr = ins;
    ev.qubits = op.qubits;
    ev.positions = op.positions;
    schedule_.events.push_back(std::move(ev));
    active_.push_back(std::move(op));
    progress_this_cycle_ = true;
    if (log_level() >= 2) {
      const ScheduleEvent& e = schedule_.events.back();
      static const char* kind_names[] = {"gate1q",     "gate2q",    "measure",
                                         "intra_shift", "intra_swap", "s3",
                                         "jt"};
      std::string qs;
      for (QubitId q : e.qubits) qs += " q" + std::to_string(q);
      std::string ps;
      for (PositionId p : e.positions) ps += " " + std::to_string(p);
      log_debug("cycle=%lld t=%lld start %s dur=%lld qubits[%s] pos[%s]",
                static_cast<long long>(cycle_), static_cast<long long>(e.t),
                kind_names[e.instr.index()], static_cast<long long>(e.dur),
                qs.c_str(), ps.c_str());
    }
  }

  void advance(TimeUs step) {
    now_ += step;
    std::vector<ActiveOp> still;
    still.reserve(active_.size());
    for (ActiveOp& op : active_) {
      op.remaining -= step;
      if (op.remaining > 0) {
        still.push_back(std::move(op));
        continue;
      }
      for (QubitId q : op.qubits) engaged_[q] = 0;
      for (PositionId p : op.positions) reserved_[p] = 0;
      if (op.gate != kNoGate) {
        if (op.gate == assisted_gate_) assisted_gate_ = kNoGate;
        for (GateId released : dag_.complete_gate(op.gate)) {
          za_.note_entered(released, cycle_);
          front_since_[released] = cycle_;
        }
      }
    }
    active_ = std::move(still);
  }

  std::string state_dump() const {
    nlohmann::ordered_json j;
    j["cycle"] = cycle_;
    j["time_us"] = now_;
    j["front"] = nlohmann::ordered_json::array();
    for (GateId g : dag_.front()) j["front"].push_back(g);
    j["active_ops"] = active_.size();
    j["qubit_positions"] = nlohmann::ordered_json::array();
    for (QubitId q = 0; q < circuit_.n_qubits; ++q)
      j["qubit_positions"].push_back(graph_.position_of(q));
    return j.dump();
  }

  const Circuit& circuit_;
  PositionGraph graph_;
  DependencyDAG dag_;
  ZoneAssignment za_;
  Policy policy_;
  HeuristicConfig cfg_;
  std::vector<char> engaged_;
  std::vector<char> reserved_;
  std::vector<ActiveOp> active_;
  Schedule schedule_;
  TimeUs now_ = 0;
  std::int64_t cycle_ = 0;
  int stall_cycles_ = 0;
  bool reassigned_this_cycle_ = false;
  bool progress_this_cycle_ = false;
  bool reassign_credit_ = true;
  std::vector<std::int64_t> front_since_;
  std::vector<char> jt_hold_;
  GateId assisted_gate_ = kNoGate;
  QubitId assist_zone_q_ = kVacant;
  int assist_flips_ = 0;
};

}  // namespace detail

/// Runs the simulation-based compile loop and returns the validated event
/// schedule. Deterministic for identical inputs; the seed only feeds the
/// initial-mapping helper, never the loop itself.
inline Schedule compile_schedule(const Circuit& circuit,
                                 const PositionGraph& graph,
                                 const std::vector<PositionId>& placement,
                                 Policy policy, const HeuristicConfig& cfg) {
  detail::CompileRun run(circuit, graph, placement, policy, cfg);
  return run.run();
}

// ---------------------------------------------------------------------------
// Schedule JSON
// ---------------------------------------------------------------------------

inline nlohmann::ordered_json to_json(const Schedule& s) {
  nlohmann::ordered_json j;
  j["total_time_us"] = s.total_time;
  j["events"] = nlohmann::ordered_json::array();
  for (const ScheduleEvent& e : s.events) {
    nlohmann::ordered_json o;
    o["t"] = e.t;
    o["dur"] = e.dur;
    struct KindVisitor {
      nlohmann::ordered_json& o;
      void operator()(const Gate1Q&) const { o["kind"] = "gate1q"; }
      void operator()(const Gate2Q&) const { o["kind"] = "gate2q"; }
      void operator()(const MeasureOp&) const { o["kind"] = "measure"; }
      void operator()(const IntraShift&) const { o["kind"] = "intra_shift"; }
      void operator()(const IntraSwap&) const { o["kind"] = "intra_swap"; }
      void operator()(const S3&) const { o["kind"] = "s3"; }
      void operator()(const JTSimd& i) const {
        o["kind"] =
            i.cls.kind == JTClass::Kind::Shift ? "jt_shift" : "jt_swap";
      }
    };
    std::visit(KindVisitor{o}, e.instr);
    o["qubits"] = e.qubits;
    o["positions"] = e.positions;
    struct Visitor {
      nlohmann::ordered_json& o;
      void operator()(const Gate1Q& g) const {
        o["name"] = to_string(g.gate);
        if (has_param(g.gate)) o["param"] = g.param;
        o["gate_index"] = g.gate_index;
      }
      void operator()(const Gate2Q& g) const {
        o["name"] = to_string(g.gate);
        if (has_param(g.gate)) o["param"] = g.param;
        o["form"] = g.colocated ? "colocated" : "adjacent";
        o["gate_index"] = g.gate_index;
      }
      void operator()(const MeasureOp& m) const {
        o["gate_index"] = m.gate_index;
      }
      void operator()(const IntraShift& i) const {
        o["trap"] = i.trap;
        o["src"] = i.src_index;
        o["dst"] = i.dst_index;
      }
      void operator()(const IntraSwap& i) const {
        o["trap"] = i.trap;
        o["index"] = i.index;
      }
      void operator()(const S3& i) const {
        o["trap"] = i.trap;
        o["dir"] = to_string(i.dir);
        o["base"] = i.base_index;
        o["width"] = i.width;
      }
      void operator()(const JTSimd& i) const {
        o["jt_class"] = i.cls.name();
        o["junctions"] = i.junctions;
      }
    };
    std::visit(Visitor{o}, e.instr);
    j["events"].push_back(std::move(o));
  }
  return j;
}

inline Schedule schedule_from_json(const nlohmann::json& j) {
  Schedule s;
  try {
    s.total_time = j.at("total_time_us").get<TimeUs>();
    for (const auto& o : j.at("events")) {
      ScheduleEvent e;
      e.t = o.at("t").get<TimeUs>();
      e.dur = o.at("dur").get<TimeUs>();
      std::string kind = o.at("kind").get<std::string>();
      auto qubits = o.at("qubits").get<std::vector<QubitId>>();
      if (kind == "gate1q") {
        GateKind gk;
        if (!gate_kind_from_string(o.at("name").get<std::string>(), gk))
          throw InputError("schedule: unknown gate name");
        double param = o.contains("param") ? o.at("param").get<double>() : 0.0;
        e.instr = Gate1Q{qubits.at(0), gk, param, o.at("gate_index").get<GateId>()};
      } else if (kind == "gate2q") {
        GateKind gk;
        if (!gate_kind_from_string(o.at("name").get<std::string>(), gk))
          throw InputError("schedule: unknown gate name");
        double param = o.contains("param") ? o.at("param").get<double>() : 0.0;
        e.instr = Gate2Q{qubits.at(0), qubits.at(1), gk, param,
                         o.at("gate_index").get<GateId>(),
                         o.at("form").get<std::string>() == "colocated"};
      } else if (kind == "measure") {
        e.instr = MeasureOp{qubits.at(0), o.at("gate_index").get<GateId>()};
      } else if (kind == "intra_shift") {
        e.instr = IntraShift{o.at("trap").get<TrapId>(), o.at("src").get<int>(),
                             o.at("dst").get<int>()};
      } else if (kind == "intra_swap") {
        e.instr = IntraSwap{o.at("trap").get<TrapId>(), o.at("index").get<int>()};
      } else if (kind == "s3") {
        ShiftDir dir = o.at("dir").get<std::string>() == "right"
                           ? ShiftDir::Right
                           : ShiftDir::Left;
        e.instr = S3{o.at("trap").get<TrapId>(), dir, o.at("base").get<int>(),
                     o.at("width").get<int>()};
      } else if (kind == "jt_shift" || kind == "jt_swap") {
        JTSimd jt;
        jt.cls = jt_class_from_name(o.at("jt_class").get<std::string>());
        jt.junctions = o.at("junctions").get<std::vector<JunctionId>>();
        e.instr = jt;
      } else {
        throw InputError("schedule: unknown event kind '" + kind + "'");
      }
      e.qubits = std::move(qubits);
      e.positions = o.at("positions").get<std::vector<PositionId>>();
      s.events.push_back(std::move(e));
    }
  } catch (const nlohmann::json::exception& ex) {
    throw InputError(std::string("schedule json: ") + ex.what());
  }
  return s;
}

}  // namespace fluxtrap
