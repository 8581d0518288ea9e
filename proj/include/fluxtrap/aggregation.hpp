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
#include <vector>

#include "fluxtrap/heuristic.hpp"
#include "fluxtrap/isa.hpp"

namespace fluxtrap {

struct S3Candidate {
  S3 instr;
  QubitId head_qubit;
  double member_delta;  // sum of per-ion move deltas (negative = improving)
  std::vector<PositionId> footprint;  // run slots plus head destination
};

struct IntraPlan {
  std::vector<Instruction> instrs;
  double starting_cost = 0.0;
  double resulting_cost = 0.0;
  PositionGraph after;  // occupancy with the whole plan applied
};

struct JTCandidate {
  JTSimd instr;
  double resulting_cost = 0.0;
  double delta_cost = 0.0;  // starting - resulting
};

struct JTAggregation {
  std::vector<JTCandidate> candidates;  // all 18, in enumerate_jt_classes order
  int best = 0;
  double starting_cost = 0.0;
  PositionGraph after;  // occupancy with the best class applied
};

struct AggregationStats {
  int branch_count = 0;
  int contended_slots = 0;
};

namespace detail {

inline bool overlaps(const std::vector<PositionId>& a,
                     const std::vector<PositionId>& b) {
  for (PositionId x : a)
    for (PositionId y : b)
      if (x == y) return true;
  return false;
}

/// Keeps candidates in order, skipping any that clashes with an already kept
/// footprint. Used to complete a branch without further splitting.
inline std::vector<int> greedy_fill(const std::vector<S3Candidate>& cands,
                                    const std::vector<int>& pool,
                                    const std::vector<PositionId>& used) {
  std::vector<int> kept;
  std::vector<PositionId> occ = used;
  for (int idx : pool) {
    if (!overlaps(cands[idx].footprint, occ)) {
      kept.push_back(idx);
      occ.insert(occ.end(), cands[idx].footprint.begin(),
                 cands[idx].footprint.end());
    }
  }
  return kept;
}

}  // namespace detail

/// Forms the intra-trap transport plan for one cycle: grouped shifts built by
/// position reuse, branching when two chains contend for the same slot, plus
/// swaps where a needed exchange has no shiftable vacancy.
///
/// Movers are qubits of gates inside the lookahead window; ions with no
/// pending gate never move. A chain head must strictly improve the cost; ions
/// chained behind it ride along as long as their own move is not harmful.
inline IntraPlan aggregate_s3(const PositionGraph& graph,
                              const DependencyDAG& dag,
                              const ZoneAssignment& za, const CycleContext& ctx,
                              const std::vector<char>& engaged,
                              const std::vector<char>& reserved,
                              const HeuristicConfig& cfg,
                              AggregationStats* stats = nullptr) {
  IntraPlan plan;
  plan.after = graph;
  plan.starting_cost = lookahead_cost(graph, dag, za, ctx, cfg);

  auto is_mover = [&](QubitId q) {
    return q != kVacant && !engaged[q] && !ctx.qubit_gates[q].empty();
  };

  PositionGraph& work = plan.after;
  std::vector<PositionId> used;  // footprints of everything selected so far

  const int cap = graph.capacity();
  for (TrapId t = 0; t < static_cast<TrapId>(graph.traps.size()); ++t) {
    // Candidate chains in this trap, scanning heads by index then direction.
    std::vector<S3Candidate> cands;
    for (int i = 0; i < cap; ++i) {
      PositionId pi = work.position_id(t, i);
      QubitId q = work.occupant(pi);
      if (!is_mover(q)) continue;
      for (ShiftDir dir : {ShiftDir::Left, ShiftDir::Right}) {
        int step = dir_step(dir);
        int di = i + step;
        if (di < 0 || di >= cap) continue;
        PositionId dest = work.position_id(t, di);
        if (!work.vacant(dest) || reserved[dest]) continue;
        double head_delta = move_delta(work, dag, za, ctx, cfg, q, dest);
        if (!(head_delta < -kCostEps)) continue;

        S3Candidate c;
        c.head_qubit = q;
        c.member_delta = head_delta;
        int lo = i;
        int hi = i;
        // grow the chain behind the head through slots the head frees
        int j = i - step;
        while (j >= 0 && j < cap) {
          PositionId pj = work.position_id(t, j);
          QubitId r = work.occupant(pj);
          if (!is_mover(r)) break;
          double d = move_delta(work, dag, za, ctx, cfg, r,
                                work.position_id(t, j + step));
          if (d > kCostEps) break;
          c.member_delta += d;
          lo = std::min(lo, j);
          hi = std::max(hi, j);
          j -= step;
        }
        c.instr = S3{t, dir, lo, hi - lo + 1};
        for (int k = lo; k <= hi; ++k)
          c.footprint.push_back(work.position_id(t, k));
        c.footprint.push_back(dest);
        cands.push_back(std::move(c));
      }
    }
    if (cands.empty()) continue;

    if (stats) {
      // count slots claimed by more than one candidate
      std::vector<PositionId> all;
      for (const S3Candidate& c : cands)
        all.insert(all.end(), c.footprint.begin(), c.footprint.end());
      std::sort(all.begin(), all.end());
      for (std::size_t k = 0; k + 1 < all.size(); ++k)
        if (all[k] == all[k + 1]) {
          ++stats->contended_slots;
          while (k + 1 < all.size() && all[k] == all[k + 1]) ++k;
        }
    }

    // Resolve contention: whenever the next candidate clashes with another,
    // split into the two exclusive plans, keep the cheaper branch and drop
    // the loser outright. Ties prefer the wider group.
    std::vector<int> pool(cands.size());
    for (std::size_t k = 0; k < pool.size(); ++k) pool[k] = static_cast<int>(k);
    std::vector<int> selected;

    auto trap_plan_cost = [&](const std::vector<int>& chosen) {
      PositionGraph probe = work;
      for (int idx : chosen) fluxtrap::apply(Instruction{cands[idx].instr}, probe);
      return lookahead_cost(probe, dag, za, ctx, cfg);
    };

    while (!pool.empty()) {
      int c = pool.front();
      int rival = -1;
      for (std::size_t k = 1; k < pool.size(); ++k)
        if (detail::overlaps(cands[c].footprint, cands[pool[k]].footprint)) {
          rival = pool[k];
          break;
        }
      if (rival < 0) {
        selected.push_back(c);
        used.insert(used.end(), cands[c].footprint.begin(),
                    cands[c].footprint.end());
        pool.erase(pool.begin());
        continue;
      }
      if (stats) stats->branch_count += 2;
      std::vector<int> without_rival;
      std::vector<int> without_c;
      for (int idx : pool) {
        if (idx != rival) without_rival.push_back(idx);
        if (idx != c) without_c.push_back(idx);
      }
      std::vector<int> branch_a =
          detail::greedy_fill(cands, without_rival, used);
      std::vector<int> branch_b = detail::greedy_fill(cands, without_c, used);
      double cost_a = trap_plan_cost(branch_a);
      double cost_b = trap_plan_cost(branch_b);
      bool keep_c;
      if (std::abs(cost_a - cost_b) > kCostEps) {
        keep_c = cost_a < cost_b;
      } else {
        keep_c = cands[c].instr.width >= cands[rival].instr.width;
      }
      pool.erase(std::remove(pool.begin(), pool.end(), keep_c ? rival : c),
                 pool.end());
    }

    for (int idx : selected) {
      fluxtrap::apply(Instruction{cands[idx].instr}, work);
      plan.instrs.push_back(cands[idx].instr);
    }
  }

  // Swap pass: a mover blocked in its preferred direction may exchange with
  // its neighbor when no chain can open a vacancy for it (packed run or an
  // unwilling ion in the way). Shifts always take precedence, so only ions
  // untouched by the selected groups are considered.
  for (TrapId t = 0; t < static_cast<TrapId>(graph.traps.size()); ++t) {
    for (int i = 0; i < cap; ++i) {
      PositionId pi = work.position_id(t, i);
      QubitId q = work.occupant(pi);
      if (!is_mover(q)) continue;
      bool q_used = false;
      for (PositionId u : used) q_used = q_used || u == pi;
      if (q_used || reserved[pi]) continue;

      for (ShiftDir dir : {ShiftDir::Left, ShiftDir::Right}) {
        int step = dir_step(dir);
        int ni = i + step;
        if (ni < 0 || ni >= cap) continue;
        PositionId pn = work.position_id(t, ni);
        QubitId r = work.occupant(pn);
        if (r == kVacant || engaged[r]) continue;
        bool n_used = false;
        for (PositionId u : used) n_used = n_used || u == pn;
        if (n_used || reserved[pn]) continue;

        // vacancy path check: walk toward the trap end; a reachable vacancy
        // behind willing movers means a future shift can serve q instead
        bool shiftable = false;
        for (int k = ni; k >= 0 && k < cap; k += step) {
          PositionId pk = work.position_id(t, k);
          QubitId w = work.occupant(pk);
          if (w == kVacant) {
            shiftable = true;
            break;
          }
          if (!is_mover(w)) break;
          if (k + step < 0 || k + step >= cap) break;  // packed to the end
          if (move_delta(work, dag, za, ctx, cfg, w,
                         work.position_id(t, k + step)) > kCostEps)
            break;
        }
        if (shiftable) continue;

        PositionGraph probe = work;
        fluxtrap::apply(Instruction{IntraSwap{t, std::min(i, ni)}}, probe);
        double before = lookahead_cost(work, dag, za, ctx, cfg);
        double after = lookahead_cost(probe, dag, za, ctx, cfg);
        if (after < before - kCostEps) {
          fluxtrap::apply(Instruction{IntraSwap{t, std::min(i, ni)}}, work);
          plan.instrs.push_back(IntraSwap{t, std::min(i, ni)});
          used.push_back(pi);
          used.push_back(pn);
          break;  // q served
        }
      }
    }
  }

  // Independently improving groups can interact through shared gates; prune
  // from the tail until the plan is no worse than doing nothing.
  plan.resulting_cost = lookahead_cost(work, dag, za, ctx, cfg);
  while (!plan.instrs.empty() &&
         plan.resulting_cost > plan.starting_cost + kCostEps) {
    plan.instrs.pop_back();
    PositionGraph probe = graph;
    for (const Instruction& ins : plan.instrs) fluxtrap::apply(ins, probe);
    plan.after = probe;
    plan.resulting_cost = lookahead_cost(plan.after, dag, za, ctx, cfg);
  }
  return plan;
}

/// Builds all 18 JT-SIMD candidates: per class, every junction whose
/// source-end ion belongs to a pending two-qubit gate joins when moving
/// strictly lowers the cost (swaps need a partner and joint improvement).
/// The best class is the one with the lowest resulting cost, ties falling
/// back to enumeration order.
inline JTAggregation aggregate_jt(const PositionGraph& graph,
                                  const DependencyDAG& dag,
                                  const ZoneAssignment& za,
                                  const CycleContext& ctx,
                                  const std::vector<char>& engaged,
                                  const std::vector<char>& reserved,
                                  const HeuristicConfig& cfg) {
  JTAggregation out;
  out.starting_cost = lookahead_cost(graph, dag, za, ctx, cfg);

  auto pending_2q = [&](QubitId q) {
    if (q == kVacant || engaged[q]) return false;
    for (auto [g, w] : ctx.qubit_gates[q])
      if (dag.op(g).arity() == 2) return true;
    return false;
  };

  for (const JTClass& cls : enumerate_jt_classes()) {
    JTCandidate cand;
    cand.instr.cls = cls;
    std::vector<PositionId> claimed;
    PositionGraph probe = graph;

    for (const Junction& j : graph.junctions) {
      PositionId a = j.leg_end[static_cast<int>(cls.from)];
      PositionId b = j.leg_end[static_cast<int>(cls.to)];
      if (detail::overlaps({a}, claimed) || detail::overlaps({b}, claimed))
        continue;
      if (cls.kind == JTClass::Kind::Shift) {
        QubitId q = graph.occupant(a);
        if (!pending_2q(q)) continue;
        if (!graph.vacant(b) || reserved[b] || reserved[a]) continue;
        if (move_delta(graph, dag, za, ctx, cfg, q, b) < -kCostEps) {
          cand.instr.junctions.push_back(j.id);
          claimed.push_back(a);
          claimed.push_back(b);
        }
      } else {
        QubitId x = graph.occupant(a);
        QubitId y = graph.occupant(b);
        if (x == kVacant || y == kVacant) continue;
        if (engaged[x] || engaged[y]) continue;
        if (reserved[a] || reserved[b]) continue;
        if (!pending_2q(x) && !pending_2q(y)) continue;
        PositionGraph swap_probe = probe;
        swap_probe.swap_occupants(a, b);
        double before = lookahead_cost(probe, dag, za, ctx, cfg);
        double after = lookahead_cost(swap_probe, dag, za, ctx, cfg);
        if (after < before - kCostEps) {
          cand.instr.junctions.push_back(j.id);
          claimed.push_back(a);
          claimed.push_back(b);
          probe.swap_occupants(a, b);
        }
      }
    }

    if (cls.kind == JTClass::Kind::Shift)
      for (JunctionId jid : cand.instr.junctions) {
        const Junction& j = graph.junctions[jid];
        probe.move_occupant(j.leg_end[static_cast<int>(cls.from)],
                            j.leg_end[static_cast<int>(cls.to)]);
      }

    cand.resulting_cost = lookahead_cost(probe, dag, za, ctx, cfg);
    cand.delta_cost = out.starting_cost - cand.resulting_cost;
    out.candidates.push_back(std::move(cand));
  }

  out.best = 0;
  for (int k = 1; k < static_cast<int>(out.candidates.size()); ++k)
    if (out.candidates[k].resulting_cost <
        out.candidates[out.best].resulting_cost)
      out.best = k;

  out.after = graph;
  const JTCandidate& bc = out.candidates[out.best];
  if (!bc.instr.junctions.empty()) fluxtrap::apply(Instruction{bc.instr}, out.after);
  return out;
}

}  // namespace fluxtrap
