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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"
#include "support.hpp"

using namespace fluxtrap;

namespace {

HardwareSpec small_spec(int d = 1, int l = 6, int gz = 2) {
  HardwareSpec spec;
  spec.grid_dim = d;
  spec.trap_capacity = l;
  spec.gate_zones_per_trap = gz;
  return spec;
}

std::vector<QubitId> occupancy_snapshot(const PositionGraph& g) {
  std::vector<QubitId> v;
  for (const Position& p : g.positions) v.push_back(p.occupant);
  return v;
}

}  // namespace

TEST_CASE("JT class enumeration: 18 classes, 12 shifts then 6 swaps") {
  const auto& classes = enumerate_jt_classes();
  CHECK(classes.size() == 18);
  int shifts = 0, swaps = 0;
  std::set<std::string> names;
  for (const JTClass& c : classes) {
    names.insert(c.name());
    if (c.kind == JTClass::Kind::Shift) {
      ++shifts;
      CHECK(c.from != c.to);
    } else {
      ++swaps;
      CHECK(static_cast<int>(c.from) < static_cast<int>(c.to));
    }
  }
  CHECK(shifts == 12);
  CHECK(swaps == 6);
  CHECK(names.size() == 18);
  // deterministic order: shifts first, lexicographic
  CHECK(classes[0].name() == "shift:N>E");
  CHECK(classes[12].kind == JTClass::Kind::Swap);
}

TEST_CASE("instruction latencies follow the op table") {
  OpTable t;
  CHECK(instruction_latency(Gate1Q{0, GateKind::H}, t) == 5);
  CHECK(instruction_latency(Gate2Q{0, 1, GateKind::Cx, 0, kNoGate, true}, t) ==
        25);
  // adjacent-ion form folds shift-in + gate + shift-out
  CHECK(instruction_latency(Gate2Q{0, 1, GateKind::Cx, 0, kNoGate, false}, t) ==
        141);
  CHECK(instruction_latency(MeasureOp{0}, t) == 120);
  CHECK(instruction_latency(IntraShift{0, 1, 2}, t) == 58);
  CHECK(instruction_latency(IntraSwap{0, 1}, t) == 200);
  // width independence
  CHECK(instruction_latency(S3{0, ShiftDir::Right, 0, 9}, t) == 58);
  JTSimd shift{enumerate_jt_classes()[0], {0}};
  JTSimd swap{enumerate_jt_classes()[12], {0}};
  CHECK(instruction_latency(shift, t) == 250);
  CHECK(instruction_latency(swap, t) == 500);
}

TEST_CASE("validate: shifts, gates, zones") {
  PositionGraph g = testing::graph_with(small_spec(), {{0, 1}, {1, 2}, {2, 3}});
  // trap 0 of L=6 has zones at {1, 3}

  CHECK(validate(IntraShift{0, 3, 4}, g).empty());
  CHECK(!validate(IntraShift{0, 2, 4}, g).empty());  // not one step
  auto v = validate(IntraShift{0, 1, 2}, g);
  REQUIRE(!v.empty());
  CHECK(v[0].rule == "destination occupied");

  CHECK(validate(Gate1Q{0, GateKind::H}, g).empty());  // qubit 0 at zone 1
  v = validate(Gate1Q{1, GateKind::H}, g);             // index 2 is auxiliary
  REQUIRE(!v.empty());
  CHECK(v[0].rule == "not in gate zone");

  CHECK(validate(MeasureOp{2}, g).empty());  // qubit 2 at zone 3
  CHECK(validate(Gate2Q{0, 1, GateKind::Cx}, g).empty());

  // adjacent but neither in a zone
  PositionGraph g2 = testing::graph_with(small_spec(1, 8, 2), {{0, 3}, {1, 4}});
  // L=8 zones {2,5}: indices 3 and 4 are auxiliary
  v = validate(Gate2Q{0, 1, GateKind::Cx}, g2);
  REQUIRE(!v.empty());
  CHECK(v[0].rule == "not in gate zone");

  // different traps
  PositionGraph g3 = build_grid(small_spec());
  g3.place(0, g3.traps[0][1]);
  g3.place(1, g3.traps[1][1]);
  v = validate(Gate2Q{0, 1, GateKind::Cx}, g3);
  CHECK(!v.empty());
}

TEST_CASE("validate: S3 contiguity and head destination") {
  PositionGraph g = testing::graph_with(small_spec(), {{0, 1}, {1, 2}, {2, 3}});
  CHECK(validate(S3{0, ShiftDir::Right, 1, 3}, g).empty());
  CHECK(validate(S3{0, ShiftDir::Left, 1, 3}, g).empty());

  auto v = validate(S3{0, ShiftDir::Right, 0, 2}, g);  // slot 0 vacant
  CHECK(!v.empty());

  PositionGraph packed =
      testing::graph_with(small_spec(), {{0, 3}, {1, 4}, {2, 5}});
  v = validate(S3{0, ShiftDir::Right, 3, 3}, packed);  // head at trap end
  REQUIRE(!v.empty());
  CHECK(v[0].rule == "dest in trap");
}

TEST_CASE("validate: JT participants must sit at the class legs") {
  HardwareSpec spec = small_spec(1, 4, 1);
  PositionGraph g = build_grid(spec);
  const Junction& j = g.junctions[0];
  PositionId west = j.leg_end[static_cast<int>(Leg::West)];
  PositionId south = j.leg_end[static_cast<int>(Leg::South)];

  JTClass ws{JTClass::Kind::Shift, Leg::West, Leg::South};

  // no ion at the west leg end
  auto v = validate(JTSimd{ws, {0}}, g);
  REQUIRE(!v.empty());
  CHECK(v[0].rule == "source occupied");

  g.place(0, west);
  CHECK(validate(JTSimd{ws, {0}}, g).empty());

  g.place(1, south);
  v = validate(JTSimd{ws, {0}}, g);
  REQUIRE(!v.empty());
  CHECK(v[0].rule == "destination occupied");

  JTClass swap{JTClass::Kind::Swap, Leg::South, Leg::West};
  // normalized order is (from < to): South=2, West=3
  CHECK(validate(JTSimd{swap, {0}}, g).empty());
}

TEST_CASE("apply: S3 moves the whole run and equals scalar composition") {
  for (ShiftDir dir : {ShiftDir::Right, ShiftDir::Left}) {
    PositionGraph g =
        testing::graph_with(small_spec(), {{10, 1}, {11, 2}, {12, 3}});
    S3 grouped{0, dir, 1, 3};
    PositionGraph by_group = g;
    fluxtrap::apply(Instruction{grouped}, by_group);

    // oracle: scalar shifts executed head first
    PositionGraph by_scalar = g;
    int step = dir_step(dir);
    int head = grouped.head_index();
    for (int k = 0; k < grouped.width; ++k) {
      int idx = head - k * step;
      fluxtrap::apply(Instruction{IntraShift{0, idx, idx + step}}, by_scalar);
    }
    CHECK(occupancy_snapshot(by_group) == occupancy_snapshot(by_scalar));

    // but the grouped form costs a single shift latency
    OpTable t;
    CHECK(instruction_latency(grouped, t) == t.intra_shift.latency_us);
  }
}

TEST_CASE("apply: JT swap is an involution, gates leave occupancy alone") {
  HardwareSpec spec = small_spec(1, 4, 2);
  PositionGraph g = build_grid(spec);
  const Junction& j = g.junctions[0];
  g.place(0, j.leg_end[static_cast<int>(Leg::North)]);
  g.place(1, j.leg_end[static_cast<int>(Leg::East)]);

  JTClass ne{JTClass::Kind::Swap, Leg::North, Leg::East};
  auto before = occupancy_snapshot(g);
  fluxtrap::apply(Instruction{JTSimd{ne, {0}}}, g);
  CHECK(occupancy_snapshot(g) != before);
  fluxtrap::apply(Instruction{JTSimd{ne, {0}}}, g);
  CHECK(occupancy_snapshot(g) == before);

  PositionGraph h = testing::graph_with(small_spec(), {{0, 1}, {1, 2}});
  auto occ = occupancy_snapshot(h);
  fluxtrap::apply(Instruction{Gate2Q{0, 1, GateKind::Cx}}, h);
  CHECK(occupancy_snapshot(h) == occ);
}

TEST_CASE("apply rejects illegal instructions with the validation report") {
  PositionGraph g = testing::graph_with(small_spec(), {{0, 1}, {1, 2}});
  CHECK_THROWS_AS(fluxtrap::apply(Instruction{IntraShift{0, 1, 2}}, g),
                  ValidationError);
}

TEST_CASE("property: random legal instructions preserve the qubit partition") {
  Rng rng(99);
  for (int trial = 0; trial < 200; ++trial) {
    HardwareSpec spec = testing::random_spec(rng.next());
    PositionGraph g = build_grid(spec);
    int n_qubits = 1 + static_cast<int>(rng.below(
                           std::min<std::size_t>(8, g.positions.size())));
    // scatter qubits
    std::vector<PositionId> slots(g.positions.size());
    for (std::size_t i = 0; i < slots.size(); ++i)
      slots[i] = static_cast<PositionId>(i);
    rng.shuffle(slots);
    for (QubitId q = 0; q < n_qubits; ++q) g.place(q, slots[q]);

    // enumerate candidate transports, apply one legal pick
    std::vector<Instruction> legal;
    for (TrapId t = 0; t < static_cast<TrapId>(g.traps.size()); ++t)
      for (int i = 0; i + 1 < spec.trap_capacity; ++i) {
        if (validate(IntraShift{t, i, i + 1}, g).empty())
          legal.push_back(IntraShift{t, i, i + 1});
        if (validate(IntraSwap{t, i}, g).empty())
          legal.push_back(IntraSwap{t, i});
        for (int w = 1; i + w <= spec.trap_capacity; ++w)
          if (validate(S3{t, ShiftDir::Right, i, w}, g).empty())
            legal.push_back(S3{t, ShiftDir::Right, i, w});
      }
    for (const JTClass& cls : enumerate_jt_classes()) {
      std::vector<JunctionId> parts;
      for (const Junction& j : g.junctions)
        if (validate(JTSimd{cls, {j.id}}, g).empty()) parts.push_back(j.id);
      if (!parts.empty() && validate(JTSimd{cls, parts}, g).empty())
        legal.push_back(JTSimd{cls, parts});
    }
    if (legal.empty()) continue;
    const Instruction& pick = legal[rng.below(legal.size())];
    fluxtrap::apply(pick, g);

    std::set<QubitId> seen;
    for (const Position& p : g.positions)
      if (p.occupant != kVacant) {
        CHECK(!seen.count(p.occupant));
        seen.insert(p.occupant);
      }
    CHECK(static_cast<int>(seen.size()) == n_qubits);
  }
}

TEST_CASE("op table JSON overrides") {
  OpTable t;
  nlohmann::json j = {{"gate2q", {{"latency_us", 30}}},
                      {"inter_shift", {{"fidelity", 0.999}}}};
  apply_op_table_overrides(t, j);
  CHECK(t.gate2q.latency_us == 30);
  CHECK(t.inter_shift.fidelity == doctest::Approx(0.999));
  CHECK(t.gate1q.latency_us == 5);

  nlohmann::json bad = {{"warp_drive", {{"latency_us", 1}}}};
  CHECK_THROWS_AS(apply_op_table_overrides(t, bad), InputError);
}
