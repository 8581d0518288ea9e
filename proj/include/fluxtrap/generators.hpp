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

#include "fluxtrap/circuit.hpp"
#include "fluxtrap/common.hpp"

namespace fluxtrap {

/// QAOA (p = 1) on a seeded random 3-regular graph: one ZZ interaction per
/// edge followed by an RX mixer layer. n must be even and >= 4.
inline Circuit gen_qaoa(int n, std::uint64_t seed) {
  if (n < 4 || n % 2 != 0)
    throw InputError("qaoa: 3-regular graphs need even n >= 4");
  Rng rng(seed);

  // configuration model with rejection of self-loops and multi-edges
  std::vector<std::pair<QubitId, QubitId>> edges;
  for (int attempt = 0;; ++attempt) {
    if (attempt > 10000) throw InputError("qaoa: graph sampling failed");
    std::vector<QubitId> stubs;
    stubs.reserve(3 * n);
    for (QubitId v = 0; v < n; ++v)
      for (int k = 0; k < 3; ++k) stubs.push_back(v);
    rng.shuffle(stubs);
    edges.clear();
    std::set<std::pair<QubitId, QubitId>> seen;
    bool ok = true;
    for (std::size_t i = 0; i < stubs.size(); i += 2) {
      QubitId a = std::min(stubs[i], stubs[i + 1]);
      QubitId b = std::max(stubs[i], stubs[i + 1]);
      if (a == b || seen.count({a, b})) {
        ok = false;
        break;
      }
      seen.insert({a, b});
      edges.push_back({a, b});
    }
    if (ok) break;
  }
  std::sort(edges.begin(), edges.end());

  Circuit c;
  c.n_qubits = n;
  const double gamma = rng.real01() * 3.14159265358979323846;
  const double beta = rng.real01() * 3.14159265358979323846;
  for (auto [a, b] : edges) c.ops.push_back({GateKind::Rzz, a, b, gamma});
  for (QubitId q = 0; q < n; ++q) c.ops.push_back({GateKind::Rx, q, -1, beta});
  return c;
}

/// Bernstein-Vazirani on n-1 data qubits plus one ancilla. The secret string
/// is a seeded balanced bit pattern, so exactly (n-1+1)/2 of the data qubits
/// get a CX onto the ancilla.
inline Circuit gen_bv(int n, std::uint64_t seed) {
  if (n < 2) throw InputError("bv: need n >= 2");
  Rng rng(seed);
  const int data = n - 1;
  const int ones = (data + 1) / 2;
  std::vector<QubitId> idx(data);
  for (int i = 0; i < data; ++i) idx[i] = i;
  rng.shuffle(idx);
  std::vector<char> secret(data, 0);
  for (int i = 0; i < ones; ++i) secret[idx[i]] = 1;

  Circuit c;
  c.n_qubits = n;
  const QubitId anc = n - 1;
  c.ops.push_back({GateKind::X, anc});
  for (QubitId q = 0; q < n; ++q) c.ops.push_back({GateKind::H, q});
  for (QubitId q = 0; q < data; ++q)
    if (secret[q]) c.ops.push_back({GateKind::Cx, q, anc});
  for (QubitId q = 0; q < data; ++q) c.ops.push_back({GateKind::H, q});
  for (QubitId q = 0; q < data; ++q) c.ops.push_back({GateKind::Measure, q});
  return c;
}

namespace detail {

// textbook CCX decomposition over {H, T, Tdg, CX}
inline void emit_ccx(Circuit& c, QubitId a, QubitId b, QubitId t) {
  c.ops.push_back({GateKind::H, t});
  c.ops.push_back({GateKind::Cx, b, t});
  c.ops.push_back({GateKind::Tdg, t});
  c.ops.push_back({GateKind::Cx, a, t});
  c.ops.push_back({GateKind::T, t});
  c.ops.push_back({GateKind::Cx, b, t});
  c.ops.push_back({GateKind::Tdg, t});
  c.ops.push_back({GateKind::Cx, a, t});
  c.ops.push_back({GateKind::T, b});
  c.ops.push_back({GateKind::T, t});
  c.ops.push_back({GateKind::H, t});
  c.ops.push_back({GateKind::Cx, a, b});
  c.ops.push_back({GateKind::T, a});
  c.ops.push_back({GateKind::Tdg, b});
  c.ops.push_back({GateKind::Cx, a, b});
}

inline void emit_maj(Circuit& c, QubitId x, QubitId y, QubitId z) {
  c.ops.push_back({GateKind::Cx, z, y});
  c.ops.push_back({GateKind::Cx, z, x});
  emit_ccx(c, x, y, z);
}

inline void emit_uma(Circuit& c, QubitId x, QubitId y, QubitId z) {
  emit_ccx(c, x, y, z);
  c.ops.push_back({GateKind::Cx, z, x});
  c.ops.push_back({GateKind::Cx, x, y});
}

}  // namespace detail

/// Cuccaro ripple-carry adder on two floor((n-2)/2)-bit registers with a
/// carry-in ancilla and carry-out qubit (Toffolis decomposed to the
/// Clifford+T network). Uses 2*bits + 2 qubits of the declared n.
inline Circuit gen_rca(int n) {
  if (n < 4) throw InputError("rca: need n >= 4");
  const int bits = (n - 2) / 2;
  Circuit c;
  c.n_qubits = n;
  const QubitId carry = 0;
  auto b_reg = [](int i) { return 1 + 2 * i; };
  auto a_reg = [](int i) { return 2 + 2 * i; };
  const QubitId z = 2 * bits + 1;

  detail::emit_maj(c, carry, b_reg(0), a_reg(0));
  for (int i = 1; i < bits; ++i)
    detail::emit_maj(c, a_reg(i - 1), b_reg(i), a_reg(i));
  c.ops.push_back({GateKind::Cx, a_reg(bits - 1), z});
  for (int i = bits - 1; i >= 1; --i)
    detail::emit_uma(c, a_reg(i - 1), b_reg(i), a_reg(i));
  detail::emit_uma(c, carry, b_reg(0), a_reg(0));
  return c;
}

/// VQE full-entanglement ansatz: per layer, RY/RZ rotations on every qubit
/// followed by CX between all ordered pairs i < j.
inline Circuit gen_vqe(int n, int layers, std::uint64_t seed) {
  if (n < 2) throw InputError("vqe: need n >= 2");
  if (layers < 1) throw InputError("vqe: need layers >= 1");
  Rng rng(seed);
  Circuit c;
  c.n_qubits = n;
  const double two_pi = 2.0 * 3.14159265358979323846;
  for (int l = 0; l < layers; ++l) {
    for (QubitId q = 0; q < n; ++q) {
      c.ops.push_back({GateKind::Ry, q, -1, rng.real01() * two_pi});
      c.ops.push_back({GateKind::Rz, q, -1, rng.real01() * two_pi});
    }
    for (QubitId i = 0; i < n; ++i)
      for (QubitId j = i + 1; j < n; ++j)
        c.ops.push_back({GateKind::Cx, i, j});
  }
  return c;
}

inline Circuit gen_benchmark(const std::string& kind, int n, std::uint64_t seed,
                             int layers = 1) {
  if (kind == "qaoa") return gen_qaoa(n, seed);
  if (kind == "bv") return gen_bv(n, seed);
  if (kind == "rca") return gen_rca(n);
  if (kind == "vqe") return gen_vqe(n, layers, seed);
  throw InputError("unknown benchmark kind '" + kind + "'");
}

}  // namespace fluxtrap
