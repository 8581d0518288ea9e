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

#include <cctype>
#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "fluxtrap/circuit.hpp"
#include "json.hpp"

namespace fluxtrap {

// ---------------------------------------------------------------------------
// JSON format: { "n": int, "ops": [ {"kind":"cx","q":[0,1]},
//                                   {"kind":"rz","q":[2],"param":0.5}, ... ] }
// ---------------------------------------------------------------------------

inline nlohmann::ordered_json to_json(const Circuit& c) {
  nlohmann::ordered_json j;
  j["n"] = c.n_qubits;
  j["ops"] = nlohmann::ordered_json::array();
  for (const CircuitOp& op : c.ops) {
    nlohmann::ordered_json o;
    o["kind"] = to_string(op.kind);
    o["q"] = op.arity() == 2 ? nlohmann::ordered_json{op.q0, op.q1}
                             : nlohmann::ordered_json{op.q0};
    if (has_param(op.kind)) o["param"] = op.param;
    j["ops"].push_back(std::move(o));
  }
  return j;
}

inline Circuit circuit_from_json(const nlohmann::json& j) {
  Circuit c;
  try {
    c.n_qubits = j.at("n").get<int>();
    for (const auto& o : j.at("ops")) {
      CircuitOp op{};
      std::string kind = o.at("kind").get<std::string>();
      if (!gate_kind_from_string(kind, op.kind))
        throw InputError("circuit: unknown gate '" + kind + "'");
      const auto& q = o.at("q");
      if (static_cast<int>(q.size()) != op.arity())
        throw InputError("circuit: wrong operand count for " + kind);
      op.q0 = q[0].get<QubitId>();
      if (op.arity() == 2) op.q1 = q[1].get<QubitId>();
      if (o.contains("param")) op.param = o.at("param").get<double>();
      c.ops.push_back(op);
    }
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("circuit json: ") + e.what());
  }
  c.validate();
  return c;
}

// ---------------------------------------------------------------------------
// OpenQASM 2 subset: qreg/creg, h x y z s sdg t tdg rx ry rz, cx cz rzz,
// measure. Anything else is an error with its line number.
// ---------------------------------------------------------------------------

namespace detail {

struct QasmStatement {
  std::string text;
  int line;
};

inline std::vector<QasmStatement> split_qasm(const std::string& src) {
  std::vector<QasmStatement> stmts;
  std::string cur;
  int line = 1;
  int stmt_line = 1;
  for (std::size_t i = 0; i < src.size(); ++i) {
    char ch = src[i];
    if (ch == '/' && i + 1 < src.size() && src[i + 1] == '/') {
      while (i < src.size() && src[i] != '\n') ++i;
      --i;
      continue;
    }
    if (ch == '\n') ++line;
    if (ch == ';') {
      stmts.push_back({cur, stmt_line});
      cur.clear();
      stmt_line = line;
      continue;
    }
    if (cur.empty() && std::isspace(static_cast<unsigned char>(ch))) {
      stmt_line = line;
      continue;
    }
    cur += ch;
  }
  // trailing non-statement text (e.g. whitespace) is fine; anything else is
  // a missing semicolon
  for (char ch : cur)
    if (!std::isspace(static_cast<unsigned char>(ch)))
      throw InputError("qasm line " + std::to_string(stmt_line) +
                       ": missing ';'");
  return stmts;
}

inline std::vector<std::string> tokenize(const std::string& s) {
  std::vector<std::string> toks;
  std::string cur;
  auto flush = [&] {
    if (!cur.empty()) {
      toks.push_back(cur);
      cur.clear();
    }
  };
  for (char ch : s) {
    if (std::isspace(static_cast<unsigned char>(ch))) {
      flush();
    } else if (ch == '(' || ch == ')' || ch == '[' || ch == ']' || ch == ',' ||
               ch == ';') {
      flush();
      toks.push_back(std::string(1, ch));
    } else {
      cur += ch;
    }
  }
  flush();
  return toks;
}

}  // namespace detail

enum class CircuitFormat { Json, QasmSubset };

/// Parses the supported OpenQASM 2 subset into a Circuit. Qubit registers are
/// flattened in declaration order; classical registers are accepted only so
/// measure statements can name them.
inline Circuit parse_qasm(const std::string& src) {
  Circuit c;
  std::map<std::string, std::pair<int, int>> qregs;  // name -> (offset, size)
  std::map<std::string, int> cregs;

  auto fail = [](int line, const std::string& msg) -> void {
    throw InputError("qasm line " + std::to_string(line) + ": " + msg);
  };

  // resolves "name [ idx ]" starting at position i; returns flat qubit index
  auto parse_ref = [&](const std::vector<std::string>& t, std::size_t& i,
                       int line) -> QubitId {
    if (i >= t.size()) fail(line, "expected qubit reference");
    std::string name = t[i++];
    auto it = qregs.find(name);
    if (it == qregs.end()) fail(line, "unknown register '" + name + "'");
    if (i + 2 >= t.size() || t[i] != "[")
      fail(line, "expected '[index]' after register");
    ++i;
    int idx = 0;
    try {
      idx = std::stoi(t[i]);
    } catch (...) {
      fail(line, "bad index '" + t[i] + "'");
    }
    ++i;
    if (i >= t.size() || t[i] != "]") fail(line, "expected ']'");
    ++i;
    if (idx < 0 || idx >= it->second.second)
      fail(line, "index out of range for '" + name + "'");
    return it->second.first + idx;
  };

  auto parse_param = [&](const std::vector<std::string>& t, std::size_t& i,
                         int line) -> double {
    if (i >= t.size() || t[i] != "(") fail(line, "expected '('");
    ++i;
    if (i >= t.size()) fail(line, "expected parameter");
    // accept plain numbers and the common pi expressions pi, -pi, pi/N, N*pi
    std::string expr;
    while (i < t.size() && t[i] != ")") expr += t[i++];
    if (i >= t.size()) fail(line, "expected ')'");
    ++i;
    const double pi = 3.14159265358979323846;
    double value = 0.0;
    try {
      std::size_t slash = expr.find('/');
      std::size_t star = expr.find('*');
      if (expr == "pi") {
        value = pi;
      } else if (expr == "-pi") {
        value = -pi;
      } else if (slash != std::string::npos &&
                 (expr.substr(0, slash) == "pi" || expr.substr(0, slash) == "-pi")) {
        double num = expr[0] == '-' ? -pi : pi;
        value = num / std::stod(expr.substr(slash + 1));
      } else if (star != std::string::npos && expr.substr(star + 1) == "pi") {
        value = std::stod(expr.substr(0, star)) * pi;
      } else {
        value = std::stod(expr);
      }
    } catch (...) {
      fail(line, "cannot parse parameter '" + expr + "'");
    }
    return value;
  };

  for (const detail::QasmStatement& stmt : detail::split_qasm(src)) {
    std::vector<std::string> t = detail::tokenize(stmt.text);
    if (t.empty()) continue;
    const std::string& head = t[0];
    const int line = stmt.line;

    if (head == "OPENQASM") continue;
    if (head == "include") continue;

    if (head == "qreg" || head == "creg") {
      if (t.size() < 5 || t[2] != "[" || t[4] != "]")
        fail(line, "malformed register declaration");
      int size = 0;
      try {
        size = std::stoi(t[3]);
      } catch (...) {
        fail(line, "bad register size");
      }
      if (size < 1) fail(line, "register size must be >= 1");
      if (head == "qreg") {
        if (qregs.count(t[1])) fail(line, "duplicate qreg '" + t[1] + "'");
        qregs[t[1]] = {c.n_qubits, size};
        c.n_qubits += size;
      } else {
        cregs[t[1]] = size;
      }
      continue;
    }

    if (head == "measure") {
      std::size_t i = 1;
      QubitId q = parse_ref(t, i, line);
      if (i < t.size() && t[i] == "->")
        ++i;
      else
        fail(line, "expected '->' in measure");
      // classical target: name [ idx ]
      if (i >= t.size() || !cregs.count(t[i]))
        fail(line, "unknown classical register in measure");
      c.ops.push_back({GateKind::Measure, q});
      continue;
    }

    GateKind kind;
    if (!gate_kind_from_string(head, kind))
      fail(line, "unsupported statement or gate '" + head + "'");

    std::size_t i = 1;
    double param = 0.0;
    if (has_param(kind)) param = parse_param(t, i, line);
    QubitId q0 = parse_ref(t, i, line);
    if (is_two_qubit(kind)) {
      if (i >= t.size() || t[i] != ",") fail(line, "expected ','");
      ++i;
      QubitId q1 = parse_ref(t, i, line);
      c.ops.push_back({kind, q0, q1, param});
    } else {
      if (i < t.size() && t[i] == ",")
        fail(line, "too many operands for '" + head + "'");
      c.ops.push_back({kind, q0, -1, param});
    }
  }

  c.validate();
  return c;
}

inline Circuit parse_circuit(const std::string& text, CircuitFormat format) {
  if (format == CircuitFormat::QasmSubset) return parse_qasm(text);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("circuit json: ") + e.what());
  }
  return circuit_from_json(j);
}

}  // namespace fluxtrap
