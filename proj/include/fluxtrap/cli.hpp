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

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "fluxtrap/fluxtrap.hpp"

namespace fluxtrap {

// exit codes: 0 ok, 1 schedule validation violation, 2 input error,
// 3 deadlock abort
constexpr int kExitOk = 0;
constexpr int kExitInvalidSchedule = 1;
constexpr int kExitInputError = 2;
constexpr int kExitDeadlock = 3;

namespace cli_detail {

inline std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write '" + path + "'");
  out << content;
}

inline nlohmann::json load_json(const std::string& path) {
  try {
    return nlohmann::json::parse(read_file(path));
  } catch (const nlohmann::json::exception& e) {
    throw InputError("parse error in '" + path + "': " + e.what());
  }
}

inline Circuit load_circuit(const std::string& path) {
  const std::string text = read_file(path);
  const bool qasm = path.size() >= 5 && path.substr(path.size() - 5) == ".qasm";
  return parse_circuit(text, qasm ? CircuitFormat::QasmSubset
                                  : CircuitFormat::Json);
}

struct CompileArgs {
  std::string arch_path;
  std::string circuit_path;
  std::string policy = "fluxtrap";
  std::uint64_t seed = 0;
  double alpha = 0.3;
  std::string out_schedule;
  std::string out_metrics;
  std::string mapping = "packed";
  bool gantt = false;
  std::string dump_candidates;
};

inline int do_compile(const CompileArgs& a) {
  HardwareSpec spec = hardware_spec_from_json(load_json(a.arch_path));
  Circuit circuit = load_circuit(a.circuit_path);
  Policy policy;
  if (!policy_from_string(a.policy, policy))
    throw InputError("unknown policy '" + a.policy + "'");
  HeuristicConfig cfg;
  cfg.alpha = a.alpha;
  if (cfg.alpha < 0) throw InputError("alpha must be >= 0");

  PositionGraph graph = build_grid(spec);
  std::vector<PositionId> placement =
      initial_mapping(circuit, graph, a.mapping, a.seed);

  if (!a.dump_candidates.empty()) {
    // debug dump: the aggregation candidates on the initial state
    PositionGraph probe = graph;
    for (QubitId q = 0; q < circuit.n_qubits; ++q) probe.place(q, placement[q]);
    DependencyDAG dag(circuit);
    ZoneAssignment za(static_cast<GateId>(circuit.ops.size()),
                      static_cast<PositionId>(probe.positions.size()));
    for (GateId g : dag.front()) za.note_entered(g, 0);
    std::vector<char> engaged(circuit.n_qubits, 0);
    std::vector<char> reserved(probe.positions.size(), 0);
    CycleContext ctx = build_cycle_context(dag, za, engaged, cfg, 0);
    for (GateId g : ctx.front_gates) za.assign(g, dag.op(g), probe, cfg.zone_load_beta);
    for (auto [g, w] : ctx.next_gates)
      za.assign(g, dag.op(g), probe, cfg.zone_load_beta);
    AggregationStats stats;
    IntraPlan intra =
        aggregate_s3(probe, dag, za, ctx, engaged, reserved, cfg, &stats);
    JTAggregation jt = aggregate_jt(probe, dag, za, ctx, engaged, reserved, cfg);
    nlohmann::ordered_json dump;
    dump["starting_cost"] = intra.starting_cost;
    dump["intra"] = {{"instructions", intra.instrs.size()},
                     {"resulting_cost", intra.resulting_cost},
                     {"branch_count", stats.branch_count},
                     {"contended_slots", stats.contended_slots}};
    dump["jt_candidates"] = nlohmann::ordered_json::array();
    for (const JTCandidate& c : jt.candidates)
      dump["jt_candidates"].push_back(
          {{"class", c.instr.cls.name()},
           {"participants", c.instr.junctions.size()},
           {"resulting_cost", c.resulting_cost},
           {"delta_cost", c.delta_cost}});
    dump["best_class"] = jt.candidates[jt.best].instr.cls.name();
    write_file(a.dump_candidates, dump.dump(2) + "\n");
  }

  CompileResult result;
  try {
    result = compile(circuit, graph, placement, policy, cfg);
  } catch (const DeadlockError& e) {
    std::cerr << "deadlock: " << e.what() << "\n" << e.diagnostic << "\n";
    return kExitDeadlock;
  }

  std::vector<ScheduleViolation> violations =
      validate_schedule(result.schedule, spec, circuit, placement);
  if (!violations.empty()) {
    for (const ScheduleViolation& v : violations)
      std::cerr << "violation at t=" << v.t << ": " << v.rule << " (" << v.detail
                << ")\n";
    return kExitInvalidSchedule;
  }

  if (!a.out_schedule.empty())
    write_file(a.out_schedule, to_json(result.schedule).dump(2) + "\n");
  if (!a.out_metrics.empty())
    write_file(a.out_metrics, to_json(result.metrics).dump(2) + "\n");
  if (a.gantt) std::cout << render_gantt(result.schedule, graph);
  log_info("compiled %s: %lld us, F=%.6g", a.circuit_path.c_str(),
           static_cast<long long>(result.metrics.t_exe_us),
           result.metrics.fidelity.f_total);
  return kExitOk;
}

struct SweepArgs {
  std::string config_path;
  std::string out_path;
};

inline int do_sweep(const SweepArgs& a) {
  nlohmann::json cfg_json = load_json(a.config_path);
  HeuristicConfig heur;
  if (cfg_json.contains("heuristic"))
    heuristic_config_from_json(heur, cfg_json.at("heuristic"));
  std::uint64_t seed =
      cfg_json.contains("seed") ? cfg_json.at("seed").get<std::uint64_t>() : 0;

  struct ArchEntry {
    std::string label;
    HardwareSpec spec;
  };
  struct CircuitEntry {
    std::string label;
    Circuit circuit;
  };

  std::vector<ArchEntry> archs;
  if (cfg_json.contains("archs"))
    for (const auto& item : cfg_json.at("archs")) {
      if (item.is_string()) {
        archs.push_back({item.get<std::string>(),
                         hardware_spec_from_json(load_json(item))});
      } else {
        HardwareSpec spec = hardware_spec_from_json(item);
        std::string label = "grid" + std::to_string(spec.grid_dim) + "x" +
                            std::to_string(spec.grid_dim) + "-L" +
                            std::to_string(spec.trap_capacity) + "-gz" +
                            std::to_string(spec.gate_zones_per_trap);
        archs.push_back({label, spec});
      }
    }

  std::vector<CircuitEntry> circuits;
  if (cfg_json.contains("circuits"))
    for (const auto& item : cfg_json.at("circuits")) {
      if (item.is_string()) {
        circuits.push_back({item.get<std::string>(),
                            load_circuit(item.get<std::string>())});
      } else {
        std::string kind = item.at("kind").get<std::string>();
        int n = item.at("qubits").get<int>();
        std::uint64_t s = item.contains("seed")
                              ? item.at("seed").get<std::uint64_t>()
                              : seed;
        int layers = item.contains("layers") ? item.at("layers").get<int>() : 1;
        circuits.push_back({kind + "-" + std::to_string(n) + "-s" +
                                std::to_string(s),
                            gen_benchmark(kind, n, s, layers)});
      }
    }

  std::vector<std::string> policies;
  if (cfg_json.contains("policies"))
    for (const auto& p : cfg_json.at("policies"))
      policies.push_back(p.get<std::string>());

  std::string csv = metrics_csv_header() + "\n";
  for (const ArchEntry& arch : archs) {
    PositionGraph graph = build_grid(arch.spec);
    for (const CircuitEntry& ce : circuits) {
      std::vector<PositionId> placement =
          initial_mapping(ce.circuit, graph, "packed", seed);
      for (const std::string& pname : policies) {
        Policy policy;
        if (!policy_from_string(pname, policy))
          throw InputError("sweep: unknown policy '" + pname + "'");
        CompileResult r = compile(ce.circuit, graph, placement, policy, heur);
        std::vector<ScheduleViolation> violations =
            validate_schedule(r.schedule, arch.spec, ce.circuit, placement);
        if (!violations.empty())
          throw InputError("sweep: invalid schedule for " + ce.label);
        csv += metrics_csv_row(arch.label, ce.label, pname, seed, r.metrics) +
               "\n";
      }
    }
  }
  write_file(a.out_path, csv);
  return kExitOk;
}

}  // namespace cli_detail

/// Entry point shared by the binary and the tests.
inline int run_cli(const std::vector<std::string>& args) {
  CLI::App app{"FluxTrap: SIMD-aware compiler for grid trapped-ion machines"};
  app.require_subcommand(1);

  // gen-arch
  auto* gen_arch = app.add_subcommand("gen-arch", "write a hardware spec file");
  int grid = 2, capacity = 8, zones = 2;
  double coherence = 600.0;
  std::string arch_out;
  gen_arch->add_option("--grid", grid, "junction grid dimension D")->required();
  gen_arch->add_option("--trap-capacity", capacity, "positions per 1D trap")
      ->required();
  gen_arch->add_option("--gate-zones", zones, "gate zones per trap")->required();
  gen_arch->add_option("--coherence", coherence, "coherence time in seconds");
  gen_arch->add_option("--out", arch_out, "output path")->required();

  // gen-bench
  auto* gen_bench = app.add_subcommand("gen-bench", "write a benchmark circuit");
  std::string kind;
  int qubits = 0, layers = 1;
  std::uint64_t bench_seed = 0;
  std::string bench_out;
  gen_bench->add_option("--kind", kind, "qaoa|rca|bv|vqe")->required();
  gen_bench->add_option("--qubits", qubits, "circuit width")->required();
  gen_bench->add_option("--seed", bench_seed, "generator seed");
  gen_bench->add_option("--layers", layers, "vqe ansatz layers (default 1)");
  gen_bench->add_option("--out", bench_out, "output path")->required();

  // compile
  auto* compile_cmd = app.add_subcommand("compile", "compile and validate");
  cli_detail::CompileArgs ca;
  compile_cmd->add_option("--arch", ca.arch_path, "hardware spec JSON")
      ->required();
  compile_cmd->add_option("--circuit", ca.circuit_path, "circuit (.json|.qasm)")
      ->required();
  compile_cmd->add_option("--policy", ca.policy,
                          "fluxtrap|eager-jt|depth-sync");
  compile_cmd->add_option("--seed", ca.seed, "initial-mapping seed");
  compile_cmd->add_option("--alpha", ca.alpha, "heuristic alpha (default 0.3)");
  compile_cmd->add_option("--out-schedule", ca.out_schedule, "schedule JSON out");
  compile_cmd->add_option("--out-metrics", ca.out_metrics, "metrics JSON out");
  compile_cmd->add_option("--mapping", ca.mapping, "packed|random");
  compile_cmd->add_flag("--gantt", ca.gantt, "print a text gantt");
  compile_cmd->add_option("--dump-candidates", ca.dump_candidates,
                          "write initial aggregation candidates JSON");

  // sweep
  auto* sweep_cmd = app.add_subcommand("sweep", "cross-product runs to CSV");
  cli_detail::SweepArgs sa;
  sweep_cmd->add_option("--config", sa.config_path, "sweep config JSON")
      ->required();
  sweep_cmd->add_option("--out", sa.out_path, "output CSV path")->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInputError;
  }

  try {
    if (gen_arch->parsed()) {
      HardwareSpec spec;
      spec.grid_dim = grid;
      spec.trap_capacity = capacity;
      spec.gate_zones_per_trap = zones;
      spec.coherence_time_s = coherence;
      spec.validate();
      cli_detail::write_file(arch_out, to_json(spec).dump(2) + "\n");
      return kExitOk;
    }
    if (gen_bench->parsed()) {
      Circuit c = gen_benchmark(kind, qubits, bench_seed, layers);
      cli_detail::write_file(bench_out, to_json(c).dump(2) + "\n");
      return kExitOk;
    }
    if (compile_cmd->parsed()) return cli_detail::do_compile(ca);
    if (sweep_cmd->parsed()) return cli_detail::do_sweep(sa);
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInputError;
  }
  return kExitInputError;
}

}  // namespace fluxtrap
