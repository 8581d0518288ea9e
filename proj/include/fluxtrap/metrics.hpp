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

#include <cmath>
#include <string>

#include "fluxtrap/op_table.hpp"
#include "fluxtrap/scheduler.hpp"
#include "json.hpp"

namespace fluxtrap {

struct OpCounts {
  std::int64_t n_1q = 0;
  std::int64_t n_2q = 0;
  std::int64_t n_meas = 0;
  std::int64_t n_intra_shift = 0;
  std::int64_t n_intra_swap = 0;
  std::int64_t n_inter_shift = 0;
  std::int64_t n_inter_swap = 0;
};

struct TimeBreakdown {
  TimeUs gate_us = 0;
  TimeUs intra_transport_us = 0;
  TimeUs inter_transport_us = 0;
};

struct FidelityReport {
  double f_1q = 1.0;
  double f_2q = 1.0;
  double f_meas = 1.0;
  double f_transport = 1.0;
  double f_decoh = 1.0;
  double f_total = 1.0;
};

struct Metrics {
  TimeUs t_exe_us = 0;
  int n_qubits = 0;
  OpCounts counts;
  TimeBreakdown breakdown;
  FidelityReport fidelity;
};

/// Counts operations per moved ion and sums busy time per event category.
///
/// Grouping saves time, not error events: a width-k S3 adds k shift counts,
/// a junction transfer adds one count per participating junction (swaps are
/// one exchange event per pair). The adjacent two-qubit form adds the two
/// embedded shift-in/out counts on top of the gate count.
inline std::pair<OpCounts, TimeBreakdown> count_schedule(const Schedule& s) {
  OpCounts c;
  TimeBreakdown b;
  for (const ScheduleEvent& e : s.events) {
    struct Visitor {
      OpCounts& c;
      TimeBreakdown& b;
      TimeUs dur;
      void operator()(const Gate1Q&) const {
        ++c.n_1q;
        b.gate_us += dur;
      }
      void operator()(const Gate2Q& g) const {
        ++c.n_2q;
        if (!g.colocated) c.n_intra_shift += 2;
        b.gate_us += dur;
      }
      void operator()(const MeasureOp&) const {
        ++c.n_meas;
        b.gate_us += dur;
      }
      void operator()(const IntraShift&) const {
        ++c.n_intra_shift;
        b.intra_transport_us += dur;
      }
      void operator()(const IntraSwap&) const {
        ++c.n_intra_swap;
        b.intra_transport_us += dur;
      }
      void operator()(const S3& i) const {
        c.n_intra_shift += i.width;
        b.intra_transport_us += dur;
      }
      void operator()(const JTSimd& i) const {
        auto participants = static_cast<std::int64_t>(i.junctions.size());
        if (i.cls.kind == JTClass::Kind::Shift)
          c.n_inter_shift += participants;
        else
          c.n_inter_swap += participants;
        b.inter_transport_us += dur;
      }
    };
    std::visit(Visitor{c, b, e.dur}, e.instr);
  }
  return {c, b};
}

/// Multiplicative fidelity model: each component is the op fidelity raised to
/// its count, decoherence decays exponentially with qubit-seconds of runtime.
inline FidelityReport fidelity(const OpCounts& c, TimeUs t_exe_us, int n_qubits,
                               const OpTable& table, double t_coh_s) {
  FidelityReport f;
  f.f_1q = std::pow(table.gate1q.fidelity, static_cast<double>(c.n_1q));
  f.f_2q = std::pow(table.gate2q.fidelity, static_cast<double>(c.n_2q));
  f.f_meas = std::pow(table.measure.fidelity, static_cast<double>(c.n_meas));
  f.f_transport =
      std::pow(table.intra_shift.fidelity, static_cast<double>(c.n_intra_shift)) *
      std::pow(table.intra_swap.fidelity, static_cast<double>(c.n_intra_swap)) *
      std::pow(table.inter_shift.fidelity, static_cast<double>(c.n_inter_shift)) *
      std::pow(table.inter_swap.fidelity, static_cast<double>(c.n_inter_swap));
  const double t_exe_s = static_cast<double>(t_exe_us) * 1e-6;
  f.f_decoh = std::exp(-static_cast<double>(n_qubits) * t_exe_s / t_coh_s);
  f.f_total = f.f_1q * f.f_2q * f.f_meas * f.f_transport * f.f_decoh;
  return f;
}

inline Metrics compute_metrics(const Schedule& s, int n_qubits,
                               const HardwareSpec& spec) {
  Metrics m;
  m.t_exe_us = s.total_time;
  m.n_qubits = n_qubits;
  auto [counts, breakdown] = count_schedule(s);
  m.counts = counts;
  m.breakdown = breakdown;
  m.fidelity = fidelity(counts, s.total_time, n_qubits, spec.op_table,
                        spec.coherence_time_s);
  return m;
}

inline nlohmann::ordered_json to_json(const Metrics& m) {
  nlohmann::ordered_json j;
  j["t_exe_us"] = m.t_exe_us;
  j["n_qubits"] = m.n_qubits;
  j["counts"] = {{"n_1q", m.counts.n_1q},
                 {"n_2q", m.counts.n_2q},
                 {"n_meas", m.counts.n_meas},
                 {"n_intra_shift", m.counts.n_intra_shift},
                 {"n_intra_swap", m.counts.n_intra_swap},
                 {"n_inter_shift", m.counts.n_inter_shift},
                 {"n_inter_swap", m.counts.n_inter_swap}};
  j["time_breakdown_us"] = {{"gate", m.breakdown.gate_us},
                            {"intra_transport", m.breakdown.intra_transport_us},
                            {"inter_transport", m.breakdown.inter_transport_us}};
  j["fidelity"] = {{"f_1q", m.fidelity.f_1q},
                   {"f_2q", m.fidelity.f_2q},
                   {"f_meas", m.fidelity.f_meas},
                   {"f_transport", m.fidelity.f_transport},
                   {"f_decoh", m.fidelity.f_decoh},
                   {"f_total", m.fidelity.f_total}};
  return j;
}

inline std::string metrics_csv_header() {
  return "arch,circuit,policy,seed,n_qubits,t_exe_us,gate_us,"
         "intra_transport_us,inter_transport_us,n_1q,n_2q,n_meas,"
         "n_intra_shift,n_intra_swap,n_inter_shift,n_inter_swap,"
         "f_transport,f_decoh,f_total";
}

inline std::string metrics_csv_row(const std::string& arch,
                                   const std::string& circuit,
                                   const std::string& policy,
                                   std::uint64_t seed, const Metrics& m) {
  char buf[160];
  std::string row = arch + "," + circuit + "," + policy + "," +
                    std::to_string(seed) + "," + std::to_string(m.n_qubits) +
                    "," + std::to_string(m.t_exe_us) + "," +
                    std::to_string(m.breakdown.gate_us) + "," +
                    std::to_string(m.breakdown.intra_transport_us) + "," +
                    std::to_string(m.breakdown.inter_transport_us) + "," +
                    std::to_string(m.counts.n_1q) + "," +
                    std::to_string(m.counts.n_2q) + "," +
                    std::to_string(m.counts.n_meas) + "," +
                    std::to_string(m.counts.n_intra_shift) + "," +
                    std::to_string(m.counts.n_intra_swap) + "," +
                    std::to_string(m.counts.n_inter_shift) + "," +
                    std::to_string(m.counts.n_inter_swap);
  std::snprintf(buf, sizeof buf, ",%.12g,%.12g,%.12g", m.fidelity.f_transport,
                m.fidelity.f_decoh, m.fidelity.f_total);
  row += buf;
  return row;
}

}  // namespace fluxtrap
