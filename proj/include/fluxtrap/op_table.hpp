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
#include <string>

#include "fluxtrap/common.hpp"
#include "json.hpp"

namespace fluxtrap {

/// Latency/fidelity table for the native trapped-ion operation set.
///
/// Defaults are the hardware parameters the whole cost model is built on:
/// gates and measurement execute in gate zones, transports come in the four
/// intra/inter x shift/swap flavors. All latencies are integral microseconds.
struct OpTable {
  struct Entry {
    TimeUs latency_us;
    double fidelity;
  };

  Entry gate1q{5, 0.999975};
  Entry gate2q{25, 0.9982};
  Entry measure{120, 0.9984};
  Entry intra_shift{58, 0.99978};
  Entry intra_swap{200, 0.99978};
  Entry inter_shift{250, 0.99956};
  Entry inter_swap{500, 0.99912};

  void validate() const {
    for (const Entry* e :
         {&gate1q, &gate2q, &measure, &intra_shift, &intra_swap, &inter_shift,
          &inter_swap}) {
      if (e->latency_us <= 0) throw InputError("op_table: latency must be > 0");
      if (e->fidelity <= 0.0 || e->fidelity > 1.0)
        throw InputError("op_table: fidelity must be in (0, 1]");
    }
  }
};

namespace detail {
inline std::array<std::pair<const char*, OpTable::Entry OpTable::*>, 7>
op_table_fields() {
  return {{{"gate1q", &OpTable::gate1q},
           {"gate2q", &OpTable::gate2q},
           {"measure", &OpTable::measure},
           {"intra_shift", &OpTable::intra_shift},
           {"intra_swap", &OpTable::intra_swap},
           {"inter_shift", &OpTable::inter_shift},
           {"inter_swap", &OpTable::inter_swap}}};
}
}  // namespace detail

inline nlohmann::ordered_json to_json(const OpTable& t) {
  nlohmann::ordered_json j;
  for (auto [name, field] : detail::op_table_fields()) {
    j[name] = {{"latency_us", (t.*field).latency_us},
               {"fidelity", (t.*field).fidelity}};
  }
  return j;
}

/// Applies partial overrides onto `t`; unknown keys are rejected.
inline void apply_op_table_overrides(OpTable& t, const nlohmann::json& j) {
  for (const auto& [key, val] : j.items()) {
    bool known = false;
    for (auto [name, field] : detail::op_table_fields()) {
      if (key == name) {
        if (val.contains("latency_us"))
          (t.*field).latency_us = val.at("latency_us").get<TimeUs>();
        if (val.contains("fidelity"))
          (t.*field).fidelity = val.at("fidelity").get<double>();
        known = true;
        break;
      }
    }
    if (!known) throw InputError("op_table: unknown operation '" + key + "'");
  }
  t.validate();
}

}  // namespace fluxtrap
