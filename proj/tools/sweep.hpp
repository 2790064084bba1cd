// Copyright 2026 The ewsn Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef EWSN_TOOLS_SWEEP_HPP
#define EWSN_TOOLS_SWEEP_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "options.hpp"

namespace cli {

struct SweepOptions {
  ModelOptions base;
  std::string preset;  // fig2 | fig3 | fig4, or empty for --param/--values
  std::string param;   // n_sensors | battery_cap | harvest_rate |
                       // broadcast_rate | samples_needed (or flag aliases)
  std::vector<double> values;
  std::vector<std::string> methods{"closed"};
  std::string out_path;
  std::int64_t replications = 10000;
  std::uint64_t seed = 12345;
  double warmup = -1.0;
  int threads = 0;
};

int run_sweep(const SweepOptions& opts);

}  // namespace cli

#endif  // EWSN_TOOLS_SWEEP_HPP
