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

#ifndef EWSN_TOOLS_OPTIONS_HPP
#define EWSN_TOOLS_OPTIONS_HPP

#include <cstdint>
#include <cstdio>
#include <memory>
#include <string>

#include "CLI11.hpp"
#include "ewsn.h"

namespace cli {

// Exit codes: 0 success, 1 check failure, 2 usage, 3 capacity, 4 i/o.
inline int exit_code_for(ewsn_status status) {
  switch (status) {
    case EWSN_OK:
      return 0;
    case EWSN_ERR_INVALID:
      return 2;
    case EWSN_ERR_CAPACITY:
      return 3;
    case EWSN_ERR_IO:
      return 4;
    default:
      return 1;
  }
}

// Prints the library error and converts the status into an exit code.
inline int report_failure(ewsn_status status) {
  std::fprintf(stderr, "error (%s): %s\n", ewsn_status_name(status),
               ewsn_last_error());
  return exit_code_for(status);
}

struct ModelOptions {
  int32_t n_sensors = 10;
  int32_t battery_cap = 4;
  double harvest_rate = 0.2;
  double broadcast_rate = 0.4;
  double arrival_rate = 0.0;  // 0 = unset
  int32_t samples_needed = 2;
  double noise_variance = 0.0;       // with reliability_threshold, derives s
  double reliability_threshold = 0.0;
};

// Attaches the shared network flags to a subcommand. The flags themselves
// live on the subcommand so each one can appear in the config file under
// its section; environment overrides use the EWSN_ prefix.
inline void add_model_flags(CLI::App* cmd, ModelOptions* opts) {
  cmd->add_option("--n", opts->n_sensors, "Number of sensors")
      ->envname("EWSN_N");
  cmd->add_option("--b", opts->battery_cap, "Battery capacity (energy units)")
      ->envname("EWSN_B");
  cmd->add_option("--lambda-e", opts->harvest_rate,
                  "Per-sensor energy harvest rate (1/time)")
      ->envname("EWSN_LAMBDA_E");
  cmd->add_option("--mu", opts->broadcast_rate,
                  "Network broadcast rate, shared by all sensors (1/time)")
      ->envname("EWSN_MU");
  cmd->add_option("--lambda-a", opts->arrival_rate,
                  "Client Poisson arrival rate (simulator only)")
      ->envname("EWSN_LAMBDA_A");
  auto* s_opt =
      cmd->add_option("--s", opts->samples_needed,
                      "Measurements from distinct sensors per estimate")
          ->envname("EWSN_S");
  auto* sigma2 = cmd->add_option("--sigma2", opts->noise_variance,
                                 "Measurement noise variance (with "
                                 "--threshold, derives --s)")
                     ->envname("EWSN_SIGMA2");
  auto* threshold =
      cmd->add_option("--threshold", opts->reliability_threshold,
                      "Target variance of the estimate")
          ->envname("EWSN_THRESHOLD");
  sigma2->needs(threshold);
  threshold->needs(sigma2);
  s_opt->excludes(sigma2);
}

// Resolves --sigma2/--threshold into the sample count; returns the status.
inline ewsn_status resolve_samples(ModelOptions& opts) {
  if (opts.noise_variance > 0.0 || opts.reliability_threshold > 0.0) {
    return ewsn_required_samples(opts.noise_variance,
                                 opts.reliability_threshold,
                                 &opts.samples_needed);
  }
  return EWSN_OK;
}

struct ModelHandle {
  ewsn_model* ptr = nullptr;
  ~ModelHandle() { ewsn_model_free(ptr); }
};

inline ewsn_status make_model(const ModelOptions& opts, ModelHandle& out) {
  ewsn_status st =
      ewsn_model_create(opts.n_sensors, opts.battery_cap, opts.harvest_rate,
                        opts.broadcast_rate, &out.ptr);
  if (st != EWSN_OK) return st;
  if (opts.arrival_rate > 0.0) {
    st = ewsn_model_set_arrival_rate(out.ptr, opts.arrival_rate);
  }
  return st;
}

// Fully-resolved configuration echo; goes to stderr so stdout stays a
// clean report/CSV stream.
inline void echo_config(const std::string& command, const ModelOptions& opts,
                        const std::string& extras = "") {
  std::fprintf(stderr,
               "# ewsn %s | n=%d b=%d lambda_e=%g mu=%g lambda_a=%s s=%d%s%s\n",
               command.c_str(), opts.n_sensors, opts.battery_cap,
               opts.harvest_rate, opts.broadcast_rate,
               opts.arrival_rate > 0.0 ? std::to_string(opts.arrival_rate).c_str()
                                       : "none",
               opts.samples_needed, extras.empty() ? "" : " ",
               extras.c_str());
}

}  // namespace cli

#endif  // EWSN_TOOLS_OPTIONS_HPP
