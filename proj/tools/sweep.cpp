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

#include "sweep.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <future>
#include <optional>
#include <sstream>

namespace cli {

namespace {

enum class SweptParam { kSensors, kBattery, kHarvest, kBroadcast, kSamples };

std::optional<SweptParam> parse_param(const std::string& name) {
  if (name == "n" || name == "n_sensors") return SweptParam::kSensors;
  if (name == "b" || name == "battery_cap") return SweptParam::kBattery;
  if (name == "lambda-e" || name == "harvest_rate") return SweptParam::kHarvest;
  if (name == "mu" || name == "broadcast_rate") return SweptParam::kBroadcast;
  if (name == "s" || name == "samples_needed") return SweptParam::kSamples;
  return std::nullopt;
}

bool integral_param(SweptParam p) {
  return p != SweptParam::kHarvest && p != SweptParam::kBroadcast;
}

struct Row {
  double param_value = 0.0;
  std::optional<double> closed, quadrature, matrix;
  std::optional<double> sim_mean, sim_ci_low, sim_ci_high;
  std::optional<std::int64_t> n_reps;
  std::optional<std::uint64_t> seed;
};

struct RowOutcome {
  Row row;
  ewsn_status status = EWSN_OK;
  std::string error;
};

ModelOptions apply_value(const ModelOptions& base, SweptParam param,
                         double value) {
  ModelOptions out = base;
  switch (param) {
    case SweptParam::kSensors:
      out.n_sensors = static_cast<int32_t>(value);
      break;
    case SweptParam::kBattery:
      out.battery_cap = static_cast<int32_t>(value);
      break;
    case SweptParam::kHarvest:
      out.harvest_rate = value;
      break;
    case SweptParam::kBroadcast:
      out.broadcast_rate = value;
      break;
    case SweptParam::kSamples:
      out.samples_needed = static_cast<int32_t>(value);
      break;
  }
  return out;
}

RowOutcome evaluate_point(const SweepOptions& opts, SweptParam param,
                          double value, std::size_t index) {
  RowOutcome out;
  out.row.param_value = value;
  const ModelOptions point = apply_value(opts.base, param, value);

  ModelHandle model;
  out.status = make_model(point, model);
  if (out.status != EWSN_OK) {
    out.error = ewsn_last_error();
    return out;
  }

  const auto run_method = [&](ewsn_method method, std::optional<double>& slot) {
    double v = 0.0;
    out.status = ewsn_expected_time(model.ptr, point.samples_needed, method, &v);
    if (out.status == EWSN_OK) {
      slot = v;
    } else {
      out.error = ewsn_last_error();
    }
    return out.status == EWSN_OK;
  };

  for (const std::string& method : opts.methods) {
    if (method == "closed") {
      if (!run_method(EWSN_METHOD_CLOSED_FORM, out.row.closed)) return out;
    } else if (method == "quadrature") {
      if (!run_method(EWSN_METHOD_QUADRATURE, out.row.quadrature)) return out;
    } else if (method == "matrix") {
      if (!run_method(EWSN_METHOD_MATRIX, out.row.matrix)) return out;
    } else if (method == "simulate") {
      ewsn_sim_config cfg{};
      cfg.samples_needed = point.samples_needed;
      cfg.replications = opts.replications;
      cfg.warmup_time = opts.warmup;
      cfg.seed = opts.seed + index;  // decorrelate points, still reproducible
      cfg.arrival_mode = EWSN_ARRIVAL_PASTA_INJECT;
      cfg.threads = opts.threads;
      ewsn_sim_result* sim = nullptr;
      out.status = ewsn_simulate(model.ptr, &cfg, &sim);
      if (out.status != EWSN_OK) {
        out.error = ewsn_last_error();
        return out;
      }
      const double mean = ewsn_sim_result_mean(sim);
      const double ci = ewsn_sim_result_ci_halfwidth(sim);
      out.row.sim_mean = mean;
      out.row.sim_ci_low = mean - ci;
      out.row.sim_ci_high = mean + ci;
      out.row.n_reps = opts.replications;
      out.row.seed = cfg.seed;
      ewsn_sim_result_free(sim);
    }
  }
  return out;
}

void write_field(FILE* f, const std::optional<double>& v, bool comma = true) {
  if (v) std::fprintf(f, "%.12g", *v);
  if (comma) std::fputc(',', f);
}

int write_csv(const std::string& path, const std::vector<Row>& rows) {
  FILE* f = std::fopen(path.c_str(), "wb");
  if (!f) {
    std::fprintf(stderr, "error (i/o failure): cannot open '%s' for writing\n",
                 path.c_str());
    return 4;
  }
  std::fprintf(f,
               "param_value,ew_closed_form,ew_quadrature,ew_matrix,"
               "ew_sim_mean,ew_sim_ci_low,ew_sim_ci_high,n_reps,seed\n");
  for (const Row& r : rows) {
    std::fprintf(f, "%.12g,", r.param_value);
    write_field(f, r.closed);
    write_field(f, r.quadrature);
    write_field(f, r.matrix);
    write_field(f, r.sim_mean);
    write_field(f, r.sim_ci_low);
    write_field(f, r.sim_ci_high);
    if (r.n_reps) std::fprintf(f, "%lld", static_cast<long long>(*r.n_reps));
    std::fputc(',', f);
    if (r.seed)
      std::fprintf(f, "%llu", static_cast<unsigned long long>(*r.seed));
    std::fputc('\n', f);
  }
  const bool ok = std::fflush(f) == 0 && std::ferror(f) == 0;
  std::fclose(f);
  if (!ok) {
    std::fprintf(stderr, "error (i/o failure): write to '%s' failed\n",
                 path.c_str());
    return 4;
  }
  return 0;
}

// Derives the per-series file name for multi-series presets:
// out.csv + 0.02 -> out_le0.02.csv
std::string series_path(const std::string& base, double lambda_e) {
  char tag[32];
  std::snprintf(tag, sizeof tag, "_le%g", lambda_e);
  const auto dot = base.find_last_of('.');
  const auto slash = base.find_last_of('/');
  if (dot == std::string::npos || (slash != std::string::npos && dot < slash)) {
    return base + tag;
  }
  return base.substr(0, dot) + tag + base.substr(dot);
}

int run_single_sweep(const SweepOptions& opts, SweptParam param,
                     const std::string& out_path) {
  const bool has_sim = std::find(opts.methods.begin(), opts.methods.end(),
                                 "simulate") != opts.methods.end();

  std::vector<RowOutcome> outcomes(opts.values.size());
  if (has_sim) {
    // Simulation points parallelize internally; keep the point loop serial.
    for (std::size_t i = 0; i < opts.values.size(); ++i) {
      outcomes[i] = evaluate_point(opts, param, opts.values[i], i);
    }
  } else {
    std::vector<std::future<RowOutcome>> futures;
    futures.reserve(opts.values.size());
    for (std::size_t i = 0; i < opts.values.size(); ++i) {
      futures.push_back(std::async(std::launch::async, evaluate_point,
                                   std::cref(opts), param, opts.values[i], i));
    }
    for (std::size_t i = 0; i < futures.size(); ++i) {
      outcomes[i] = futures[i].get();
    }
  }

  std::vector<Row> rows;
  rows.reserve(outcomes.size());
  for (const RowOutcome& o : outcomes) {
    if (o.status != EWSN_OK) {
      std::fprintf(stderr, "error (%s): %s\n", ewsn_status_name(o.status),
                   o.error.c_str());
      return exit_code_for(o.status);
    }
    rows.push_back(o.row);
  }
  return write_csv(out_path, rows);
}

}  // namespace

int run_sweep(const SweepOptions& given) {
  SweepOptions opts = given;
  std::vector<double> fig4_series;

  if (!opts.preset.empty()) {
    opts.base.broadcast_rate = 0.4;
    opts.base.samples_needed = 2;
    if (opts.preset == "fig2" || opts.preset == "fig3") {
      opts.param = "n_sensors";
      opts.base.harvest_rate = opts.preset == "fig2" ? 0.2 : 0.03;
      if (opts.values.empty()) {
        for (int n = 2; n <= 50; ++n) opts.values.push_back(n);
      }
    } else if (opts.preset == "fig4") {
      opts.param = "battery_cap";
      opts.base.n_sensors = 10;
      fig4_series = {0.02, 0.03, 0.1, 0.2};
      if (opts.values.empty()) {
        for (int b = 1; b <= 20; ++b) opts.values.push_back(b);
      }
    } else {
      std::fprintf(stderr, "error: unknown preset '%s' (fig2|fig3|fig4)\n",
                   opts.preset.c_str());
      return 2;
    }
  }

  const auto param = parse_param(opts.param);
  if (!param) {
    std::fprintf(stderr,
                 "error: --param must be one of n_sensors, battery_cap, "
                 "harvest_rate, broadcast_rate, samples_needed (got '%s')\n",
                 opts.param.c_str());
    return 2;
  }
  if (opts.values.empty()) {
    std::fprintf(stderr, "error: sweep needs a non-empty --values list\n");
    return 2;
  }
  for (std::size_t i = 0; i < opts.values.size(); ++i) {
    if (i > 0 && !(opts.values[i] > opts.values[i - 1])) {
      std::fprintf(stderr, "error: sweep values must be strictly increasing\n");
      return 2;
    }
    if (integral_param(*param) &&
        opts.values[i] != std::floor(opts.values[i])) {
      std::fprintf(stderr, "error: '%s' takes integer values\n",
                   opts.param.c_str());
      return 2;
    }
  }

  // The Kronecker path materializes 2^N states; refuse sweeps that would
  // blow past the cap instead of failing midway through.
  if (std::find(opts.methods.begin(), opts.methods.end(), "matrix") !=
      opts.methods.end()) {
    int max_n = opts.base.n_sensors;
    if (*param == SweptParam::kSensors) {
      max_n = static_cast<int>(opts.values.back());
    }
    if (std::pow(2.0, max_n) > 4096.0) {
      std::fprintf(stderr,
                   "error (capacity exceeded): matrix method needs 2^N <= 4096 "
                   "(max swept N is %d)\n",
                   max_n);
      return 3;
    }
  }

  if (fig4_series.empty()) {
    return run_single_sweep(opts, *param, opts.out_path);
  }
  for (double lambda_e : fig4_series) {
    SweepOptions series = opts;
    series.base.harvest_rate = lambda_e;
    const std::string path = series_path(opts.out_path, lambda_e);
    std::fprintf(stderr, "# series lambda_e=%g -> %s\n", lambda_e, path.c_str());
    if (const int rc = run_single_sweep(series, *param, path); rc != 0) {
      return rc;
    }
  }
  return 0;
}

}  // namespace cli
