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

#include "ewsn.h"

#include <cstring>
#include <new>
#include <string>

#include "ewsn/errors.hpp"
#include "ewsn/model.hpp"
#include "ewsn/retrieval.hpp"
#include "ewsn/sim.hpp"

struct ewsn_model {
  ewsn::ModelParams params;
};

struct ewsn_sim_result {
  ewsn::SimResult result;
};

namespace {

thread_local std::string g_last_error;

ewsn_status fail(ewsn_status code, const char* what) {
  g_last_error = what;
  return code;
}

// Runs fn, translating exceptions into status codes + last-error text.
template <typename Fn>
ewsn_status guarded(Fn&& fn) {
  try {
    fn();
    return EWSN_OK;
  } catch (const ewsn::ValidationError& e) {
    return fail(EWSN_ERR_INVALID, e.what());
  } catch (const ewsn::CapacityError& e) {
    return fail(EWSN_ERR_CAPACITY, e.what());
  } catch (const ewsn::NumericError& e) {
    return fail(EWSN_ERR_NUMERIC, e.what());
  } catch (const ewsn::IoError& e) {
    return fail(EWSN_ERR_IO, e.what());
  } catch (const std::bad_alloc&) {
    return fail(EWSN_ERR_NUMERIC, "out of memory");
  } catch (const std::exception& e) {
    return fail(EWSN_ERR_NUMERIC, e.what());
  }
}

ewsn_status require(bool ok, const char* what) {
  return ok ? EWSN_OK : fail(EWSN_ERR_INVALID, what);
}

ewsn::SimConfig to_sim_config(const ewsn_model* model,
                              const ewsn_sim_config* config) {
  ewsn::SimConfig c;
  c.params = model->params;
  c.samples_needed = config->samples_needed;
  c.replications = config->replications;
  c.warmup_time = config->warmup_time;
  c.seed = config->seed;
  c.arrival_mode = config->arrival_mode == EWSN_ARRIVAL_POISSON
                       ? ewsn::ArrivalMode::kPoissonArrivals
                       : ewsn::ArrivalMode::kPastaInject;
  c.threads = config->threads;
  return c;
}

}  // namespace

extern "C" {

const char* ewsn_status_name(ewsn_status status) {
  switch (status) {
    case EWSN_OK:
      return "ok";
    case EWSN_ERR_INVALID:
      return "invalid argument";
    case EWSN_ERR_CAPACITY:
      return "capacity exceeded";
    case EWSN_ERR_NUMERIC:
      return "numeric failure";
    case EWSN_ERR_IO:
      return "i/o failure";
  }
  return "unknown status";
}

const char* ewsn_last_error(void) { return g_last_error.c_str(); }

ewsn_status ewsn_model_create(int32_t n_sensors, int32_t battery_cap,
                              double harvest_rate, double broadcast_rate,
                              ewsn_model** out) {
  if (auto st = require(out != nullptr, "ewsn_model_create: out is NULL"))
    return st;
  return guarded([&] {
    ewsn::ModelParams p;
    p.n_sensors = n_sensors;
    p.battery_cap = battery_cap;
    p.harvest_rate = harvest_rate;
    p.broadcast_rate = broadcast_rate;
    p.validate();
    *out = new ewsn_model{p};
  });
}

ewsn_status ewsn_model_set_arrival_rate(ewsn_model* model,
                                        double arrival_rate) {
  if (auto st = require(model != nullptr,
                        "ewsn_model_set_arrival_rate: model is NULL"))
    return st;
  return guarded([&] {
    ewsn::ModelParams p = model->params;
    p.arrival_rate = arrival_rate;
    p.validate();
    model->params = p;
  });
}

void ewsn_model_free(ewsn_model* model) { delete model; }

int32_t ewsn_model_n_sensors(const ewsn_model* model) {
  return model ? model->params.n_sensors : 0;
}

int32_t ewsn_model_battery_cap(const ewsn_model* model) {
  return model ? model->params.battery_cap : 0;
}

double ewsn_model_harvest_rate(const ewsn_model* model) {
  return model ? model->params.harvest_rate : 0.0;
}

double ewsn_model_broadcast_rate(const ewsn_model* model) {
  return model ? model->params.broadcast_rate : 0.0;
}

ewsn_status ewsn_required_samples(double noise_variance,
                                  double reliability_threshold, int32_t* out) {
  if (auto st = require(out != nullptr, "ewsn_required_samples: out is NULL"))
    return st;
  return guarded([&] {
    *out = ewsn::required_samples({noise_variance, reliability_threshold});
  });
}

ewsn_status ewsn_steady_state(const ewsn_model* model, double* probs,
                              size_t len) {
  if (auto st = require(model != nullptr && probs != nullptr,
                        "ewsn_steady_state: NULL argument"))
    return st;
  return guarded([&] {
    const auto ss = ewsn::steady_state(model->params);
    if (len != ss.probs.size()) {
      throw ewsn::ValidationError(
          "ewsn_steady_state: probs must hold battery_cap+1 values");
    }
    std::memcpy(probs, ss.probs.data(), len * sizeof(double));
  });
}

ewsn_status ewsn_survival_form(const ewsn_model* model, double* weight_fast,
                               double* rate_broadcast, double* rate_harvest,
                               double* empty_prob, int32_t* equal_rate) {
  if (auto st = require(model != nullptr, "ewsn_survival_form: model is NULL"))
    return st;
  return guarded([&] {
    const auto form = ewsn::survival_form(model->params);
    if (weight_fast) *weight_fast = form.weight_fast;
    if (rate_broadcast) *rate_broadcast = form.rate_broadcast;
    if (rate_harvest) *rate_harvest = form.rate_harvest;
    if (empty_prob) *empty_prob = form.empty_prob;
    if (equal_rate) *equal_rate = form.equal_rate ? 1 : 0;
  });
}

ewsn_status ewsn_broadcast_wait_survival(const ewsn_model* model, double t,
                                         double* out) {
  if (auto st = require(model != nullptr && out != nullptr,
                        "ewsn_broadcast_wait_survival: NULL argument"))
    return st;
  return guarded([&] { *out = ewsn::broadcast_wait_survival(model->params, t); });
}

ewsn_status ewsn_broadcast_wait_cdf_matrix(const ewsn_model* model, double t,
                                           double* out) {
  if (auto st = require(model != nullptr && out != nullptr,
                        "ewsn_broadcast_wait_cdf_matrix: NULL argument"))
    return st;
  return guarded([&] {
    *out = ewsn::phase_type_cdf(ewsn::broadcast_wait_phase_type(model->params), t);
  });
}

ewsn_status ewsn_retrieval_cdf(const ewsn_model* model, int32_t samples_needed,
                               double t, double* out) {
  if (auto st = require(model != nullptr && out != nullptr,
                        "ewsn_retrieval_cdf: NULL argument"))
    return st;
  return guarded([&] {
    *out = ewsn::retrieval_cdf({model->params, samples_needed}, t);
  });
}

ewsn_status ewsn_retrieval_cdf_matrix(const ewsn_model* model,
                                      int32_t samples_needed, double t,
                                      double* out) {
  if (auto st = require(model != nullptr && out != nullptr,
                        "ewsn_retrieval_cdf_matrix: NULL argument"))
    return st;
  return guarded([&] {
    *out = ewsn::retrieval_cdf_matrix({model->params, samples_needed}, t);
  });
}

ewsn_status ewsn_expected_time(const ewsn_model* model, int32_t samples_needed,
                               ewsn_method method, double* out) {
  if (auto st = require(model != nullptr && out != nullptr,
                        "ewsn_expected_time: NULL argument"))
    return st;
  return guarded([&] {
    const ewsn::RetrievalQuery q{model->params, samples_needed};
    switch (method) {
      case EWSN_METHOD_CLOSED_FORM:
        *out = ewsn::expected_time_closed_form(q);
        return;
      case EWSN_METHOD_QUADRATURE:
        *out = ewsn::expected_time_quadrature(q);
        return;
      case EWSN_METHOD_MATRIX:
        *out = ewsn::expected_time_matrix(q);
        return;
    }
    throw ewsn::ValidationError("ewsn_expected_time: unknown method");
  });
}

ewsn_status ewsn_retrieval_moment_matrix(const ewsn_model* model,
                                         int32_t samples_needed,
                                         int32_t moment_order, double* out) {
  if (auto st = require(model != nullptr && out != nullptr,
                        "ewsn_retrieval_moment_matrix: NULL argument"))
    return st;
  return guarded([&] {
    ewsn::RetrievalQuery q{model->params, samples_needed};
    q.validate();
    *out = ewsn::order_stat_moment(
        ewsn::broadcast_wait_phase_type(model->params),
        model->params.n_sensors, samples_needed, moment_order);
  });
}

ewsn_status ewsn_binomial_identity(int32_t n, int32_t k, double* out) {
  if (auto st = require(out != nullptr, "ewsn_binomial_identity: out is NULL"))
    return st;
  return guarded([&] { *out = ewsn::binomial_identity(n, k); });
}

ewsn_status ewsn_limit_infinite_harvest(int32_t n, int32_t s, double mu,
                                        double* out) {
  if (auto st =
          require(out != nullptr, "ewsn_limit_infinite_harvest: out is NULL"))
    return st;
  return guarded([&] { *out = ewsn::limit_infinite_harvest(n, s, mu); });
}

ewsn_status ewsn_limit_infinite_battery(int32_t n, int32_t s, double lambda_e,
                                        double mu, double* out) {
  if (auto st =
          require(out != nullptr, "ewsn_limit_infinite_battery: out is NULL"))
    return st;
  return guarded([&] { *out = ewsn::limit_infinite_battery(n, s, lambda_e, mu); });
}

ewsn_status ewsn_limit_infinite_network(int32_t s, double mu, double* out) {
  if (auto st =
          require(out != nullptr, "ewsn_limit_infinite_network: out is NULL"))
    return st;
  return guarded([&] { *out = ewsn::limit_infinite_network(s, mu); });
}

double ewsn_default_warmup(const ewsn_model* model) {
  return model ? ewsn::default_warmup(model->params) : 0.0;
}

ewsn_status ewsn_simulate(const ewsn_model* model,
                          const ewsn_sim_config* config,
                          ewsn_sim_result** out) {
  if (auto st = require(model != nullptr && config != nullptr && out != nullptr,
                        "ewsn_simulate: NULL argument"))
    return st;
  return guarded([&] {
    *out = new ewsn_sim_result{ewsn::simulate(to_sim_config(model, config))};
  });
}

void ewsn_sim_result_free(ewsn_sim_result* result) { delete result; }

int64_t ewsn_sim_result_count(const ewsn_sim_result* result) {
  return result ? result->result.replications : 0;
}

double ewsn_sim_result_mean(const ewsn_sim_result* result) {
  return result ? result->result.mean : 0.0;
}

double ewsn_sim_result_ci_halfwidth(const ewsn_sim_result* result) {
  return result ? result->result.ci_halfwidth_95 : 0.0;
}

uint64_t ewsn_sim_result_seed(const ewsn_sim_result* result) {
  return result ? result->result.seed_used : 0;
}

ewsn_status ewsn_sim_result_samples(const ewsn_sim_result* result, double* out,
                                    int64_t capacity) {
  if (auto st = require(result != nullptr && out != nullptr,
                        "ewsn_sim_result_samples: NULL argument"))
    return st;
  return guarded([&] {
    const auto& samples = result->result.ws_samples;
    if (capacity < static_cast<int64_t>(samples.size())) {
      throw ewsn::ValidationError(
          "ewsn_sim_result_samples: capacity below replicate count");
    }
    std::memcpy(out, samples.data(), samples.size() * sizeof(double));
  });
}

ewsn_status ewsn_sim_result_empirical_cdf(const ewsn_sim_result* result,
                                          double t, double* out) {
  if (auto st = require(result != nullptr && out != nullptr,
                        "ewsn_sim_result_empirical_cdf: NULL argument"))
    return st;
  return guarded([&] { *out = result->result.empirical_cdf(t); });
}

ewsn_status ewsn_sim_result_write_csv(const ewsn_sim_result* result,
                                      const char* path) {
  if (auto st = require(result != nullptr && path != nullptr,
                        "ewsn_sim_result_write_csv: NULL argument"))
    return st;
  return guarded([&] { ewsn::write_replicates_csv(result->result, path); });
}

ewsn_status ewsn_sim_result_summary_json(const ewsn_sim_result* result,
                                         char** out) {
  if (auto st = require(result != nullptr && out != nullptr,
                        "ewsn_sim_result_summary_json: NULL argument"))
    return st;
  return guarded([&] {
    const std::string text = ewsn::summary_json(result->result);
    char* buf = new char[text.size() + 1];
    std::memcpy(buf, text.c_str(), text.size() + 1);
    *out = buf;
  });
}

void ewsn_string_free(char* str) { delete[] str; }

ewsn_status ewsn_sim_ks_distance(const ewsn_sim_result* result,
                                 const ewsn_model* model,
                                 int32_t samples_needed, double* out) {
  if (auto st = require(result != nullptr && model != nullptr && out != nullptr,
                        "ewsn_sim_ks_distance: NULL argument"))
    return st;
  return guarded([&] {
    *out = ewsn::ks_distance(result->result, {model->params, samples_needed});
  });
}

ewsn_status ewsn_sim_battery_occupancy(const ewsn_model* model,
                                       const ewsn_sim_config* config,
                                       double* probs, size_t len,
                                       double* tv_out) {
  if (auto st = require(model != nullptr && config != nullptr && probs != nullptr,
                        "ewsn_sim_battery_occupancy: NULL argument"))
    return st;
  return guarded([&] {
    if (len != static_cast<size_t>(model->params.battery_cap) + 1) {
      throw ewsn::ValidationError(
          "ewsn_sim_battery_occupancy: probs must hold battery_cap+1 values");
    }
    const auto est =
        ewsn::empirical_battery_distribution(to_sim_config(model, config));
    std::memcpy(probs, est.empirical.probs.data(), len * sizeof(double));
    if (tv_out) *tv_out = est.tv_distance;
  });
}

}  // extern "C"
