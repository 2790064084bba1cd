/* Copyright 2026 The ewsn Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *    http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/* C interface to the ewsn library: retrieval-time analytics and Monte
 * Carlo simulation for energy-harvesting wireless sensor networks.
 *
 * Conventions:
 *   - Every fallible call returns an ewsn_status; outputs go through
 *     pointers and are written only on EWSN_OK.
 *   - On failure, ewsn_last_error() returns a thread-local description.
 *   - Objects returned through handle pointers are owned by the caller
 *     and released with the matching *_free function.
 */

#ifndef EWSN_H
#define EWSN_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum ewsn_status {
  EWSN_OK = 0,
  EWSN_ERR_INVALID = 1,  /* bad arguments or domain violation */
  EWSN_ERR_CAPACITY = 2, /* Kronecker path above the dimension cap */
  EWSN_ERR_NUMERIC = 3,  /* non-finite values, singular solve, divergence */
  EWSN_ERR_IO = 4        /* filesystem failure */
} ewsn_status;

typedef enum ewsn_method {
  EWSN_METHOD_CLOSED_FORM = 0,
  EWSN_METHOD_QUADRATURE = 1,
  EWSN_METHOD_MATRIX = 2
} ewsn_method;

typedef enum ewsn_arrival_mode {
  EWSN_ARRIVAL_PASTA_INJECT = 0,
  EWSN_ARRIVAL_POISSON = 1
} ewsn_arrival_mode;

/* Opaque handles. */
typedef struct ewsn_model ewsn_model;
typedef struct ewsn_sim_result ewsn_sim_result;

const char* ewsn_status_name(ewsn_status status);

/* Thread-local message describing the most recent failure on this thread;
 * empty string if none. The pointer stays valid until the next failing
 * call on the same thread. */
const char* ewsn_last_error(void);

/* ---- Model ----------------------------------------------------------- */

/* A network of n_sensors sensors with batteries of battery_cap units,
 * per-sensor harvest rate harvest_rate and shared broadcast rate
 * broadcast_rate (one energetic sensor broadcasts at broadcast_rate /
 * n_sensors). */
ewsn_status ewsn_model_create(int32_t n_sensors, int32_t battery_cap,
                              double harvest_rate, double broadcast_rate,
                              ewsn_model** out);

/* Client Poisson arrival rate; used by the simulator's poisson mode only. */
ewsn_status ewsn_model_set_arrival_rate(ewsn_model* model, double arrival_rate);

void ewsn_model_free(ewsn_model* model);

int32_t ewsn_model_n_sensors(const ewsn_model* model);
int32_t ewsn_model_battery_cap(const ewsn_model* model);
double ewsn_model_harvest_rate(const ewsn_model* model);
double ewsn_model_broadcast_rate(const ewsn_model* model);

/* Measurements from distinct sensors needed for a reliable estimate:
 * ceil(noise_variance / reliability_threshold), at least 1. */
ewsn_status ewsn_required_samples(double noise_variance,
                                  double reliability_threshold, int32_t* out);

/* ---- Analytics ------------------------------------------------------- */

/* Stationary battery distribution; probs must hold battery_cap+1 values. */
ewsn_status ewsn_steady_state(const ewsn_model* model, double* probs,
                              size_t len);

/* Two-exponential survival mixture of the single-sensor broadcast wait.
 * Any output pointer may be NULL. weight_fast is unused when the rates
 * coincide (*equal_rate = 1). */
ewsn_status ewsn_survival_form(const ewsn_model* model, double* weight_fast,
                               double* rate_broadcast, double* rate_harvest,
                               double* empty_prob, int32_t* equal_rate);

/* P(single-sensor broadcast wait > t). */
ewsn_status ewsn_broadcast_wait_survival(const ewsn_model* model, double t,
                                         double* out);

/* Same CDF through the phase-type matrix exponential (cross-check path). */
ewsn_status ewsn_broadcast_wait_cdf_matrix(const ewsn_model* model, double t,
                                           double* out);

/* P(time to collect samples_needed distinct measurements <= t). */
ewsn_status ewsn_retrieval_cdf(const ewsn_model* model, int32_t samples_needed,
                               double t, double* out);

/* Same CDF through the Kronecker order-statistic machinery; exponential
 * in n_sensors, fails with EWSN_ERR_CAPACITY above the dimension cap. */
ewsn_status ewsn_retrieval_cdf_matrix(const ewsn_model* model,
                                      int32_t samples_needed, double t,
                                      double* out);

/* Expected retrieval time by the chosen method. */
ewsn_status ewsn_expected_time(const ewsn_model* model, int32_t samples_needed,
                               ewsn_method method, double* out);

/* k-th moment of the retrieval time through the Kronecker machinery. */
ewsn_status ewsn_retrieval_moment_matrix(const ewsn_model* model,
                                         int32_t samples_needed,
                                         int32_t moment_order, double* out);

/* Combinatorial normalization identity (exact rational evaluation);
 * equals 1.0 for every 0 <= k < n. */
ewsn_status ewsn_binomial_identity(int32_t n, int32_t k, double* out);

/* Asymptotic expected retrieval times. */
ewsn_status ewsn_limit_infinite_harvest(int32_t n, int32_t s, double mu,
                                        double* out);
ewsn_status ewsn_limit_infinite_battery(int32_t n, int32_t s, double lambda_e,
                                        double mu, double* out);
ewsn_status ewsn_limit_infinite_network(int32_t s, double mu, double* out);

/* ---- Simulation ------------------------------------------------------ */

typedef struct ewsn_sim_config {
  int32_t samples_needed;
  int64_t replications;
  double warmup_time; /* < 0 selects the default policy */
  uint64_t seed;
  int32_t arrival_mode; /* ewsn_arrival_mode */
  int32_t threads;      /* 0 selects the hardware thread count */
} ewsn_sim_config;

/* Default warmup: 100 * max(N/mu, 1/lambda_e). */
double ewsn_default_warmup(const ewsn_model* model);

/* Monte Carlo estimate of the retrieval time: one independent trajectory
 * per replication. Deterministic in (model, config) including the thread
 * count. */
ewsn_status ewsn_simulate(const ewsn_model* model,
                          const ewsn_sim_config* config,
                          ewsn_sim_result** out);

void ewsn_sim_result_free(ewsn_sim_result* result);

int64_t ewsn_sim_result_count(const ewsn_sim_result* result);
double ewsn_sim_result_mean(const ewsn_sim_result* result);
double ewsn_sim_result_ci_halfwidth(const ewsn_sim_result* result);
uint64_t ewsn_sim_result_seed(const ewsn_sim_result* result);

/* Copies up to capacity replicate times (replicate order) into out;
 * fails with EWSN_ERR_INVALID if capacity is too small. */
ewsn_status ewsn_sim_result_samples(const ewsn_sim_result* result, double* out,
                                    int64_t capacity);

/* Fraction of replicates <= t. */
ewsn_status ewsn_sim_result_empirical_cdf(const ewsn_sim_result* result,
                                          double t, double* out);

/* Writes "replicate_index,ws_time" rows; byte-stable for a fixed seed. */
ewsn_status ewsn_sim_result_write_csv(const ewsn_sim_result* result,
                                      const char* path);

/* JSON summary (mean, CI, seed, replication count, resolved config).
 * Free with ewsn_string_free. */
ewsn_status ewsn_sim_result_summary_json(const ewsn_sim_result* result,
                                         char** out);
void ewsn_string_free(char* str);

/* Kolmogorov-Smirnov distance between the empirical retrieval-time CDF and
 * the analytic one. The model must match the one simulated;
 * samples_needed may differ (negative controls). */
ewsn_status ewsn_sim_ks_distance(const ewsn_sim_result* result,
                                 const ewsn_model* model,
                                 int32_t samples_needed, double* out);

/* Time-averaged battery occupancy of a tagged sensor over
 * config->replications independent segments; probs must hold
 * battery_cap+1 values. tv_out (optional) receives the total-variation
 * distance to the analytic stationary law. */
ewsn_status ewsn_sim_battery_occupancy(const ewsn_model* model,
                                       const ewsn_sim_config* config,
                                       double* probs, size_t len,
                                       double* tv_out);

#ifdef __cplusplus
}
#endif

#endif /* EWSN_H */
