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

#include "validate.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "ewsn.h"
#include "options.hpp"

namespace cli {

namespace {

struct CheckResult {
  bool pass = false;
  std::string detail;
};

using Check = std::function<CheckResult()>;

double rel_err(double value, double reference) {
  return std::abs(value - reference) / std::abs(reference);
}

CheckResult failure(const std::string& what) { return {false, what}; }

CheckResult from_status(ewsn_status st) {
  return failure(std::string(ewsn_status_name(st)) + ": " + ewsn_last_error());
}

struct Model {
  ModelHandle handle;
  ewsn_status status;
  Model(int n, int b, double lambda_e, double mu = 0.4) {
    ModelOptions o;
    o.n_sensors = n;
    o.battery_cap = b;
    o.harvest_rate = lambda_e;
    o.broadcast_rate = mu;
    status = make_model(o, handle);
  }
  ewsn_model* get() const { return handle.ptr; }
};

CheckResult check_steady_state_law() {
  Model m(1, 1, 0.2);
  if (m.status != EWSN_OK) return from_status(m.status);
  double probs[2];
  if (auto st = ewsn_steady_state(m.get(), probs, 2)) return from_status(st);
  double err = std::max(std::abs(probs[0] - 2.0 / 3.0),
                        std::abs(probs[1] - 1.0 / 3.0));

  Model uniform(4, 3, 0.1);  // harvest equals mu/N
  double u[4];
  if (auto st = ewsn_steady_state(uniform.get(), u, 4)) return from_status(st);
  for (double x : u) err = std::max(err, std::abs(x - 0.25));

  // Detailed balance on an asymmetric configuration.
  Model geo(5, 6, 0.13);
  double g[7];
  if (auto st = ewsn_steady_state(geo.get(), g, 7)) return from_status(st);
  for (int i = 0; i < 6; ++i) {
    err = std::max(err, std::abs(g[i] * 0.13 - g[i + 1] * (0.4 / 5)));
  }

  char buf[64];
  std::snprintf(buf, sizeof buf, "max deviation %.2e", err);
  return {err < 1e-12, buf};
}

CheckResult check_scalar_vs_matrix_wait() {
  const struct {
    int n, b;
    double lambda_e;
  } cases[] = {{1, 1, 0.2}, {4, 3, 0.1}, {10, 4, 0.2}, {10, 4, 0.04}};
  double worst = 0.0;
  for (const auto& c : cases) {
    Model m(c.n, c.b, c.lambda_e);
    if (m.status != EWSN_OK) return from_status(m.status);
    for (int i = 0; i <= 100; ++i) {
      const double t = 120.0 * i / 100.0;
      double survival = 0, cdf = 0;
      if (auto st = ewsn_broadcast_wait_survival(m.get(), t, &survival))
        return from_status(st);
      if (auto st = ewsn_broadcast_wait_cdf_matrix(m.get(), t, &cdf))
        return from_status(st);
      worst = std::max(worst, std::abs((1.0 - survival) - cdf));
    }
  }
  char buf[64];
  std::snprintf(buf, sizeof buf, "max |scalar - matrix| %.2e", worst);
  return {worst < 1e-10, buf};
}

CheckResult check_order_stat_cdf_paths() {
  Model m(4, 1, 0.2);
  if (m.status != EWSN_OK) return from_status(m.status);
  double worst = 0.0;
  for (int s = 1; s <= 4; ++s) {
    for (double t : {0.5, 1.0, 2.0, 5.0, 10.0, 20.0}) {
      double scalar = 0, matrix = 0;
      if (auto st = ewsn_retrieval_cdf(m.get(), s, t, &scalar))
        return from_status(st);
      if (auto st = ewsn_retrieval_cdf_matrix(m.get(), s, t, &matrix))
        return from_status(st);
      worst = std::max(worst, std::abs(scalar - matrix));
    }
  }
  char buf[64];
  std::snprintf(buf, sizeof buf, "max |scalar - matrix| %.2e", worst);
  return {worst < 1e-9, buf};
}

CheckResult check_moment_recursion() {
  double worst = 0.0;
  for (int n : {2, 4, 6}) {
    for (int s : {1, 2, n}) {
      for (int b : {1, 2, 3}) {
        for (double lambda_e : {0.03, 0.2}) {
          Model m(n, b, lambda_e);
          if (m.status != EWSN_OK) return from_status(m.status);
          double matrix = 0, closed = 0;
          if (auto st = ewsn_retrieval_moment_matrix(m.get(), s, 1, &matrix))
            return from_status(st);
          if (auto st = ewsn_expected_time(m.get(), s,
                                           EWSN_METHOD_CLOSED_FORM, &closed))
            return from_status(st);
          worst = std::max(worst, rel_err(matrix, closed));
        }
      }
    }
  }
  char buf[64];
  std::snprintf(buf, sizeof buf, "max relative gap %.2e", worst);
  return {worst < 1e-8, buf};
}

CheckResult check_sign_gate() {
  // The alternating-sum sign convention must reproduce the integral of the
  // survival tail across the parameter grid.
  double worst = 0.0;
  for (int n : {2, 5, 10, 20}) {
    for (int s : {1, 2, 5}) {
      if (s > n) continue;
      for (int b : {1, 4, 16}) {
        for (double lambda_e : {0.02, 0.03, 0.1, 0.2}) {
          Model m(n, b, lambda_e);
          if (m.status != EWSN_OK) return from_status(m.status);
          double closed = 0, quad = 0;
          if (auto st = ewsn_expected_time(m.get(), s,
                                           EWSN_METHOD_CLOSED_FORM, &closed))
            return from_status(st);
          if (auto st =
                  ewsn_expected_time(m.get(), s, EWSN_METHOD_QUADRATURE, &quad))
            return from_status(st);
          worst = std::max(worst, rel_err(closed, quad));
        }
      }
    }
  }
  char buf[64];
  std::snprintf(buf, sizeof buf, "max relative gap %.2e", worst);
  return {worst < 1e-7, buf};
}

CheckResult check_identity() {
  for (int n = 1; n <= 30; ++n) {
    for (int k = 0; k < n; ++k) {
      double value = 0;
      if (auto st = ewsn_binomial_identity(n, k, &value)) return from_status(st);
      if (value != 1.0) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "n=%d k=%d gave %.17g", n, k, value);
        return failure(buf);
      }
    }
  }
  return {true, "exact for all 0 <= k < n <= 30"};
}

CheckResult check_harvest_limit() {
  double limit = 0;
  if (auto st = ewsn_limit_infinite_harvest(10, 2, 0.4, &limit))
    return from_status(st);
  double prev = 1e300;
  for (double lambda_e : {1.0, 10.0, 100.0}) {
    Model m(10, 4, lambda_e);
    if (m.status != EWSN_OK) return from_status(m.status);
    double value = 0;
    if (auto st =
            ewsn_expected_time(m.get(), 2, EWSN_METHOD_CLOSED_FORM, &value))
      return from_status(st);
    const double err = rel_err(value, limit);
    if (err >= prev) return failure("error not monotone in the harvest rate");
    prev = err;
  }
  char buf[64];
  std::snprintf(buf, sizeof buf, "final relative error %.2e", prev);
  return {prev < 0.01, buf};
}

CheckResult check_battery_limit() {
  double worst_final = 0.0;
  for (double lambda_e : {0.03, 0.2}) {
    double limit = 0;
    if (auto st = ewsn_limit_infinite_battery(10, 2, lambda_e, 0.4, &limit))
      return from_status(st);
    double prev = 1e300;
    for (int b = 1; b <= 64; b *= 2) {
      Model m(10, b, lambda_e);
      if (m.status != EWSN_OK) return from_status(m.status);
      double value = 0;
      if (auto st =
              ewsn_expected_time(m.get(), 2, EWSN_METHOD_CLOSED_FORM, &value))
        return from_status(st);
      const double err = rel_err(value, limit);
      if (err > prev + 1e-12)
        return failure("error not monotone in the battery capacity");
      prev = err;
    }
    worst_final = std::max(worst_final, prev);
  }
  char buf[64];
  std::snprintf(buf, sizeof buf, "final relative error %.2e", worst_final);
  return {worst_final < 0.01, buf};
}

CheckResult check_network_limit() {
  double limit = 0;
  if (auto st = ewsn_limit_infinite_network(2, 0.4, &limit))
    return from_status(st);
  double prev = 1e300;
  for (int n : {20, 50, 100, 200}) {
    Model m(n, 4, 0.2);
    if (m.status != EWSN_OK) return from_status(m.status);
    double value = 0;
    if (auto st = ewsn_expected_time(m.get(), 2, EWSN_METHOD_QUADRATURE, &value))
      return from_status(st);
    if (value <= limit || value >= prev)
      return failure("values must approach s/mu from above");
    prev = value;
  }
  char buf[64];
  std::snprintf(buf, sizeof buf, "final relative error %.2e",
                rel_err(prev, limit));
  return {rel_err(prev, limit) < 0.02, buf};
}

CheckResult check_equal_rate_continuity() {
  double at = 0;
  Model equal(10, 4, 0.04);
  if (equal.status != EWSN_OK) return from_status(equal.status);
  if (auto st = ewsn_expected_time(equal.get(), 2, EWSN_METHOD_QUADRATURE, &at))
    return from_status(st);
  double worst = 0.0;
  for (double shift : {1.0 - 1e-6, 1.0 + 1e-6}) {
    Model near(10, 4, 0.04 * shift);
    if (near.status != EWSN_OK) return from_status(near.status);
    double value = 0;
    if (auto st =
            ewsn_expected_time(near.get(), 2, EWSN_METHOD_QUADRATURE, &value))
      return from_status(st);
    worst = std::max(worst, rel_err(value, at));
  }
  char buf[64];
  std::snprintf(buf, sizeof buf, "max relative jump %.2e", worst);
  return {worst < 1e-4, buf};
}

ewsn_sim_config sim_config(const ValidateOptions& opts, int s,
                           std::int64_t reps) {
  ewsn_sim_config cfg{};
  cfg.samples_needed = s;
  cfg.replications = reps;
  cfg.warmup_time = -1.0;
  cfg.seed = opts.seed;
  cfg.arrival_mode = EWSN_ARRIVAL_PASTA_INJECT;
  cfg.threads = opts.threads;
  return cfg;
}

CheckResult check_sim_mean(const ValidateOptions& opts) {
  Model m(10, 4, 0.2);
  if (m.status != EWSN_OK) return from_status(m.status);
  double closed = 0;
  if (auto st = ewsn_expected_time(m.get(), 2, EWSN_METHOD_CLOSED_FORM, &closed))
    return from_status(st);
  const ewsn_sim_config cfg = sim_config(opts, 2, opts.replications);
  ewsn_sim_result* sim = nullptr;
  if (auto st = ewsn_simulate(m.get(), &cfg, &sim)) return from_status(st);
  const double mean = ewsn_sim_result_mean(sim);
  const double ci = ewsn_sim_result_ci_halfwidth(sim);
  ewsn_sim_result_free(sim);
  char buf[96];
  std::snprintf(buf, sizeof buf, "|mean - E| = %.4g, 95%% CI halfwidth %.4g",
                std::abs(mean - closed), ci);
  return {std::abs(mean - closed) <= ci, buf};
}

CheckResult check_sim_ks(const ValidateOptions& opts) {
  const double critical = 1.63 / std::sqrt(static_cast<double>(opts.replications));
  const struct {
    int b;
    double lambda_e;
  } cases[] = {{4, 0.2}, {2, 0.03}};
  double worst = 0.0;
  for (const auto& c : cases) {
    Model m(10, c.b, c.lambda_e);
    if (m.status != EWSN_OK) return from_status(m.status);
    const ewsn_sim_config cfg = sim_config(opts, 2, opts.replications);
    ewsn_sim_result* sim = nullptr;
    if (auto st = ewsn_simulate(m.get(), &cfg, &sim)) return from_status(st);
    double ks = 0;
    const ewsn_status st = ewsn_sim_ks_distance(sim, m.get(), 2, &ks);
    ewsn_sim_result_free(sim);
    if (st != EWSN_OK) return from_status(st);
    worst = std::max(worst, ks);
  }
  char buf[96];
  std::snprintf(buf, sizeof buf, "max KS %.4g vs 1%% critical %.4g", worst,
                critical);
  return {worst < critical, buf};
}

CheckResult check_sim_battery(const ValidateOptions& opts) {
  Model m(1, 1, 0.2);
  if (m.status != EWSN_OK) return from_status(m.status);
  const ewsn_sim_config cfg = sim_config(opts, 1, 100);  // 100 segments
  double probs[2];
  double tv = 0;
  if (auto st = ewsn_sim_battery_occupancy(m.get(), &cfg, probs, 2, &tv))
    return from_status(st);
  char buf[96];
  std::snprintf(buf, sizeof buf, "TV %.4g, empty-level %.4g vs 2/3", tv,
                probs[0]);
  return {tv < 0.01, buf};
}

CheckResult check_sim_pasta(const ValidateOptions& opts) {
  Model m(4, 2, 0.2);
  if (m.status != EWSN_OK) return from_status(m.status);
  if (auto st = ewsn_model_set_arrival_rate(const_cast<ewsn_model*>(m.get()), 1.0))
    return from_status(st);
  const std::int64_t reps = std::min<std::int64_t>(opts.replications, 20000);

  ewsn_sim_config inject = sim_config(opts, 2, reps);
  ewsn_sim_result* a = nullptr;
  if (auto st = ewsn_simulate(m.get(), &inject, &a)) return from_status(st);

  ewsn_sim_config poisson = sim_config(opts, 2, reps);
  poisson.seed = opts.seed + 1;
  poisson.arrival_mode = EWSN_ARRIVAL_POISSON;
  ewsn_sim_result* b = nullptr;
  if (auto st = ewsn_simulate(m.get(), &poisson, &b)) {
    ewsn_sim_result_free(a);
    return from_status(st);
  }
  const double gap =
      std::abs(ewsn_sim_result_mean(a) - ewsn_sim_result_mean(b));
  const double band =
      ewsn_sim_result_ci_halfwidth(a) + ewsn_sim_result_ci_halfwidth(b);
  ewsn_sim_result_free(a);
  ewsn_sim_result_free(b);
  char buf[96];
  std::snprintf(buf, sizeof buf, "mean gap %.4g vs CI band %.4g", gap, band);
  return {gap <= band, buf};
}

}  // namespace

int run_validate(const ValidateOptions& opts) {
  std::vector<std::pair<std::string, Check>> checks = {
      {"steady-state-law", check_steady_state_law},
      {"broadcast-wait-scalar-vs-matrix", check_scalar_vs_matrix_wait},
      {"order-stat-cdf-matrix-vs-scalar", check_order_stat_cdf_paths},
      {"moment-recursion-vs-closed-form", check_moment_recursion},
      {"expected-time-sign-gate", check_sign_gate},
      {"binomial-identity-exact", check_identity},
      {"harvest-limit-convergence", check_harvest_limit},
      {"battery-limit-convergence", check_battery_limit},
      {"network-limit-convergence", check_network_limit},
      {"equal-rate-continuity", check_equal_rate_continuity},
  };
  if (!opts.quick) {
    checks.emplace_back("sim-mean-within-ci",
                        [&] { return check_sim_mean(opts); });
    checks.emplace_back("sim-ks-below-critical",
                        [&] { return check_sim_ks(opts); });
    checks.emplace_back("sim-battery-occupancy",
                        [&] { return check_sim_battery(opts); });
    checks.emplace_back("sim-pasta-consistency",
                        [&] { return check_sim_pasta(opts); });
  }

  int failures = 0;
  for (const auto& [name, check] : checks) {
    const CheckResult result = check();
    std::printf("[%s] %s: %s\n", result.pass ? "PASS" : "FAIL", name.c_str(),
                result.detail.c_str());
    std::fflush(stdout);
    if (!result.pass) ++failures;
  }
  std::printf("%d/%zu checks passed\n", static_cast<int>(checks.size()) - failures,
              checks.size());
  return failures == 0 ? 0 : 1;
}

}  // namespace cli
