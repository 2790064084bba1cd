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

#include "ewsn/retrieval.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "binomial.hpp"
#include "ewsn/errors.hpp"

namespace ewsn {

namespace {

constexpr double kQuadratureRelTol = 1e-10;

std::vector<double> tail_binomials(int n, int s) {
  std::vector<double> out(static_cast<std::size_t>(s));
  for (int j = 0; j < s; ++j) out[static_cast<std::size_t>(j)] = detail::binomial(n, j);
  return out;
}

// P(retrieval > t) given the scalar survival S(t): the client still waits
// iff fewer than s of the N sensors have broadcast.
double survival_tail(const std::vector<double>& binoms, int n, double s_t) {
  const double f_t = 1.0 - s_t;
  double acc = 0.0;
  for (int j = static_cast<int>(binoms.size()) - 1; j >= 0; --j) {
    acc += binoms[static_cast<std::size_t>(j)] * std::pow(f_t, j) *
           std::pow(s_t, n - j);
  }
  return std::clamp(acc, 0.0, 1.0);
}

double closed_form_exact(const RetrievalQuery& q, const SurvivalForm& form) {
  const int n = q.params.n_sensors;
  const int s = q.samples_needed;
  const long double w = form.weight_fast;
  const long double cw = 1.0L - w;

  detail::KahanAccumulator<long double> acc;
  for (int j = 0; j < s; ++j) {
    const long double c_nj = detail::binomial(n, j);
    for (int k = 0; k <= j; ++k) {
      const long double outer =
          c_nj * detail::binomial(j, k) * (((j - k) % 2 == 0) ? 1.0L : -1.0L);
      const int m = n - k;
      for (int v = 0; v <= m; ++v) {
        const long double rate =
            static_cast<long double>(form.rate_harvest) * (m - v) +
            static_cast<long double>(form.rate_broadcast) * v;
        acc.add(outer * detail::binomial(m, v) * std::pow(w, v) *
                std::pow(cw, m - v) / rate);
      }
    }
  }
  return static_cast<double>(acc.value());
}

double closed_form_log_space(const RetrievalQuery& q, const SurvivalForm& form) {
  const int n = q.params.n_sensors;
  const int s = q.samples_needed;
  const double w = form.weight_fast;
  const double cw = 1.0 - w;
  const double log_abs_w = w == 0.0 ? 0.0 : std::log(std::abs(w));
  const double log_abs_cw = cw == 0.0 ? 0.0 : std::log(std::abs(cw));

  std::vector<double> logs;
  std::vector<std::int8_t> signs;
  for (int j = 0; j < s; ++j) {
    for (int k = 0; k <= j; ++k) {
      const int m = n - k;
      for (int v = 0; v <= m; ++v) {
        if ((w == 0.0 && v > 0) || (cw == 0.0 && v < m)) continue;
        const double rate =
            form.rate_harvest * (m - v) + form.rate_broadcast * v;
        int sign = ((j - k) % 2 == 0) ? 1 : -1;
        if (w < 0.0 && v % 2 == 1) sign = -sign;
        if (cw < 0.0 && (m - v) % 2 == 1) sign = -sign;
        logs.push_back(detail::log_binomial(n, j) + detail::log_binomial(j, k) +
                       detail::log_binomial(m, v) + v * log_abs_w +
                       (m - v) * log_abs_cw - std::log(rate));
        signs.push_back(static_cast<std::int8_t>(sign));
      }
    }
  }
  const double peak = *std::max_element(logs.begin(), logs.end());
  detail::KahanSum acc;
  for (std::size_t i = 0; i < logs.size(); ++i) {
    acc.add(signs[i] * std::exp(logs[i] - peak));
  }
  return std::exp(peak) * acc.value();
}

}  // namespace

void RetrievalQuery::validate() const {
  params.validate();
  if (samples_needed < 1 || samples_needed > params.n_sensors) {
    throw ValidationError(
        "RetrievalQuery: samples_needed must satisfy 1 <= s <= n_sensors, got s=" +
        std::to_string(samples_needed) + ", n_sensors=" +
        std::to_string(params.n_sensors));
  }
}

double retrieval_survival(const RetrievalQuery& q, double t) {
  q.validate();
  const auto binoms = tail_binomials(q.params.n_sensors, q.samples_needed);
  return survival_tail(binoms, q.params.n_sensors,
                       broadcast_wait_survival(q.params, t));
}

double retrieval_cdf(const RetrievalQuery& q, double t) {
  return 1.0 - retrieval_survival(q, t);
}

double expected_time_closed_form(const RetrievalQuery& q) {
  q.validate();
  const SurvivalForm form = survival_form(q.params);
  if (form.equal_rate) {
    // The mixture weight is undefined at coinciding rates; the integral
    // route does not need it.
    return expected_time_quadrature(q);
  }
  if (q.params.n_sensors <= 60) return closed_form_exact(q, form);
  return closed_form_log_space(q, form);
}

double expected_time_quadrature(const RetrievalQuery& q) {
  q.validate();
  const int n = q.params.n_sensors;
  const int s = q.samples_needed;
  const SurvivalForm form = survival_form(q.params);
  const auto binoms = tail_binomials(n, s);

  const double t_max = 50.0 * std::max(n / q.params.broadcast_rate,
                                       1.0 / q.params.harvest_rate);
  const auto integrand = [&](double t) {
    return survival_tail(binoms, n, form.survival(t));
  };

  double error = 0.0;
  const double body = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
      integrand, 0.0, t_max, 15, kQuadratureRelTol * 0.1, &error);
  if (!(error <= kQuadratureRelTol * std::max(std::abs(body), 1e-300))) {
    throw NumericError("expected_time_quadrature: integrator achieved relative tolerance " +
                       std::to_string(error / std::max(std::abs(body), 1e-300)) +
                       ", required " + std::to_string(kQuadratureRelTol));
  }

  // Beyond t_max the tail is governed by the slowest exponential; by the
  // choice of t_max its contribution is ~exp(-50) of the total.
  const double r_slow = form.equal_rate
                            ? form.rate_broadcast
                            : std::min(form.rate_harvest, form.rate_broadcast);
  const int m = n - s + 1;
  const double tail = binoms.back() * std::pow(form.survival(t_max), m) /
                      (r_slow * static_cast<double>(m));
  return body + tail;
}

double expected_time_matrix(const RetrievalQuery& q, std::ptrdiff_t dim_cap) {
  q.validate();
  return order_stat_moment(broadcast_wait_phase_type(q.params),
                           q.params.n_sensors, q.samples_needed, 1, dim_cap);
}

double retrieval_cdf_matrix(const RetrievalQuery& q, double t,
                            std::ptrdiff_t dim_cap) {
  q.validate();
  return order_stat_cdf(broadcast_wait_phase_type(q.params),
                        q.params.n_sensors, q.samples_needed, t, dim_cap);
}

double binomial_identity(int n, int k) {
  if (n < 1 || k < 0 || k >= n) {
    throw ValidationError("binomial_identity: arguments must satisfy 0 <= k < n, got k=" +
                          std::to_string(k) + ", n=" + std::to_string(n));
  }
  using boost::multiprecision::cpp_int;
  using boost::multiprecision::cpp_rational;

  const auto binom = [](int a, int b) {
    cpp_int c = 1;
    if (b > a - b) b = a - b;
    for (int i = 1; i <= b; ++i) c = c * (a - b + i) / i;
    return c;
  };

  cpp_rational sum = 0;
  for (int v = 0; v <= k; ++v) {
    const cpp_rational term(cpp_int(binom(k, v) * (n - k)), cpp_int(n - v));
    if ((k - v) % 2 == 0) {
      sum += term;
    } else {
      sum -= term;
    }
  }
  const cpp_rational result = cpp_rational(binom(n, k)) * sum;
  return result.convert_to<double>();
}

double limit_infinite_harvest(int n, int s, double mu) {
  if (n < 1 || s < 1 || s > n) {
    throw ValidationError("limit_infinite_harvest: need 1 <= s <= n");
  }
  if (!(mu > 0.0)) {
    throw ValidationError("limit_infinite_harvest: mu must be > 0");
  }
  double acc = 0.0;
  for (int j = 0; j < s; ++j) {
    acc += 1.0 / (mu * (1.0 - static_cast<double>(j) / n));
  }
  return acc;
}

double limit_infinite_battery(int n, int s, double lambda_e, double mu) {
  if (n < 1 || s < 1 || s > n) {
    throw ValidationError("limit_infinite_battery: need 1 <= s <= n");
  }
  if (!(lambda_e > 0.0) || !(mu > 0.0)) {
    throw ValidationError("limit_infinite_battery: rates must be > 0");
  }
  const double per_sensor = mu / n;
  const double binding = lambda_e < per_sensor ? lambda_e : per_sensor;
  double acc = 0.0;
  for (int j = 0; j < s; ++j) {
    acc += 1.0 / (binding * (n - j));
  }
  return acc;
}

double limit_infinite_network(int s, double mu) {
  if (s < 1) {
    throw ValidationError("limit_infinite_network: s must be >= 1");
  }
  if (!(mu > 0.0)) {
    throw ValidationError("limit_infinite_network: mu must be > 0");
  }
  return s / mu;
}

}  // namespace ewsn
