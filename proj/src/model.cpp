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

#include "ewsn/model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ewsn/errors.hpp"

namespace ewsn {

namespace {

// Relative rate gap below which the degenerate equal-rate forms are used;
// the generic mixture divides by the gap and loses all precision there.
constexpr double kEqualRateTol = 1e-9;

bool rates_equal(double harvest, double per_sensor) {
  return std::abs(harvest - per_sensor) <=
         kEqualRateTol * std::max(harvest, per_sensor);
}

}  // namespace

void ModelParams::validate() const {
  if (n_sensors < 1) {
    throw ValidationError("ModelParams: n_sensors must be >= 1, got " +
                          std::to_string(n_sensors));
  }
  if (battery_cap < 1) {
    throw ValidationError("ModelParams: battery_cap must be >= 1, got " +
                          std::to_string(battery_cap));
  }
  if (!(harvest_rate > 0.0) || !std::isfinite(harvest_rate)) {
    throw ValidationError("ModelParams: harvest_rate must be > 0");
  }
  if (!(broadcast_rate > 0.0) || !std::isfinite(broadcast_rate)) {
    throw ValidationError("ModelParams: broadcast_rate must be > 0");
  }
  if (arrival_rate && (!(*arrival_rate > 0.0) || !std::isfinite(*arrival_rate))) {
    throw ValidationError("ModelParams: arrival_rate must be > 0 when set");
  }
}

void EstimationSpec::validate() const {
  if (!(noise_variance > 0.0) || !std::isfinite(noise_variance)) {
    throw ValidationError("EstimationSpec: noise_variance must be > 0");
  }
  if (!(reliability_threshold > 0.0) || !std::isfinite(reliability_threshold)) {
    throw ValidationError("EstimationSpec: reliability_threshold must be > 0");
  }
}

SteadyState steady_state(const ModelParams& p) {
  p.validate();
  const int levels = p.battery_cap + 1;
  SteadyState out;
  out.probs.assign(levels, 0.0);

  const double ratio = p.harvest_rate / p.per_sensor_rate();
  if (rates_equal(p.harvest_rate, p.per_sensor_rate())) {
    const double uniform = 1.0 / static_cast<double>(levels);
    for (double& x : out.probs) x = uniform;
    return out;
  }

  // Geometric weights, generated from whichever end keeps them <= 1 so
  // arbitrarily large battery caps neither overflow nor underflow to zero
  // where mass actually lives.
  if (ratio < 1.0) {
    out.probs[0] = 1.0;
    for (int i = 1; i < levels; ++i) out.probs[i] = out.probs[i - 1] * ratio;
  } else {
    out.probs[levels - 1] = 1.0;
    for (int i = levels - 2; i >= 0; --i) out.probs[i] = out.probs[i + 1] / ratio;
  }
  double total = 0.0;
  for (double x : out.probs) total += x;
  for (double& x : out.probs) x /= total;
  return out;
}

int required_samples(const EstimationSpec& e) {
  e.validate();
  const double s = std::ceil(e.noise_variance / e.reliability_threshold);
  return s < 1.0 ? 1 : static_cast<int>(s);
}

PhaseType broadcast_wait_phase_type(const ModelParams& p) {
  const double empty = steady_state(p).empty_prob();
  RowVector initial(2);
  initial << empty, 1.0 - empty;
  Matrix gen(2, 2);
  gen << -p.harvest_rate, p.harvest_rate,  //
      0.0, -p.per_sensor_rate();
  return PhaseType(std::move(initial), std::move(gen));
}

SurvivalForm survival_form(const ModelParams& p) {
  const double empty = steady_state(p).empty_prob();
  SurvivalForm form;
  form.rate_broadcast = p.per_sensor_rate();
  form.rate_harvest = p.harvest_rate;
  form.empty_prob = empty;
  form.equal_rate = rates_equal(p.harvest_rate, p.per_sensor_rate());
  if (!form.equal_rate) {
    form.weight_fast =
        1.0 - empty * form.rate_broadcast / (form.rate_broadcast - form.rate_harvest);
  }
  return form;
}

double SurvivalForm::survival(double t) const {
  if (t < 0.0 || !std::isfinite(t)) {
    throw ValidationError("survival: time must be finite and >= 0");
  }
  if (equal_rate) {
    // Both phases decay at the same rate; from the empty state the wait is
    // the sum of two such exponentials.
    const double r = rate_broadcast;
    return std::exp(-r * t) * (1.0 + empty_prob * r * t);
  }
  const double fast = std::exp(-rate_broadcast * t);
  const double slow = std::exp(-rate_harvest * t);
  // Evaluated as slow + w*(fast - slow) so that S(0) == 1 exactly even for
  // weights far outside [0, 1].
  const double s = slow + weight_fast * (fast - slow);
  return std::clamp(s, 0.0, 1.0);
}

double broadcast_wait_survival(const ModelParams& p, double t) {
  return survival_form(p).survival(t);
}

}  // namespace ewsn
