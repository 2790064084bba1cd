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

#ifndef EWSN_MODEL_HPP
#define EWSN_MODEL_HPP

#include <optional>
#include <vector>

#include "ewsn/phase_type.hpp"

namespace ewsn {

/// Network of n_sensors energy-harvesting sensors with batteries of
/// battery_cap units. Each sensor harvests one unit at rate harvest_rate;
/// the network broadcasts at rate broadcast_rate shared uniformly, so a
/// sensor with energy broadcasts at broadcast_rate / n_sensors. The
/// optional arrival_rate drives the simulator's Poisson client arrivals
/// only; it does not enter any retrieval-time formula.
struct ModelParams {
  int n_sensors = 1;
  int battery_cap = 1;
  double harvest_rate = 0.0;
  double broadcast_rate = 0.0;
  std::optional<double> arrival_rate;

  /// Throws ValidationError unless N >= 1, B >= 1 and all rates > 0.
  void validate() const;

  /// Broadcast rate of one sensor with energy.
  double per_sensor_rate() const {
    return broadcast_rate / static_cast<double>(n_sensors);
  }

  bool operator==(const ModelParams&) const = default;
};

/// Noise variance of a single measurement and the target variance of the
/// averaged estimate.
struct EstimationSpec {
  double noise_variance = 0.0;
  double reliability_threshold = 0.0;

  void validate() const;
};

/// Stationary distribution of one sensor's battery level, index = level.
struct SteadyState {
  std::vector<double> probs;

  double empty_prob() const { return probs.front(); }
};

/// P(broadcast wait > t) in two-exponential form:
///   S(t) = weight_fast * exp(-rate_broadcast * t)
///        + (1 - weight_fast) * exp(-rate_harvest * t).
/// weight_fast may fall outside [0, 1] (signed mixture); it is never
/// clamped because the order-statistic algebra downstream is polynomial
/// in it. When the two rates coincide (equal_rate) the mixture degenerates
/// and survival() uses the limiting form exp(-r t)(1 + empty_prob * r t).
struct SurvivalForm {
  double weight_fast = 1.0;
  double rate_broadcast = 0.0;
  double rate_harvest = 0.0;
  double empty_prob = 0.0;
  bool equal_rate = false;

  double survival(double t) const;
};

/// Battery-level stationary distribution of a single sensor (birth rate
/// harvest_rate, death rate broadcast_rate / n_sensors). Geometric profile;
/// uniform when the two rates coincide.
SteadyState steady_state(const ModelParams& p);

/// Measurements from distinct sensors needed to push the estimate variance
/// below the threshold: ceil(noise_variance / reliability_threshold), >= 1.
int required_samples(const EstimationSpec& e);

/// Two-phase representation of the wait until a sensor observed in steady
/// state next broadcasts: phase 0 = battery empty, phase 1 = levels 1..B
/// pooled (a single harvest suffices to enable the broadcast clock).
PhaseType broadcast_wait_phase_type(const ModelParams& p);

/// Scalar mixture coefficients of the broadcast-wait survival.
SurvivalForm survival_form(const ModelParams& p);

/// P(broadcast wait > t); survival_form(p).survival(t).
double broadcast_wait_survival(const ModelParams& p, double t);

}  // namespace ewsn

#endif  // EWSN_MODEL_HPP
