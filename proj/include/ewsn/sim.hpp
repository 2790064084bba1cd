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

#ifndef EWSN_SIM_HPP
#define EWSN_SIM_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "ewsn/retrieval.hpp"

namespace ewsn {

/// How the measuring client enters the system. pasta_inject observes the
/// warmed-up trajectory at a deterministic instant (the PASTA argument
/// makes this equivalent to a Poisson arrival); poisson_arrivals draws the
/// arrival from the configured client process.
enum class ArrivalMode { kPastaInject, kPoissonArrivals };

struct SimConfig {
  ModelParams params;
  int samples_needed = 1;
  std::int64_t replications = 10000;
  double warmup_time = -1.0;  ///< < 0 selects default_warmup(params)
  std::uint64_t seed = 0;
  ArrivalMode arrival_mode = ArrivalMode::kPastaInject;
  int threads = 0;  ///< 0 selects the hardware thread count

  void validate() const;
};

/// Default settling time before a client is injected: 100 * max(N/mu,
/// 1/lambda_e), i.e. two orders of magnitude above the slowest time scale.
double default_warmup(const ModelParams& p);

/// Empirical retrieval times, one per replication, with summary statistics.
/// Deterministic in (config, seed): replicate r draws from RNG substream r
/// regardless of how replicates are scheduled over threads.
struct SimResult {
  std::vector<double> ws_samples;      ///< by replicate index
  std::vector<double> sorted_samples;  ///< ascending, for the empirical CDF
  double mean = 0.0;
  double ci_halfwidth_95 = 0.0;  ///< normal-approximation half width
  std::uint64_t seed_used = 0;
  std::int64_t replications = 0;
  SimConfig config;  ///< echo with warmup_time resolved

  /// Fraction of samples <= t.
  double empirical_cdf(double t) const;
};

/// Runs `replications` independent trajectories of the N-sensor network;
/// each warms up, injects a client, and records the time until the client
/// has heard s distinct sensors (repeat broadcasts from a sensor already
/// heard are not innovative and do not count).
SimResult simulate(const SimConfig& c);

/// Kolmogorov-Smirnov distance between the empirical retrieval-time CDF
/// and the analytic one for query q. The result's network parameters must
/// match q's (samples_needed may differ, e.g. for negative controls).
double ks_distance(const SimResult& r, const RetrievalQuery& q);

/// Time-averaged battery-level distribution of a tagged sensor.
struct OccupancyEstimate {
  SteadyState empirical;
  double tv_distance = 0.0;  ///< total variation to the analytic law
};

/// Estimates battery-level occupancy from `replications` independent
/// segments (each: warmup_time settling, then warmup_time of observation).
OccupancyEstimate empirical_battery_distribution(const SimConfig& c);

/// One row per replicate: replicate_index,ws_time. 12 significant digits.
void write_replicates_csv(const SimResult& r, const std::string& path);

/// Summary object: mean, CI half width, seed, replication count and the
/// fully resolved configuration.
std::string summary_json(const SimResult& r);

}  // namespace ewsn

#endif  // EWSN_SIM_HPP
