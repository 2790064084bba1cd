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

#ifndef EWSN_RETRIEVAL_HPP
#define EWSN_RETRIEVAL_HPP

#include "ewsn/model.hpp"

namespace ewsn {

/// A client's request: the network plus the number of measurements from
/// distinct sensors needed for a reliable estimate. The retrieval time is
/// the samples_needed-th order statistic of the per-sensor broadcast waits.
struct RetrievalQuery {
  ModelParams params;
  int samples_needed = 1;

  /// Throws ValidationError unless 1 <= samples_needed <= n_sensors.
  void validate() const;
};

/// P(retrieval time > t), the binomial tail over per-sensor waits. All
/// terms are non-negative; no alternating cancellation.
double retrieval_survival(const RetrievalQuery& q, double t);

/// P(retrieval time <= t) = 1 - retrieval_survival.
double retrieval_cdf(const RetrievalQuery& q, double t);

/// Expected retrieval time in closed form (triple binomial sum over the
/// two-exponential survival). Exact integer binomials with compensated
/// summation up to N = 60; log-space with sign tracking beyond, where the
/// quadrature path is the recommended reference. Delegates to quadrature
/// when the rates coincide (the mixture form is singular there).
double expected_time_closed_form(const RetrievalQuery& q);

/// Expected retrieval time by adaptive quadrature of retrieval_survival
/// over [0, 50*max(N/mu, 1/lambda_e)] plus the analytic tail of the
/// dominant exponential. Relative tolerance 1e-10; throws NumericError
/// with the achieved tolerance if the integrator fails to converge.
double expected_time_quadrature(const RetrievalQuery& q);

/// Expected retrieval time through the Kronecker moment machinery
/// (exact cross-check path, exponential in N).
double expected_time_matrix(const RetrievalQuery& q,
                            std::ptrdiff_t dim_cap = kKronDimCapDefault);

/// CDF of the retrieval time through the Kronecker machinery.
double retrieval_cdf_matrix(const RetrievalQuery& q, double t,
                            std::ptrdiff_t dim_cap = kKronDimCapDefault);

/// Combinatorial normalization identity behind the asymptotic limits,
/// evaluated in exact rational arithmetic; equals 1 for all 0 <= k < n.
double binomial_identity(int n, int k);

/// Limit of the expected retrieval time as the harvest rate grows
/// unboundedly: sum_{j<s} 1 / (mu (1 - j/N)).
double limit_infinite_harvest(int n, int s, double mu);

/// Limit as the battery capacity grows unboundedly; the binding rate is
/// the harvest rate below mu/N and the per-sensor broadcast rate above.
double limit_infinite_battery(int n, int s, double lambda_e, double mu);

/// Limit as the network grows unboundedly: s / mu.
double limit_infinite_network(int s, double mu);

}  // namespace ewsn

#endif  // EWSN_RETRIEVAL_HPP
