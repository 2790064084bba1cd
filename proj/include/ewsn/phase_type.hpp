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

#ifndef EWSN_PHASE_TYPE_HPP
#define EWSN_PHASE_TYPE_HPP

#include "ewsn/linalg.hpp"

namespace ewsn {

/// Absorption-time distribution of a finite CTMC: an initial distribution
/// over the transient states and the sub-generator of transitions among
/// them. Construction validates both pieces:
///   - initial entries >= 0 with total <= 1 (deficit = mass absorbed at 0),
///   - sub-generator rows: negative diagonal, non-negative off-diagonal,
///     row sums <= 0, with absorption reachable from at least one state.
class PhaseType {
 public:
  PhaseType(RowVector initial, Matrix sub_generator);

  const RowVector& initial() const { return initial_; }
  const Matrix& sub_generator() const { return sub_generator_; }
  Eigen::Index phases() const { return sub_generator_.rows(); }

 private:
  RowVector initial_;
  Matrix sub_generator_;
};

/// P(absorption <= t). Clamped to [0, 1].
double phase_type_cdf(const PhaseType& d, double t);

/// CDF at t of the s-th order statistic of n i.i.d. copies of d, computed
/// through the explicit Kronecker representation of minima. Exponential in
/// n by construction; throws CapacityError once phases^n exceeds dim_cap.
double order_stat_cdf(const PhaseType& d, int n, int s, double t,
                      std::ptrdiff_t dim_cap = kKronDimCapDefault);

/// k-th moment of the s-th order statistic of n i.i.d. copies of d.
/// Linear solves use LU with partial pivoting, applied k times to the
/// all-ones vector; the inverse is never formed.
double order_stat_moment(const PhaseType& d, int n, int s, int k,
                         std::ptrdiff_t dim_cap = kKronDimCapDefault);

}  // namespace ewsn

#endif  // EWSN_PHASE_TYPE_HPP
