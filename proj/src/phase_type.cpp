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

#include "ewsn/phase_type.hpp"

#include <Eigen/LU>
#include <algorithm>
#include <cmath>
#include <map>
#include <string>

#include "binomial.hpp"
#include "ewsn/errors.hpp"

namespace ewsn {

namespace {

constexpr double kStructureTol = 1e-12;

void check_order_stat_args(const PhaseType& d, int n, int s,
                           std::ptrdiff_t dim_cap) {
  if (n < 1 || s < 1 || s > n) {
    throw ValidationError("order statistic rank must satisfy 1 <= s <= n, got s=" +
                          std::to_string(s) + ", n=" + std::to_string(n));
  }
  if (std::pow(static_cast<double>(d.phases()), n) >
      static_cast<double>(dim_cap)) {
    throw CapacityError("order statistic matrix path: dimension " +
                        std::to_string(d.phases()) + "^" + std::to_string(n) +
                        " exceeds cap " + std::to_string(dim_cap) +
                        "; use the scalar path");
  }
}

// Survival of the minimum of m i.i.d. copies: the minimum is again
// phase-type with the m-fold Kronecker representation.
double min_survival(const PhaseType& d, int m, double t,
                    std::ptrdiff_t dim_cap) {
  const RowVector start = kron_vector_power(d.initial(), m, dim_cap);
  const Matrix gen = kron_sum_power(d.sub_generator(), m, dim_cap);
  return matrix_exp_action(start, gen, t).sum();
}

}  // namespace

PhaseType::PhaseType(RowVector initial, Matrix sub_generator)
    : initial_(std::move(initial)), sub_generator_(std::move(sub_generator)) {
  if (sub_generator_.rows() != sub_generator_.cols()) {
    throw ValidationError("PhaseType: sub-generator must be square");
  }
  if (initial_.size() != sub_generator_.rows()) {
    throw ValidationError("PhaseType: initial vector length " +
                          std::to_string(initial_.size()) +
                          " does not match sub-generator dimension " +
                          std::to_string(sub_generator_.rows()));
  }
  if (!initial_.allFinite() || !sub_generator_.allFinite()) {
    throw NumericError("PhaseType: non-finite entries");
  }
  double mass = 0.0;
  for (Eigen::Index i = 0; i < initial_.size(); ++i) {
    if (initial_(i) < -kStructureTol) {
      throw ValidationError("PhaseType: initial probabilities must be >= 0");
    }
    mass += initial_(i);
  }
  if (mass > 1.0 + 1e-9) {
    throw ValidationError("PhaseType: initial probabilities sum to " +
                          std::to_string(mass) + " > 1");
  }
  bool absorbing_reachable = false;
  for (Eigen::Index i = 0; i < sub_generator_.rows(); ++i) {
    if (sub_generator_(i, i) >= 0.0) {
      throw ValidationError("PhaseType: diagonal must be strictly negative");
    }
    double row_sum = 0.0;
    for (Eigen::Index j = 0; j < sub_generator_.cols(); ++j) {
      if (i != j && sub_generator_(i, j) < -kStructureTol) {
        throw ValidationError("PhaseType: off-diagonal rates must be >= 0");
      }
      row_sum += sub_generator_(i, j);
    }
    const double scale = std::abs(sub_generator_(i, i));
    if (row_sum > kStructureTol * scale) {
      throw ValidationError("PhaseType: row sums must be <= 0");
    }
    if (row_sum < -kStructureTol * scale) absorbing_reachable = true;
  }
  if (!absorbing_reachable) {
    throw ValidationError(
        "PhaseType: absorption unreachable (all row sums zero)");
  }
}

double phase_type_cdf(const PhaseType& d, double t) {
  if (t < 0.0 || !std::isfinite(t)) {
    throw ValidationError("phase_type_cdf: time must be finite and >= 0");
  }
  const double survival =
      matrix_exp_action(d.initial(), d.sub_generator(), t).sum();
  return std::clamp(1.0 - survival, 0.0, 1.0);
}

double order_stat_cdf(const PhaseType& d, int n, int s, double t,
                      std::ptrdiff_t dim_cap) {
  check_order_stat_args(d, n, s, dim_cap);
  if (t < 0.0 || !std::isfinite(t)) {
    throw ValidationError("order_stat_cdf: time must be finite and >= 0");
  }

  // Survival of the minimum of m copies, m = n-k for k = 0..s-1.
  std::map<int, double> min_surv;
  for (int k = 0; k < s; ++k) {
    const int m = n - k;
    min_surv[m] = min_survival(d, m, t, dim_cap);
  }

  detail::KahanSum acc;
  for (int j = 0; j < s; ++j) {
    const double outer = detail::binomial(n, j);
    for (int k = 0; k <= j; ++k) {
      const double sign = ((j - k) % 2 == 0) ? 1.0 : -1.0;
      acc.add(outer * detail::binomial(j, k) * sign * min_surv.at(n - k));
    }
  }
  return std::clamp(1.0 - acc.value(), 0.0, 1.0);
}

double order_stat_moment(const PhaseType& d, int n, int s, int k,
                         std::ptrdiff_t dim_cap) {
  check_order_stat_args(d, n, s, dim_cap);
  if (k < 1) {
    throw ValidationError("order_stat_moment: moment order must be >= 1");
  }

  double k_factorial = 1.0;
  for (int i = 2; i <= k; ++i) k_factorial *= i;
  const double moment_sign = (k % 2 == 0) ? 1.0 : -1.0;

  // L[j] for the j-fold minima, j = n-s+1 .. n. Repeated linear solves
  // against the all-ones vector replace the k-th power of the inverse.
  std::map<int, double> l_term;
  for (int j = n - s + 1; j <= n; ++j) {
    const RowVector start = kron_vector_power(d.initial(), j, dim_cap);
    const Matrix gen = kron_sum_power(d.sub_generator(), j, dim_cap);
    Eigen::PartialPivLU<Matrix> lu(gen);
    Vector y = Vector::Ones(gen.rows());
    for (int rep = 0; rep < k; ++rep) {
      y = lu.solve(y);
      if (!y.allFinite()) {
        throw NumericError("order_stat_moment: singular Kronecker-sum solve");
      }
    }
    l_term[j] = detail::binomial(n, j) * moment_sign * k_factorial * start.dot(y);
  }

  double moment = 0.0;  // rank 0 moment
  for (int rank = 1; rank <= s; ++rank) {
    detail::KahanSum inc;
    for (int j = 1; j <= rank; ++j) {
      const double sign = (j % 2 == 1) ? 1.0 : -1.0;
      inc.add(sign * detail::binomial(n - rank + j, j - 1) *
              l_term.at(n - rank + j));
    }
    moment += inc.value();
  }
  return moment;
}

}  // namespace ewsn
