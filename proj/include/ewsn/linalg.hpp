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

#ifndef EWSN_LINALG_HPP
#define EWSN_LINALG_HPP

#include <Eigen/Dense>
#include <cstddef>

namespace ewsn {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using RowVector = Eigen::RowVectorXd;

/// Default cap on the dimension of explicitly materialized Kronecker
/// matrices. The n-fold paths grow as p^n; beyond the cap callers should
/// switch to the scalar formulas.
inline constexpr std::ptrdiff_t kKronDimCapDefault = 4096;

/// Kronecker product with the standard block layout a(i,j)*b.
Matrix kron_product(const Matrix& a, const Matrix& b);

/// Kronecker sum a ⊗ I_m + I_n ⊗ b of square matrices.
/// Throws ValidationError if either input is non-square.
Matrix kron_sum(const Matrix& a, const Matrix& b);

/// n-fold Kronecker sum of m with itself (left fold, n >= 1).
/// Throws CapacityError once the result dimension would exceed dim_cap.
Matrix kron_sum_power(const Matrix& m, int n,
                      std::ptrdiff_t dim_cap = kKronDimCapDefault);

/// n-fold Kronecker product of a row vector with itself (n >= 1).
RowVector kron_vector_power(const RowVector& v, int n,
                            std::ptrdiff_t dim_cap = kKronDimCapDefault);

/// exp(m*t) for a sub-generator m and t >= 0, by uniformization.
///
/// Uniformization keeps the probabilistic structure: for a sub-generator
/// input the result is entrywise non-negative with row sums <= 1. The
/// series is truncated once the neglected Poisson mass drops below tol.
Matrix matrix_exp(const Matrix& m, double t, double tol = 1e-12);

/// Row-vector action u * exp(m*t) without forming the full exponential.
/// Same uniformization series as matrix_exp; O(dim^2) per Poisson term.
RowVector matrix_exp_action(const RowVector& u, const Matrix& m, double t,
                            double tol = 1e-12);

}  // namespace ewsn

#endif  // EWSN_LINALG_HPP
