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

#include "ewsn/linalg.hpp"

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "ewsn/errors.hpp"

namespace ewsn {

namespace {

void require_finite(const Matrix& m, const char* who) {
  if (!m.allFinite()) {
    throw NumericError(std::string(who) + ": matrix has non-finite entries");
  }
}

void require_square(const Matrix& m, const char* who) {
  if (m.rows() != m.cols()) {
    throw ValidationError(std::string(who) + ": matrix must be square, got " +
                          std::to_string(m.rows()) + "x" +
                          std::to_string(m.cols()));
  }
}

// Truncation window [left, right] of the Poisson(rate) pmf together with
// the normalized weights; the neglected mass is < tol. Weights are built
// by recurrence outward from the mode, so the computation never under- or
// overflows even for large rates.
struct PoissonWindow {
  std::size_t left = 0;
  std::size_t right = 0;
  std::vector<double> weights;  // weights[k - left] ~ pmf(k)
};

PoissonWindow poisson_window(double rate, double tol) {
  PoissonWindow w;
  if (rate <= 0.0) {
    w.weights = {1.0};
    return w;
  }
  const auto mode = static_cast<std::size_t>(rate);
  // Drop terms below cutoff * (mode weight); the pmf decays faster than
  // geometrically a few standard deviations from the mode, so the total
  // neglected mass stays far below tol.
  const double cutoff = tol * 1e-4;

  std::vector<double> up;  // mode, mode+1, ...
  double v = 1.0;
  std::size_t k = mode;
  while (true) {
    up.push_back(v);
    ++k;
    v *= rate / static_cast<double>(k);
    if (v < cutoff) break;
  }
  std::vector<double> down;  // mode-1, mode-2, ...
  v = 1.0;
  k = mode;
  while (k > 0) {
    v *= static_cast<double>(k) / rate;
    if (v < cutoff) break;
    down.push_back(v);
    --k;
  }

  w.left = mode - down.size();
  w.right = mode + up.size() - 1;
  w.weights.resize(down.size() + up.size());
  for (std::size_t i = 0; i < down.size(); ++i) {
    w.weights[down.size() - 1 - i] = down[i];
  }
  for (std::size_t i = 0; i < up.size(); ++i) {
    w.weights[down.size() + i] = up[i];
  }
  double total = 0.0;
  for (double x : w.weights) total += x;
  for (double& x : w.weights) x /= total;
  return w;
}

double uniformization_rate(const Matrix& m) {
  double q = 0.0;
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    q = std::max(q, std::abs(m(i, i)));
  }
  return q;
}

}  // namespace

Matrix kron_product(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

Matrix kron_sum(const Matrix& a, const Matrix& b) {
  require_square(a, "kron_sum");
  require_square(b, "kron_sum");
  const Eigen::Index n = a.rows();
  const Eigen::Index m = b.rows();
  Matrix out = kron_product(a, Matrix::Identity(m, m));
  out += kron_product(Matrix::Identity(n, n), b);
  return out;
}

Matrix kron_sum_power(const Matrix& m, int n, std::ptrdiff_t dim_cap) {
  require_square(m, "kron_sum_power");
  if (n < 1) {
    throw ValidationError("kron_sum_power: fold count must be >= 1, got " +
                          std::to_string(n));
  }
  const double p = static_cast<double>(m.rows());
  if (std::pow(p, n) > static_cast<double>(dim_cap)) {
    throw CapacityError("kron_sum_power: dimension " + std::to_string(m.rows()) +
                        "^" + std::to_string(n) + " exceeds cap " +
                        std::to_string(dim_cap));
  }
  Matrix out = m;
  for (int i = 1; i < n; ++i) {
    out = kron_sum(out, m);
  }
  return out;
}

RowVector kron_vector_power(const RowVector& v, int n, std::ptrdiff_t dim_cap) {
  if (n < 1) {
    throw ValidationError("kron_vector_power: fold count must be >= 1, got " +
                          std::to_string(n));
  }
  const double p = static_cast<double>(v.size());
  if (std::pow(p, n) > static_cast<double>(dim_cap)) {
    throw CapacityError("kron_vector_power: dimension " +
                        std::to_string(v.size()) + "^" + std::to_string(n) +
                        " exceeds cap " + std::to_string(dim_cap));
  }
  RowVector out = v;
  for (int i = 1; i < n; ++i) {
    RowVector next(out.size() * v.size());
    for (Eigen::Index a = 0; a < out.size(); ++a) {
      next.segment(a * v.size(), v.size()) = out(a) * v;
    }
    out = std::move(next);
  }
  return out;
}

Matrix matrix_exp(const Matrix& m, double t, double tol) {
  require_square(m, "matrix_exp");
  require_finite(m, "matrix_exp");
  if (t < 0.0 || !std::isfinite(t)) {
    throw ValidationError("matrix_exp: time must be finite and >= 0, got " +
                          std::to_string(t));
  }
  const Eigen::Index dim = m.rows();
  const double q = uniformization_rate(m);
  if (q * t == 0.0) {
    return Matrix::Identity(dim, dim) + m * t;  // t == 0 or m diagonal-free
  }
  const Matrix p = Matrix::Identity(dim, dim) + m / q;
  const PoissonWindow w = poisson_window(q * t, tol);

  Matrix power = Matrix::Identity(dim, dim);
  Matrix out = Matrix::Zero(dim, dim);
  for (std::size_t k = 0; k <= w.right; ++k) {
    if (k >= w.left) out += w.weights[k - w.left] * power;
    if (k < w.right) power = power * p;
  }
  if (!out.allFinite()) {
    throw NumericError("matrix_exp: uniformization produced non-finite values");
  }
  return out;
}

RowVector matrix_exp_action(const RowVector& u, const Matrix& m, double t,
                            double tol) {
  require_square(m, "matrix_exp_action");
  require_finite(m, "matrix_exp_action");
  if (u.size() != m.rows()) {
    throw ValidationError("matrix_exp_action: vector length " +
                          std::to_string(u.size()) + " does not match matrix " +
                          std::to_string(m.rows()));
  }
  if (t < 0.0 || !std::isfinite(t)) {
    throw ValidationError("matrix_exp_action: time must be finite and >= 0");
  }
  const double q = uniformization_rate(m);
  if (q * t == 0.0) {
    return u + t * (u * m);
  }
  const Matrix p = Matrix::Identity(m.rows(), m.cols()) + m / q;
  const PoissonWindow w = poisson_window(q * t, tol);

  RowVector power = u;
  RowVector out = RowVector::Zero(u.size());
  for (std::size_t k = 0; k <= w.right; ++k) {
    if (k >= w.left) out += w.weights[k - w.left] * power;
    if (k < w.right) power = power * p;
  }
  if (!out.allFinite()) {
    throw NumericError(
        "matrix_exp_action: uniformization produced non-finite values");
  }
  return out;
}

}  // namespace ewsn
