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

// Internal helpers shared by the analytic modules. Not installed.

#ifndef EWSN_SRC_BINOMIAL_HPP
#define EWSN_SRC_BINOMIAL_HPP

#include <cmath>
#include <cstdint>

namespace ewsn::detail {

// Exact integer binomial, valid without overflow for n <= 60.
// Each intermediate step of the multiplicative form stays an integer.
inline unsigned __int128 binomial_u128(int n, int k) {
  if (k < 0 || k > n) return 0;
  if (k > n - k) k = n - k;
  unsigned __int128 c = 1;
  for (int i = 1; i <= k; ++i) {
    c = c * static_cast<unsigned>(n - k + i) / static_cast<unsigned>(i);
  }
  return c;
}

inline double log_binomial(int n, int k) {
  if (k < 0 || k > n) return -std::numeric_limits<double>::infinity();
  return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

// Binomial coefficient as a double: exact integers up to n = 60,
// log-gamma beyond (relative error ~1e-14, enough for the sums here).
inline double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  if (n <= 60) return static_cast<double>(binomial_u128(n, k));
  return std::exp(log_binomial(n, k));
}

// Compensated (Kahan) accumulator for alternating binomial sums. The
// closed-form triple sum cancels its peak terms down by ~1e11 in the
// slow-harvest corner of the parameter grids, so it accumulates in
// extended precision.
template <typename Real>
class KahanAccumulator {
 public:
  void add(Real x) {
    const Real y = x - c_;
    const Real t = s_ + y;
    c_ = (t - s_) - y;
    s_ = t;
  }
  Real value() const { return s_; }

 private:
  Real s_ = 0;
  Real c_ = 0;
};

using KahanSum = KahanAccumulator<double>;

}  // namespace ewsn::detail

#endif  // EWSN_SRC_BINOMIAL_HPP
