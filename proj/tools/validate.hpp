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

#ifndef EWSN_TOOLS_VALIDATE_HPP
#define EWSN_TOOLS_VALIDATE_HPP

#include <cstdint>

namespace cli {

struct ValidateOptions {
  bool quick = false;  ///< analytic checks only, skips the simulations
  std::int64_t replications = 100000;
  std::uint64_t seed = 12345;
  int threads = 0;
};

// Runs the full cross-check suite; prints one [PASS]/[FAIL] line per check.
// Returns 0 iff every check passes.
int run_validate(const ValidateOptions& opts);

}  // namespace cli

#endif  // EWSN_TOOLS_VALIDATE_HPP
