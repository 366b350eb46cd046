// Copyright 2026 The se2ocp Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Randomized property checks behind `se2ocp selftest`.

#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace se2ocp::tools {

struct PropertyResult {
  std::string name;
  double max_error = 0.0;
  double limit = 0.0;
  bool passed() const { return max_error <= limit; }
};

std::vector<PropertyResult> run_selftest(std::uint64_t seed);

}  // namespace se2ocp::tools
