// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace cfpla {

struct ValidationCheck {
    std::string name;
    bool passed = false;
    double value = 0.0;      // worst observed error
    double tolerance = 0.0;
    std::string detail;
};

// Structural invariants of the pipeline: pilot orthonormality, ZF identity,
// MMSE variance split, estimate/error decorrelation, Q round trip and
// worker-count determinism of a small sweep.
std::vector<ValidationCheck> run_validation(std::uint64_t seed = 1);

bool all_passed(const std::vector<ValidationCheck>& checks);

}  // namespace cfpla
