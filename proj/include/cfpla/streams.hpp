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

namespace cfpla::streams {

// Child-stream labels. Values are part of the reproducibility contract:
// changing one changes every result derived from it.
enum Label : std::uint64_t {
    kDrop = 1,
    kGeometry = 2,
    kShadowing = 3,
    kKeys = 4,
    kGainStats = 5,
    kTrials = 6,
    kChannel = 7,
    kPilotNoise = 8,
    kMessages = 9,
    kDataNoise = 10,
    kEve = 11,
    kAttempt = 12,
    kValidation = 13,
};

}  // namespace cfpla::streams
