// Copyright 2026 The sivstrain Authors
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

#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sivstrain/tensorframes.hpp"

namespace sivstrain {

/// Line positions measured (or simulated) at one actuator setting.
struct SpectraRow {
    double control = 0.0;                       // volts or strain scale
    std::map<std::string, double> lines;        // "A".."D" or "C1".."C4", GHz
    std::optional<frames::StrainTensor> strain; // frame as recorded
};

enum class LineFamily { ABCD, CQuadruplet };

struct SpectraSeries {
    LineFamily family = LineFamily::ABCD;
    std::vector<SpectraRow> rows;

    /// Control strictly monotonic and every row carries the family's lines.
    void validate() const;
    bool has_strain() const;
};

}  // namespace sivstrain
