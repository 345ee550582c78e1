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

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

#include "cli/config.hpp"

namespace sivstrain::cli {

struct Invocation {
    std::string command;                 // spectrum | sweep | fit | rates | coupling
    std::optional<std::string> config;   // defaults when unset
    std::optional<std::string> out;      // stdout when unset
    std::optional<std::uint64_t> seed;
    std::optional<std::string> format;   // csv | json
};

/// Renders the command's output for a resolved config. Throws on failure.
std::string render(const std::string& command, const RunConfig& cfg);

/// Loads the config, applies flag overrides, renders, and writes the result.
/// Returns the process exit code; failures are reported on `err` as one JSON line.
int dispatch(const Invocation& inv, std::ostream& out, std::ostream& err);

}  // namespace sivstrain::cli
