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

// Command-line front-end: sivstrain <spectrum|sweep|fit|rates|coupling> [flags]

#include <iostream>

#include <CLI11.hpp>

#include "cli/commands.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Strain response of silicon-vacancy centers in diamond"};
    app.require_subcommand(1, 1);

    sivstrain::cli::Invocation inv;
    std::string config, out, format;
    std::uint64_t seed = 0;

    for (const char* name : {"spectrum", "sweep", "fit", "rates", "coupling"}) {
        auto* sub = app.add_subcommand(name);
        sub->add_option("--config", config, "JSON config, or a previous output to re-run");
        sub->add_option("--out", out, "Output path (default stdout)");
        sub->add_option("--seed", seed, "Seed for stochastic fixture noise");
        sub->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    auto* sub = app.get_subcommands().front();
    inv.command = sub->get_name();
    if (sub->count("--config")) inv.config = config;
    if (sub->count("--out")) inv.out = out;
    if (sub->count("--seed")) inv.seed = seed;
    if (sub->count("--format")) inv.format = format;
    return sivstrain::cli::dispatch(inv, std::cout, std::cerr);
}
