// Copyright 2026 The workfluct Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <string>

#include <CLI11.hpp>

#include "cli.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Work statistics, fluctuation theorems and weak-value witnesses for driven quantum systems"};
    app.require_subcommand(1);

    workfluct::cli::Overrides o;
    std::string config, out, kinds, s;
    std::uint64_t seed = 0;
    double tolerance = 0.0;
    std::size_t instances = 0;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config, "JSON config file");
        sub->add_option("--seed", seed, "Seed for every stochastic routine (default 0)");
        sub->add_option("--out", out, "Output directory");
        sub->add_option("--kinds", kinds, "Comma list of tpm, weak, finite_s");
        sub->add_option("--s", s, "Comma list of s values or logspace(a,b,n)");
        sub->add_flag("--no-oracle", o.no_oracle, "Skip the pointer grid column in scan-s");
        sub->add_option("--tol", tolerance, "Check tolerance");
        sub->add_option("--instances", instances, "Instances per verification suite");
    };
    CLI::App* run = app.add_subcommand("run", "Compute work distributions and fluctuation-theorem reports");
    CLI::App* scan = app.add_subcommand("scan-s", "Scan the pointer spread s for a witness pair");
    CLI::App* verify = app.add_subcommand("verify", "Run the seeded random identity suites");
    CLI::App* witness = app.add_subcommand("witness", "Find the most negative state and its s threshold");
    for (CLI::App* sub : {run, scan, verify, witness}) add_common(sub);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : workfluct::cli::kConfigError;
    }

    CLI::App* chosen = app.get_subcommands().front();
    if (chosen->count("--config")) o.config_path = config;
    if (chosen->count("--seed")) o.seed = seed;
    if (chosen->count("--out")) o.out = out;
    if (chosen->count("--kinds")) o.kinds = kinds;
    if (chosen->count("--s")) o.s = s;
    if (chosen->count("--tol")) o.tol = tolerance;
    if (chosen->count("--instances")) o.instances = instances;
    return workfluct::cli::dispatch(chosen->get_name(), o);
}
