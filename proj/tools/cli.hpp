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

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

namespace workfluct::cli {

/// 0 success, 2 invalid configuration or input, 3 numerical failure (including
/// a verification suite that did not pass).
enum ExitCode : int { kOk = 0, kConfigError = 2, kNumericError = 3 };

/// Effective configuration: the JSON document after command-line overrides.
/// Commands read only the keys they need.
struct RunConfig {
    nlohmann::json document = nlohmann::json::object();
    std::uint64_t seed = 0;
    std::filesystem::path out_dir = ".";

    /// 64-bit FNV-1a of the canonical document dump without "out", as 16 hex digits.
    std::string digest() const;
};

/// Flag values that override config fields when present.
struct Overrides {
    std::optional<std::string> config_path;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out;
    std::optional<std::string> kinds;
    std::optional<std::string> s;
    bool no_oracle = false;
    std::optional<double> tol;
    std::optional<std::size_t> instances;
};

/// Reads the config file (if any) and applies overrides. Throws Error(ParseError).
RunConfig load_config(const Overrides& overrides);

/// Parses "0.1,1,10" or "logspace(a,b,n)" (a, b are endpoint values).
std::vector<double> parse_s_list(const std::string& text);

/// Files produced by a command; written only after the command succeeds.
using Artifacts = std::vector<std::pair<std::filesystem::path, std::string>>;

int cmd_run(const RunConfig& cfg, Artifacts& out);
int cmd_scan_s(const RunConfig& cfg, Artifacts& out);
int cmd_verify(const RunConfig& cfg, Artifacts& out);
int cmd_witness(const RunConfig& cfg, Artifacts& out);

/// Writes each artifact to a temporary sibling and renames it into place.
void commit(const Artifacts& artifacts);

/// Runs `command` end to end, mapping exceptions onto exit codes and a
/// one-line stderr diagnostic.
int dispatch(const std::string& command, const Overrides& overrides);

}  // namespace workfluct::cli
