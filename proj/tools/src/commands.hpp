// Copyright 2026 The qec-sense Authors
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


// Subcommands of the qec-sense tool. Every command takes a fully resolved
// RunConfig (JSON) and returns a table whose first metadata line embeds that
// config, so each artifact can be regenerated from its own header.

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "table.hpp"

namespace qecsense::cli {

inline constexpr std::uint64_t kDefaultSeed = 20260101;

const std::vector<std::string>& command_names();

// Numeric and enum flags of a command, each bound to a JSON pointer into the
// RunConfig.
struct FlagSpec {
  std::string name;     // without leading dashes
  std::string pointer;  // e.g. "/params/gamma_err"
  std::string help;
};
const std::vector<FlagSpec>& command_flags(std::string_view command);

nlohmann::json default_config(std::string_view command);

// defaults < QEC_SENSE_SEED < config file < flag overrides. Unknown keys and
// type mismatches are rejected.
nlohmann::json resolve_config(std::string_view command, const nlohmann::json& file,
                              const nlohmann::json& overrides, std::optional<std::uint64_t> env_seed);

// Parses a seed string such as the QEC_SENSE_SEED value.
std::uint64_t parse_seed(std::string_view s);

struct CommandResult {
  Table table;
  std::vector<std::string> warnings;
};

CommandResult run_command(const nlohmann::json& config, unsigned workers);

}  // namespace qecsense::cli
