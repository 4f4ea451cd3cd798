// Copyright (C) 2026 The relmachine authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "relmachine/machine.hpp"

namespace relmachine {

inline constexpr int kMachineSchemaVersion = 1;

/// Machine definition document:
/// {schema_version, name?, states, start, accept, reject, alphabet,
///  transitions: [{read, state, write, next, move}],
///  probabilistic: [{read, state, successors: [{write, next, move, p}]}],
///  query_states: [{state, oracle, arg_region, out_region, next, move}]}
/// arg_region is [b, e] or [[b, e], ...].
nlohmann::json to_json(const MachineSpec& spec);
MachineSpec machine_from_json(const nlohmann::json& j);

/// Parses JSON text; syntax errors are reported as "line L, column C".
nlohmann::json parse_json_text(const std::string& text, const std::string& origin);
nlohmann::json load_json_file(const std::filesystem::path& path);

MachineSpec load_machine_file(const std::filesystem::path& path);

}  // namespace relmachine
