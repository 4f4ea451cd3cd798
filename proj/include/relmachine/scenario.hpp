// Copyright (C) 2026 The relmachine authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>

#include <json.hpp>

namespace relmachine {

std::string artifact_version();

/// FNV-1a of the canonical (sorted-key, compact) dump of the config.
std::string config_hash(const nlohmann::json& config);

/// Dispatches {scenario, detector, adversary, trials, seed, ...} to the
/// experiments module. The report carries the normalized config and an
/// environment stamp {artifact_version, config_hash, generated_at}; only
/// generated_at varies between identical runs. Throws MalformedInput for
/// unknown scenarios or bad fields.
nlohmann::json run_scenario(const nlohmann::json& config);

/// Report without environment.generated_at, for byte comparisons.
nlohmann::json strip_timestamp(nlohmann::json report);

}  // namespace relmachine
