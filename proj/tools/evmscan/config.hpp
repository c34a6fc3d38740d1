// evmscan: bytecode-level vulnerability detection for EVM smart contracts
// Copyright 2026 The evmscan Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <evmscan/features.hpp>
#include <evmscan/model.hpp>

#include <filesystem>
#include <optional>
#include <string>

namespace evmscan::cli
{
struct PathConfig
{
    std::optional<std::string> corpus;
    std::optional<std::string> vocabulary;
    std::optional<std::string> model;
    std::optional<std::string> report;
};

/// Everything a command can be configured with. Defaults come from the library types.
struct RunConfig
{
    NetworkConfig network;
    TrainingConfig training;
    EncoderSpec encoder;
    PathConfig paths;
};

/// Overlays the [network], [training], [features] and [paths] tables of a TOML file.
/// Unknown tables or keys are rejected. Throws Error{file_not_found} or Error{parse_error}.
void apply_config_file(RunConfig& config, const std::filesystem::path& path);

/// TOML rendering of the resolved configuration, in the same layout the file loader reads.
[[nodiscard]] std::string to_toml(const RunConfig& config);
}  // namespace evmscan::cli
