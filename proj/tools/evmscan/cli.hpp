// evmscan: bytecode-level vulnerability detection for EVM smart contracts
// Copyright 2026 The evmscan Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <evmscan/error.hpp>

#include <ostream>
#include <string>
#include <vector>

namespace evmscan::cli
{
inline constexpr int exit_ok = 0;
inline constexpr int exit_input = 2;
inline constexpr int exit_io = 3;
inline constexpr int exit_dataset = 4;
inline constexpr int exit_mismatch = 5;
inline constexpr int exit_usage = 64;

[[nodiscard]] int exit_code(ErrorKind kind) noexcept;

/// Runs one command line (without the program name). Data goes to `out`,
/// diagnostics to `err`. Returns the process exit code.
[[nodiscard]] int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
}  // namespace evmscan::cli
