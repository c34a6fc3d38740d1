// evmscan: bytecode-level vulnerability detection for EVM smart contracts
// Copyright 2026 The evmscan Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <string_view>

namespace evmscan
{
/// Lowercase hex SHA-256 of the given bytes.
[[nodiscard]] std::string sha256_hex(std::string_view data);
}  // namespace evmscan
