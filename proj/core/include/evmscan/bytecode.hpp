// evmscan: bytecode-level vulnerability detection for EVM smart contracts
// Copyright 2026 The evmscan Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace evmscan
{
/// Raw contract code. Only constructible from well-formed hex via parse_hex(),
/// or directly from bytes.
class Bytecode
{
public:
    Bytecode() = default;
    explicit Bytecode(std::vector<uint8_t> bytes, std::optional<std::string> source_id = {})
      : m_bytes{std::move(bytes)}, m_source_id{std::move(source_id)}
    {}

    [[nodiscard]] std::span<const uint8_t> bytes() const noexcept { return m_bytes; }
    [[nodiscard]] std::size_t size() const noexcept { return m_bytes.size(); }
    [[nodiscard]] bool empty() const noexcept { return m_bytes.empty(); }

    [[nodiscard]] const std::optional<std::string>& source_id() const noexcept
    {
        return m_source_id;
    }
    void set_source_id(std::string id) { m_source_id = std::move(id); }

    /// Compares bytes only; the source identifier is metadata.
    friend bool operator==(const Bytecode& a, const Bytecode& b) noexcept
    {
        return a.m_bytes == b.m_bytes;
    }

private:
    std::vector<uint8_t> m_bytes;
    std::optional<std::string> m_source_id;
};

/// Parses even-length hex, optionally prefixed with "0x"/"0X".
/// Throws Error{malformed_hex} on odd length or a non-hex character.
[[nodiscard]] Bytecode parse_hex(std::string_view text);

/// Lowercase hex without prefix.
[[nodiscard]] std::string to_hex(std::span<const uint8_t> bytes);
}  // namespace evmscan
