// evmscan: bytecode-level vulnerability detection for EVM smart contracts
// Copyright 2026 The evmscan Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstdint>
#include <string_view>

namespace evmscan
{
/// Control-flow role of an opcode.
enum class OpcodeKind : uint8_t
{
    other,
    jump,
    conditional_jump,
    jumpdest,
    terminator,
    invalid,
};

/// Static description of one opcode byte (Shanghai instruction set, PUSH0 included).
struct OpcodeSpec
{
    uint8_t byte_value = 0;
    std::string_view mnemonic = "INVALID";
    uint8_t immediate_len = 0;
    OpcodeKind kind = OpcodeKind::invalid;
    /// Number of stack items consumed.
    uint8_t stack_in = 0;
    /// Number of stack items produced.
    uint8_t stack_out = 0;

    /// True for opcodes after which execution cannot fall through:
    /// STOP, RETURN, REVERT, SELFDESTRUCT, INVALID and every unassigned byte.
    [[nodiscard]] constexpr bool ends_execution() const noexcept
    {
        return kind == OpcodeKind::terminator || kind == OpcodeKind::invalid;
    }

    [[nodiscard]] constexpr bool is_push() const noexcept { return immediate_len > 0; }

    friend bool operator==(const OpcodeSpec&, const OpcodeSpec&) = default;
};

namespace op
{
inline constexpr uint8_t STOP = 0x00;
inline constexpr uint8_t CALLVALUE = 0x34;
inline constexpr uint8_t JUMP = 0x56;
inline constexpr uint8_t JUMPI = 0x57;
inline constexpr uint8_t JUMPDEST = 0x5b;
inline constexpr uint8_t PUSH0 = 0x5f;
inline constexpr uint8_t PUSH1 = 0x60;
inline constexpr uint8_t PUSH32 = 0x7f;
inline constexpr uint8_t DUP1 = 0x80;
inline constexpr uint8_t DUP16 = 0x8f;
inline constexpr uint8_t SWAP1 = 0x90;
inline constexpr uint8_t SWAP16 = 0x9f;
inline constexpr uint8_t INVALID = 0xfe;
}  // namespace op

/// Total lookup over 0-255; unassigned bytes map to {"INVALID", kind invalid}.
[[nodiscard]] const OpcodeSpec& lookup_opcode(uint8_t byte_value) noexcept;

/// The full 256-entry table, indexed by byte value.
[[nodiscard]] const std::array<OpcodeSpec, 256>& opcode_table() noexcept;
}  // namespace evmscan
