// evmscan: bytecode-level vulnerability detection for EVM smart contracts
// Copyright 2026 The evmscan Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <evmscan/bytecode.hpp>
#include <evmscan/opcodes.hpp>

#include <cstdint>
#include <string>
#include <vector>

namespace evmscan
{
struct Instruction
{
    std::size_t pc = 0;
    OpcodeSpec spec;
    /// PUSH operand bytes; empty for non-PUSH opcodes and for a truncated tail.
    std::vector<uint8_t> immediate;
    /// Set only on the final instruction when fewer than immediate_len bytes remained.
    bool truncated = false;
    /// Bytes this instruction occupies in the code, including a truncated tail.
    std::size_t length = 1;

    [[nodiscard]] std::string_view mnemonic() const noexcept { return spec.mnemonic; }

    friend bool operator==(const Instruction&, const Instruction&) = default;
};

struct DisassemblyListing
{
    std::vector<Instruction> instructions;
    std::size_t total_bytes = 0;
};

/// Linear sweep from offset 0. Never fails: an underfull trailing PUSH is flagged truncated.
[[nodiscard]] DisassemblyListing disassemble(const Bytecode& code);

/// One line per instruction: "0x<PC> <MNEMONIC>[ 0x<immediate>]", uppercase pc hex without
/// padding, lowercase immediate hex. Each line is terminated by '\n'.
[[nodiscard]] std::string render(const DisassemblyListing& listing);

/// "0x" followed by uppercase hex digits without padding, e.g. 0x1C.
[[nodiscard]] std::string format_pc(std::size_t pc);

/// Single line for one instruction, without a trailing newline.
[[nodiscard]] std::string render(const Instruction& instruction);

/// Concatenates opcode bytes and immediates. The bytes of a truncated tail are not
/// recorded in the listing, so only non-truncated listings round-trip exactly.
[[nodiscard]] std::vector<uint8_t> reassemble(const DisassemblyListing& listing);
}  // namespace evmscan
