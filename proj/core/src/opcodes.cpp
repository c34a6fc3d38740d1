// evmscan: bytecode-level vulnerability detection for EVM smart contracts
// Copyright 2026 The evmscan Authors.
// SPDX-License-Identifier: Apache-2.0

#include <evmscan/opcodes.hpp>

namespace evmscan
{
namespace
{
constexpr std::array<std::string_view, 32> push_names = {"PUSH1", "PUSH2", "PUSH3", "PUSH4",
    "PUSH5", "PUSH6", "PUSH7", "PUSH8", "PUSH9", "PUSH10", "PUSH11", "PUSH12", "PUSH13", "PUSH14",
    "PUSH15", "PUSH16", "PUSH17", "PUSH18", "PUSH19", "PUSH20", "PUSH21", "PUSH22", "PUSH23",
    "PUSH24", "PUSH25", "PUSH26", "PUSH27", "PUSH28", "PUSH29", "PUSH30", "PUSH31", "PUSH32"};

constexpr std::array<std::string_view, 16> dup_names = {"DUP1", "DUP2", "DUP3", "DUP4", "DUP5",
    "DUP6", "DUP7", "DUP8", "DUP9", "DUP10", "DUP11", "DUP12", "DUP13", "DUP14", "DUP15", "DUP16"};

constexpr std::array<std::string_view, 16> swap_names = {"SWAP1", "SWAP2", "SWAP3", "SWAP4",
    "SWAP5", "SWAP6", "SWAP7", "SWAP8", "SWAP9", "SWAP10", "SWAP11", "SWAP12", "SWAP13", "SWAP14",
    "SWAP15", "SWAP16"};

constexpr std::array<std::string_view, 5> log_names = {"LOG0", "LOG1", "LOG2", "LOG3", "LOG4"};

constexpr std::array<OpcodeSpec, 256> make_table() noexcept
{
    std::array<OpcodeSpec, 256> t{};
    for (int i = 0; i < 256; ++i)
        t[i] = OpcodeSpec{static_cast<uint8_t>(i), "INVALID", 0, OpcodeKind::invalid, 0, 0};

    auto set = [&t](uint8_t b, std::string_view name, uint8_t in, uint8_t out,
                   OpcodeKind kind = OpcodeKind::other) {
        t[b] = OpcodeSpec{b, name, 0, kind, in, out};
    };

    set(0x00, "STOP", 0, 0, OpcodeKind::terminator);
    set(0x01, "ADD", 2, 1);
    set(0x02, "MUL", 2, 1);
    set(0x03, "SUB", 2, 1);
    set(0x04, "DIV", 2, 1);
    set(0x05, "SDIV", 2, 1);
    set(0x06, "MOD", 2, 1);
    set(0x07, "SMOD", 2, 1);
    set(0x08, "ADDMOD", 3, 1);
    set(0x09, "MULMOD", 3, 1);
    set(0x0a, "EXP", 2, 1);
    set(0x0b, "SIGNEXTEND", 2, 1);

    set(0x10, "LT", 2, 1);
    set(0x11, "GT", 2, 1);
    set(0x12, "SLT", 2, 1);
    set(0x13, "SGT", 2, 1);
    set(0x14, "EQ", 2, 1);
    set(0x15, "ISZERO", 1, 1);
    set(0x16, "AND", 2, 1);
    set(0x17, "OR", 2, 1);
    set(0x18, "XOR", 2, 1);
    set(0x19, "NOT", 1, 1);
    set(0x1a, "BYTE", 2, 1);
    set(0x1b, "SHL", 2, 1);
    set(0x1c, "SHR", 2, 1);
    set(0x1d, "SAR", 2, 1);

    set(0x20, "KECCAK256", 2, 1);

    set(0x30, "ADDRESS", 0, 1);
    set(0x31, "BALANCE", 1, 1);
    set(0x32, "ORIGIN", 0, 1);
    set(0x33, "CALLER", 0, 1);
    set(0x34, "CALLVALUE", 0, 1);
    set(0x35, "CALLDATALOAD", 1, 1);
    set(0x36, "CALLDATASIZE", 0, 1);
    set(0x37, "CALLDATACOPY", 3, 0);
    set(0x38, "CODESIZE", 0, 1);
    set(0x39, "CODECOPY", 3, 0);
    set(0x3a, "GASPRICE", 0, 1);
    set(0x3b, "EXTCODESIZE", 1, 1);
    set(0x3c, "EXTCODECOPY", 4, 0);
    set(0x3d, "RETURNDATASIZE", 0, 1);
    set(0x3e, "RETURNDATACOPY", 3, 0);
    set(0x3f, "EXTCODEHASH", 1, 1);

    set(0x40, "BLOCKHASH", 1, 1);
    set(0x41, "COINBASE", 0, 1);
    set(0x42, "TIMESTAMP", 0, 1);
    set(0x43, "NUMBER", 0, 1);
    set(0x44, "PREVRANDAO", 0, 1);
    set(0x45, "GASLIMIT", 0, 1);
    set(0x46, "CHAINID", 0, 1);
    set(0x47, "SELFBALANCE", 0, 1);
    set(0x48, "BASEFEE", 0, 1);

    set(0x50, "POP", 1, 0);
    set(0x51, "MLOAD", 1, 1);
    set(0x52, "MSTORE", 2, 0);
    set(0x53, "MSTORE8", 2, 0);
    set(0x54, "SLOAD", 1, 1);
    set(0x55, "SSTORE", 2, 0);
    set(0x56, "JUMP", 1, 0, OpcodeKind::jump);
    set(0x57, "JUMPI", 2, 0, OpcodeKind::conditional_jump);
    set(0x58, "PC", 0, 1);
    set(0x59, "MSIZE", 0, 1);
    set(0x5a, "GAS", 0, 1);
    set(0x5b, "JUMPDEST", 0, 0, OpcodeKind::jumpdest);
    set(0x5f, "PUSH0", 0, 1);

    for (int n = 1; n <= 32; ++n)
    {
        const auto b = static_cast<uint8_t>(0x5f + n);
        t[b] = OpcodeSpec{b, push_names[n - 1], static_cast<uint8_t>(n), OpcodeKind::other, 0, 1};
    }
    for (int n = 1; n <= 16; ++n)
    {
        set(static_cast<uint8_t>(0x7f + n), dup_names[n - 1], static_cast<uint8_t>(n),
            static_cast<uint8_t>(n + 1));
        set(static_cast<uint8_t>(0x8f + n), swap_names[n - 1], static_cast<uint8_t>(n + 1),
            static_cast<uint8_t>(n + 1));
    }
    for (int n = 0; n <= 4; ++n)
        set(static_cast<uint8_t>(0xa0 + n), log_names[n], static_cast<uint8_t>(n + 2), 0);

    set(0xf0, "CREATE", 3, 1);
    set(0xf1, "CALL", 7, 1);
    set(0xf2, "CALLCODE", 7, 1);
    set(0xf3, "RETURN", 2, 0, OpcodeKind::terminator);
    set(0xf4, "DELEGATECALL", 6, 1);
    set(0xf5, "CREATE2", 4, 1);
    set(0xfa, "STATICCALL", 6, 1);
    set(0xfd, "REVERT", 2, 0, OpcodeKind::terminator);
    set(0xfe, "INVALID", 0, 0, OpcodeKind::terminator);
    set(0xff, "SELFDESTRUCT", 1, 0, OpcodeKind::terminator);
    return t;
}

constexpr auto table = make_table();

static_assert(table[0x60].immediate_len == 1 && table[0x7f].immediate_len == 32);
static_assert(table[0x0c].kind == OpcodeKind::invalid);
static_assert(table[0x5b].kind == OpcodeKind::jumpdest);
}  // namespace

const OpcodeSpec& lookup_opcode(uint8_t byte_value) noexcept
{
    return table[byte_value];
}

const std::array<OpcodeSpec, 256>& opcode_table() noexcept
{
    return table;
}
}  // namespace evmscan
