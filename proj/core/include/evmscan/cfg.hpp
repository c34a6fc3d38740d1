// evmscan: bytecode-level vulnerability detection for EVM smart contracts
// Copyright 2026 The evmscan Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <evmscan/disassembler.hpp>

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace evmscan
{
struct BasicBlock
{
    std::size_t start_pc = 0;
    std::vector<Instruction> instructions;
    /// Start pcs of successor blocks, ascending and unique.
    std::vector<std::size_t> successors;
    /// The block ends in JUMP/JUMPI whose target is unknown or not a JUMPDEST.
    bool unresolved_jump = false;

    [[nodiscard]] const Instruction& last() const { return instructions.back(); }
    [[nodiscard]] bool starts_with_jumpdest() const noexcept
    {
        return !instructions.empty() && instructions.front().spec.kind == OpcodeKind::jumpdest;
    }
};

struct ControlFlowGraph
{
    std::map<std::size_t, BasicBlock> blocks;
    std::size_t entry = 0;
    std::size_t unresolved_count = 0;

    [[nodiscard]] std::size_t edge_count() const noexcept;
};

/// Mnemonics in DFS visiting order, PUSH operands dropped.
struct OpcodeSequence
{
    std::vector<std::string> mnemonics;
    std::optional<std::string> source_id;

    friend bool operator==(const OpcodeSequence&, const OpcodeSequence&) = default;
};

/// Leaders are pc 0, every JUMPDEST, and every instruction following JUMP, JUMPI
/// or a terminator (INVALID and unassigned bytes included). Successors are left empty.
[[nodiscard]] std::vector<BasicBlock> split_blocks(const DisassemblyListing& listing);

/// Resolves jump targets in two phases.
///
/// Phase 1 interprets every block in isolation over an abstract stack that tracks
/// only PUSH constants, starting from an unknown entry stack. Phase 2 propagates exit
/// stacks along discovered edges from the entry block until no entry stack changes.
/// Entry stacks meet per slot: equal constants survive, anything else becomes unknown.
/// Edges are only ever added; a jump whose final target is unknown, or is a constant
/// that is not a JUMPDEST, is flagged unresolved.
[[nodiscard]] ControlFlowGraph resolve_jumps(std::vector<BasicBlock> blocks);

[[nodiscard]] inline ControlFlowGraph build_cfg(const DisassemblyListing& listing)
{
    return resolve_jumps(split_blocks(listing));
}

/// Iterative DFS from the entry block with a visited set. Successors are pushed in
/// ascending pc order, so the highest-pc successor is visited first. Each block
/// contributes all of its mnemonics once, on first visit.
/// Throws Error{empty_graph} when the graph has no blocks.
[[nodiscard]] OpcodeSequence dfs_extract(const ControlFlowGraph& cfg);

/// Graphviz rendering: one node per block labelled with its instructions,
/// one edge per successor.
[[nodiscard]] std::string to_dot(const ControlFlowGraph& cfg);
}  // namespace evmscan
