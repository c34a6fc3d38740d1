// evmscan: bytecode-level vulnerability detection for EVM smart contracts
// Copyright 2026 The evmscan Authors.
// SPDX-License-Identifier: Apache-2.0

#include <evmscan/cfg.hpp>
#include <evmscan/error.hpp>

#include <algorithm>
#include <set>
#include <unordered_map>

namespace evmscan
{
namespace
{
constexpr std::size_t max_stack_depth = 1024;

/// nullopt is the unknown value.
using AbstractValue = std::optional<uint64_t>;

/// The known top portion of the stack; every slot below slots.front() is unknown.
struct AbstractStack
{
    std::vector<AbstractValue> slots;

    void push(AbstractValue v)
    {
        slots.push_back(v);
        if (slots.size() > max_stack_depth)
            slots.erase(slots.begin());
    }

    AbstractValue pop()
    {
        if (slots.empty())
            return std::nullopt;
        const auto v = slots.back();
        slots.pop_back();
        return v;
    }

    /// depth 0 is the top.
    [[nodiscard]] AbstractValue peek(std::size_t depth) const
    {
        if (depth >= slots.size())
            return std::nullopt;
        return slots[slots.size() - 1 - depth];
    }

    void swap_top(std::size_t depth)
    {
        if (depth >= slots.size())
            slots.insert(slots.begin(), depth + 1 - slots.size(), std::nullopt);
        std::swap(slots.back(), slots[slots.size() - 1 - depth]);
    }

    /// Drops unknown slots at the bottom so equal abstract states compare equal.
    void canonicalize()
    {
        const auto first_known =
            std::find_if(slots.begin(), slots.end(), [](const AbstractValue& v) {
                return v.has_value();
            });
        slots.erase(slots.begin(), first_known);
    }

    friend bool operator==(const AbstractStack&, const AbstractStack&) = default;
};

AbstractStack meet(const AbstractStack& a, const AbstractStack& b)
{
    const auto n = std::min(a.slots.size(), b.slots.size());
    AbstractStack out;
    out.slots.resize(n);
    for (std::size_t d = 0; d < n; ++d)
    {
        const auto x = a.peek(d);
        const auto y = b.peek(d);
        out.slots[n - 1 - d] = (x == y) ? x : std::nullopt;
    }
    out.canonicalize();
    return out;
}

AbstractValue push_value(const Instruction& ins)
{
    if (ins.truncated)
        return std::nullopt;
    uint64_t value = 0;
    for (std::size_t i = 0; i < ins.immediate.size(); ++i)
    {
        const auto b = ins.immediate[i];
        // Values wider than 64 bits can never be a code offset.
        if (ins.immediate.size() - i > 8 && b != 0)
            return std::nullopt;
        value = (value << 8) | b;
    }
    return value;
}

struct BlockEffect
{
    AbstractStack exit;
    /// The popped target when the block ends in JUMP/JUMPI.
    AbstractValue jump_target;
};

BlockEffect interpret(const BasicBlock& block, AbstractStack stack)
{
    BlockEffect effect;
    for (const auto& ins : block.instructions)
    {
        const auto& spec = ins.spec;
        const auto b = spec.byte_value;
        if (b == op::PUSH0)
        {
            stack.push(uint64_t{0});
        }
        else if (spec.is_push())
        {
            stack.push(push_value(ins));
        }
        else if (b >= op::DUP1 && b <= op::DUP16)
        {
            stack.push(stack.peek(static_cast<std::size_t>(b - op::DUP1)));
        }
        else if (b >= op::SWAP1 && b <= op::SWAP16)
        {
            stack.swap_top(static_cast<std::size_t>(b - op::SWAP1) + 1);
        }
        else if (spec.kind == OpcodeKind::jump || spec.kind == OpcodeKind::conditional_jump)
        {
            effect.jump_target = stack.pop();
            if (spec.kind == OpcodeKind::conditional_jump)
                stack.pop();
        }
        else
        {
            for (int i = 0; i < spec.stack_in; ++i)
                stack.pop();
            for (int i = 0; i < spec.stack_out; ++i)
                stack.push(std::nullopt);
        }
    }
    stack.canonicalize();
    effect.exit = std::move(stack);
    return effect;
}

bool ends_in_jump(const BasicBlock& block)
{
    if (block.instructions.empty())
        return false;
    const auto kind = block.last().spec.kind;
    return kind == OpcodeKind::jump || kind == OpcodeKind::conditional_jump;
}

bool falls_through(const BasicBlock& block)
{
    if (block.instructions.empty())
        return true;
    const auto& spec = block.last().spec;
    return spec.kind != OpcodeKind::jump && !spec.ends_execution();
}
}  // namespace

std::size_t ControlFlowGraph::edge_count() const noexcept
{
    std::size_t n = 0;
    for (const auto& [pc, block] : blocks)
        n += block.successors.size();
    return n;
}

std::vector<BasicBlock> split_blocks(const DisassemblyListing& listing)
{
    std::vector<BasicBlock> blocks;
    bool next_is_leader = true;
    for (const auto& ins : listing.instructions)
    {
        if (next_is_leader || ins.spec.kind == OpcodeKind::jumpdest)
        {
            if (blocks.empty() || !blocks.back().instructions.empty())
                blocks.emplace_back();
            blocks.back().start_pc = ins.pc;
        }
        blocks.back().instructions.push_back(ins);

        const auto kind = ins.spec.kind;
        next_is_leader = kind == OpcodeKind::jump || kind == OpcodeKind::conditional_jump ||
                         ins.spec.ends_execution();
    }
    return blocks;
}

ControlFlowGraph resolve_jumps(std::vector<BasicBlock> blocks)
{
    ControlFlowGraph cfg;
    if (blocks.empty())
        return cfg;

    const auto n = blocks.size();
    std::unordered_map<std::size_t, std::size_t> index_of;
    for (std::size_t i = 0; i < n; ++i)
        index_of.emplace(blocks[i].start_pc, i);

    auto valid_target = [&](AbstractValue target) -> std::optional<std::size_t> {
        if (!target)
            return std::nullopt;
        const auto it = index_of.find(static_cast<std::size_t>(*target));
        if (it == index_of.end() || !blocks[it->second].starts_with_jumpdest())
            return std::nullopt;
        return it->second;
    };

    std::vector<std::set<std::size_t>> succ(n);
    auto add_edges = [&](std::size_t i, const BlockEffect& effect) {
        if (ends_in_jump(blocks[i]))
        {
            if (const auto t = valid_target(effect.jump_target))
                succ[i].insert(*t);
            if (blocks[i].last().spec.kind == OpcodeKind::conditional_jump && i + 1 < n)
                succ[i].insert(i + 1);
        }
        else if (falls_through(blocks[i]) && i + 1 < n)
        {
            succ[i].insert(i + 1);
        }
    };

    // Phase 1: local resolution from an unknown entry stack.
    for (std::size_t i = 0; i < n; ++i)
        add_edges(i, interpret(blocks[i], AbstractStack{}));

    // Phase 2: propagate entry stacks from the entry block to a fixpoint.
    std::vector<std::optional<AbstractStack>> entry(n);
    entry[0] = AbstractStack{};
    std::set<std::size_t> worklist{0};
    while (!worklist.empty())
    {
        const auto i = *worklist.begin();
        worklist.erase(worklist.begin());

        const auto effect = interpret(blocks[i], *entry[i]);
        add_edges(i, effect);
        for (const auto s : succ[i])
        {
            auto next = entry[s] ? meet(*entry[s], effect.exit) : effect.exit;
            if (!entry[s] || next != *entry[s])
            {
                entry[s] = std::move(next);
                worklist.insert(s);
            }
        }
    }

    for (std::size_t i = 0; i < n; ++i)
    {
        auto& block = blocks[i];
        if (ends_in_jump(block))
        {
            const auto effect = interpret(block, entry[i].value_or(AbstractStack{}));
            block.unresolved_jump = !valid_target(effect.jump_target).has_value();
            if (block.unresolved_jump)
                ++cfg.unresolved_count;
        }
        block.successors.clear();
        for (const auto s : succ[i])
            block.successors.push_back(blocks[s].start_pc);
    }

    cfg.entry = blocks.front().start_pc;
    for (auto& block : blocks)
    {
        const auto pc = block.start_pc;
        cfg.blocks.emplace(pc, std::move(block));
    }
    return cfg;
}

OpcodeSequence dfs_extract(const ControlFlowGraph& cfg)
{
    if (cfg.blocks.empty())
        throw Error{ErrorKind::empty_graph, "control flow graph has no blocks"};

    OpcodeSequence out;
    std::set<std::size_t> visited;
    std::vector<std::size_t> stack{cfg.entry};
    while (!stack.empty())
    {
        const auto pc = stack.back();
        stack.pop_back();
        if (!visited.insert(pc).second)
            continue;

        const auto& block = cfg.blocks.at(pc);
        for (const auto& ins : block.instructions)
            out.mnemonics.emplace_back(ins.spec.mnemonic);
        for (const auto s : block.successors)
        {
            if (!visited.contains(s))
                stack.push_back(s);
        }
    }
    return out;
}

std::string to_dot(const ControlFlowGraph& cfg)
{
    auto node = [](std::size_t pc) { return "\"" + format_pc(pc) + "\""; };

    std::string out = "digraph cfg {\n";
    for (const auto& [pc, block] : cfg.blocks)
    {
        out += "  " + node(pc) + " [shape=box, label=\"";
        for (const auto& ins : block.instructions)
            out += render(ins) + "\\l";
        out += "\"];\n";
    }
    for (const auto& [pc, block] : cfg.blocks)
    {
        for (const auto s : block.successors)
            out += "  " + node(pc) + " -> " + node(s) + ";\n";
    }
    out += "}\n";
    return out;
}
}  // namespace evmscan
