// evmscan: bytecode-level vulnerability detection for EVM smart contracts
// Copyright 2026 The evmscan Authors.
// SPDX-License-Identifier: Apache-2.0

#include <evmscan/disassembler.hpp>

#include <algorithm>

namespace evmscan
{
DisassemblyListing disassemble(const Bytecode& code)
{
    const auto bytes = code.bytes();
    DisassemblyListing listing;
    listing.total_bytes = bytes.size();
    listing.instructions.reserve(bytes.size());

    std::size_t pc = 0;
    while (pc < bytes.size())
    {
        Instruction ins;
        ins.pc = pc;
        ins.spec = lookup_opcode(bytes[pc]);
        const std::size_t want = ins.spec.immediate_len;
        const std::size_t available = bytes.size() - pc - 1;
        if (want > available)
        {
            ins.truncated = true;
            ins.length = 1 + available;
            listing.instructions.push_back(std::move(ins));
            break;
        }
        ins.immediate.assign(bytes.begin() + static_cast<std::ptrdiff_t>(pc + 1),
            bytes.begin() + static_cast<std::ptrdiff_t>(pc + 1 + want));
        ins.length = 1 + want;
        pc += ins.length;
        listing.instructions.push_back(std::move(ins));
    }
    return listing;
}

std::string format_pc(std::size_t pc)
{
    static constexpr char upper[] = "0123456789ABCDEF";
    std::string digits;
    do
    {
        digits.push_back(upper[pc & 0xf]);
        pc >>= 4;
    } while (pc != 0);
    std::reverse(digits.begin(), digits.end());
    return "0x" + digits;
}

std::string render(const Instruction& instruction)
{
    std::string line = format_pc(instruction.pc) + " " + std::string{instruction.spec.mnemonic};
    if (!instruction.immediate.empty())
        line += " 0x" + to_hex(instruction.immediate);
    return line;
}

std::string render(const DisassemblyListing& listing)
{
    std::string out;
    for (const auto& ins : listing.instructions)
    {
        out += render(ins);
        out += '\n';
    }
    return out;
}

std::vector<uint8_t> reassemble(const DisassemblyListing& listing)
{
    std::vector<uint8_t> out;
    out.reserve(listing.total_bytes);
    for (const auto& ins : listing.instructions)
    {
        out.push_back(ins.spec.byte_value);
        out.insert(out.end(), ins.immediate.begin(), ins.immediate.end());
    }
    return out;
}
}  // namespace evmscan
