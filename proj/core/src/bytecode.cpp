// evmscan: bytecode-level vulnerability detection for EVM smart contracts
// Copyright 2026 The evmscan Authors.
// SPDX-License-Identifier: Apache-2.0

#include <evmscan/bytecode.hpp>
#include <evmscan/error.hpp>

namespace evmscan
{
namespace
{
int hex_digit(char c) noexcept
{
    if (c >= '0' && c <= '9')
        return c - '0';
    if (c >= 'a' && c <= 'f')
        return c - 'a' + 10;
    if (c >= 'A' && c <= 'F')
        return c - 'A' + 10;
    return -1;
}
}  // namespace

Bytecode parse_hex(std::string_view text)
{
    if (text.size() >= 2 && text[0] == '0' && (text[1] == 'x' || text[1] == 'X'))
        text.remove_prefix(2);

    if (text.size() % 2 != 0)
        throw Error{ErrorKind::malformed_hex,
            "odd number of hex digits (" + std::to_string(text.size()) + ")"};

    std::vector<uint8_t> bytes;
    bytes.reserve(text.size() / 2);
    for (std::size_t i = 0; i < text.size(); i += 2)
    {
        const int hi = hex_digit(text[i]);
        const int lo = hex_digit(text[i + 1]);
        if (hi < 0 || lo < 0)
        {
            const auto bad = hi < 0 ? i : i + 1;
            throw Error{ErrorKind::malformed_hex,
                "non-hex character at offset " + std::to_string(bad)};
        }
        bytes.push_back(static_cast<uint8_t>((hi << 4) | lo));
    }
    return Bytecode{std::move(bytes)};
}

std::string to_hex(std::span<const uint8_t> bytes)
{
    static constexpr char digits[] = "0123456789abcdef";
    std::string out;
    out.reserve(bytes.size() * 2);
    for (const auto b : bytes)
    {
        out.push_back(digits[b >> 4]);
        out.push_back(digits[b & 0x0f]);
    }
    return out;
}
}  // namespace evmscan
