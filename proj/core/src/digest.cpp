// evmscan: bytecode-level vulnerability detection for EVM smart contracts
// Copyright 2026 The evmscan Authors.
// SPDX-License-Identifier: Apache-2.0

#include <evmscan/bytecode.hpp>
#include <evmscan/digest.hpp>
#include <evmscan/error.hpp>

#include <openssl/evp.h>

#include <array>
#include <memory>

namespace evmscan
{
std::string sha256_hex(std::string_view data)
{
    std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx{EVP_MD_CTX_new(), &EVP_MD_CTX_free};
    std::array<uint8_t, EVP_MAX_MD_SIZE> digest{};
    unsigned int len = 0;
    if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1 ||
        EVP_DigestUpdate(ctx.get(), data.data(), data.size()) != 1 ||
        EVP_DigestFinal_ex(ctx.get(), digest.data(), &len) != 1)
        throw Error{ErrorKind::io_error, "SHA-256 computation failed"};
    return to_hex({digest.data(), len});
}
}  // namespace evmscan
