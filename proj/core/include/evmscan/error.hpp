// evmscan: bytecode-level vulnerability detection for EVM smart contracts
// Copyright 2026 The evmscan Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace evmscan
{
/// Every failure the library reports. The CLI maps these onto exit codes.
enum class ErrorKind
{
    malformed_hex,
    empty_graph,
    empty_corpus,
    label_length_mismatch,
    unknown_mnemonic,
    dimension_mismatch,
    single_class_dataset,
    empty_dataset,
    length_mismatch,
    empty_evaluation,
    k_too_large,
    insufficient_samples,
    empty_measurements,
    file_not_found,
    parse_error,
    transport,
    rpc_error,
    empty_code,
    missing_verdicts,
    missing_labels,
    vocabulary_mismatch,
    invalid_argument,
    io_error,
};

[[nodiscard]] std::string_view to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error
{
public:
    Error(ErrorKind kind, const std::string& message)
      : std::runtime_error{std::string{to_string(kind)} + ": " + message}, m_kind{kind}
    {}

    [[nodiscard]] ErrorKind kind() const noexcept { return m_kind; }

private:
    ErrorKind m_kind;
};
}  // namespace evmscan
