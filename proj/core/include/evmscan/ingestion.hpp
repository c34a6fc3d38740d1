// evmscan: bytecode-level vulnerability detection for EVM smart contracts
// Copyright 2026 The evmscan Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <evmscan/bytecode.hpp>
#include <evmscan/error.hpp>
#include <evmscan/eval.hpp>

#include <chrono>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace evmscan
{
struct ContractRecord
{
    std::string source_id;
    Bytecode bytecode;
    std::optional<int> label;
    /// Vulnerability type tag, e.g. "reentrancy".
    std::optional<std::string> category;
    std::optional<ToolVerdicts> verdicts;
};

struct LineError
{
    std::size_t line = 0;
    std::string message;
};

struct LoadResult
{
    std::vector<ContractRecord> records;
    std::vector<LineError> errors;
};

/// One JSON object per line with "id" and "bytecode", optionally "label" (0/1),
/// "category" and "verdicts" ([bool, bool, bool]). Blank lines are skipped. Bad lines are
/// collected with their 1-based line numbers. Throws Error{file_not_found}, or
/// Error{parse_error} when every non-blank line fails.
[[nodiscard]] LoadResult load_jsonl(const std::filesystem::path& path);

/// As load_jsonl, from in-memory text.
[[nodiscard]] LoadResult parse_jsonl(std::string_view text);

/// The canonical single-line JSON for a record, as load_jsonl accepts it.
[[nodiscard]] std::string to_jsonl_line(const ContractRecord& record);

struct DedupResult
{
    std::vector<ContractRecord> records;
    std::size_t removed = 0;
};

/// Drops records whose bytecode exactly equals an earlier record's; order is kept.
[[nodiscard]] DedupResult dedup(std::vector<ContractRecord> corpus);

enum class LabelMode
{
    given,
    majority,
    union_,
};

[[nodiscard]] std::string_view to_string(LabelMode mode) noexcept;
/// Accepts "given", "majority", "union". Throws Error{invalid_argument}.
[[nodiscard]] LabelMode parse_label_mode(std::string_view name);

/// Sets every record's label from its verdicts (majority/union) or checks that it already
/// has one (given). Throws Error{missing_verdicts} or Error{missing_labels} naming the
/// offending records.
[[nodiscard]] std::vector<ContractRecord> attach_labels(
    std::vector<ContractRecord> corpus, LabelMode mode);

struct RpcOptions
{
    std::chrono::milliseconds timeout{10'000};
};

/// Issues eth_getCode(address, "latest") over JSON-RPC 2.0 / HTTP POST.
/// Throws Error{invalid_argument} for a malformed address, Error{transport},
/// Error{rpc_error}, Error{empty_code} or Error{malformed_hex}.
[[nodiscard]] Bytecode fetch_code(
    std::string_view endpoint_url, std::string_view address, const RpcOptions& options = {});

using FetchOutcome = std::variant<Bytecode, Error>;

/// fetch_code for many addresses with at most `max_in_flight` concurrent requests.
/// Results are returned in request order.
[[nodiscard]] std::vector<FetchOutcome> fetch_codes(std::string_view endpoint_url,
    std::span<const std::string> addresses, std::size_t max_in_flight = 8,
    const RpcOptions& options = {});

/// The endpoint named by EVMSCAN_RPC_URL, if set and non-empty.
[[nodiscard]] std::optional<std::string> default_rpc_endpoint();
}  // namespace evmscan
