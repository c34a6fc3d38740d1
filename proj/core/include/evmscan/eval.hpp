// evmscan: bytecode-level vulnerability detection for EVM smart contracts
// Copyright 2026 The evmscan Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace evmscan
{
/// Binary confusion counts with class 1 (vulnerable) as positive.
struct ConfusionCounts
{
    std::size_t tp = 0;
    std::size_t fp = 0;
    std::size_t tn = 0;
    std::size_t fn = 0;

    [[nodiscard]] std::size_t total() const noexcept { return tp + fp + tn + fn; }

    friend bool operator==(const ConfusionCounts&, const ConfusionCounts&) = default;
};

/// Per-contract wall-clock seconds for each detection stage.
struct StageTiming
{
    double analysis = 0.0;  ///< disassembly, CFG and DFS
    double encode = 0.0;    ///< feature row construction
    double predict = 0.0;   ///< network inference

    [[nodiscard]] double total() const noexcept { return analysis + encode + predict; }
};

struct TimingReport
{
    std::size_t contracts = 0;
    StageTiming mean;
    double mean_total = 0.0;
};

struct EvaluationReport
{
    double accuracy = 0.0;
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    double weighted_f1 = 0.0;
    double tpr = 0.0;
    double fnr = 0.0;
    double tnr = 0.0;
    double fpr = 0.0;
    ConfusionCounts counts;
    std::optional<double> avg_detection_seconds;
    std::optional<TimingReport> timing;
};

/// Throws Error{length_mismatch} or Error{invalid_argument} for labels outside {0, 1}.
[[nodiscard]] ConfusionCounts confusion(
    std::span<const int> predicted, std::span<const int> truth);

/// Zero-denominator ratios are 0. weighted_f1 weights each class's F1 by its support in
/// the truth labels. Throws Error{empty_evaluation} when counts.total() == 0.
[[nodiscard]] EvaluationReport metrics(const ConfusionCounts& counts);

/// Verdicts of the three external analysers for one contract.
struct ToolVerdicts
{
    std::array<bool, 3> vulnerable{};
    std::array<std::string, 3> tools{"oyente", "mythril", "vandal"};
};

/// Positive iff at least two tools flag the contract.
[[nodiscard]] int majority_label(const ToolVerdicts& verdicts) noexcept;
/// Positive iff any tool flags the contract.
[[nodiscard]] int union_label(const ToolVerdicts& verdicts) noexcept;

struct SplitIndices
{
    std::vector<std::size_t> train;
    std::vector<std::size_t> test;
};

/// Seeded shuffle of 0..n-1; the first floor(ratio * n) go to train.
/// Throws Error{empty_dataset} or Error{invalid_argument}.
[[nodiscard]] SplitIndices split(std::size_t n, double ratio, uint64_t seed);

/// k (train, validation) folds over a seeded shuffle; fold sizes differ by at most one.
/// Throws Error{k_too_large} when k > n, Error{invalid_argument} when k < 2.
[[nodiscard]] std::vector<SplitIndices> kfold(std::size_t n, std::size_t k, uint64_t seed);

struct TaggedSample
{
    int label = 0;
    std::optional<std::string> category;
};

/// Requested sizes; unset means "everything available". Unset benign sizes split the
/// benign pool 80/20 when neither is given, or give the rest to the unset side.
struct HoldoutCounts
{
    std::optional<std::size_t> train_benign;
    std::optional<std::size_t> train_positive;
    std::optional<std::size_t> test_benign;
    std::optional<std::size_t> test_positive;
};

/// Train gets benign samples plus positives of every category except `held_out`; test gets
/// benign samples plus only `held_out` positives. Positives without a category are left
/// out of both. Throws Error{insufficient_samples}.
[[nodiscard]] SplitIndices holdout_class_split(std::span<const TaggedSample> samples,
    std::string_view held_out, const HoldoutCounts& counts, uint64_t seed);

/// Throws Error{empty_measurements}.
[[nodiscard]] TimingReport timing_report(std::span<const StageTiming> measurements);

[[nodiscard]] std::string report_to_json(const EvaluationReport& report);
[[nodiscard]] std::string report_to_table(const EvaluationReport& report);
}  // namespace evmscan
