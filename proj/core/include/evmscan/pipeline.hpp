// evmscan: bytecode-level vulnerability detection for EVM smart contracts
// Copyright 2026 The evmscan Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <evmscan/cfg.hpp>
#include <evmscan/eval.hpp>
#include <evmscan/features.hpp>
#include <evmscan/ingestion.hpp>
#include <evmscan/model.hpp>

#include <functional>
#include <span>
#include <string>
#include <vector>

namespace evmscan
{
/// Disassembly, CFG recovery and DFS flattening of one contract.
/// Throws Error{empty_graph} for empty bytecode.
[[nodiscard]] OpcodeSequence analyze(const Bytecode& code);

/// Runs `task(i)` for i in [0, n) on up to `jobs` threads. The first exception thrown
/// (lowest index) is rethrown after all workers finish.
void parallel_for(std::size_t n, std::size_t jobs, const std::function<void(std::size_t)>& task);

/// analyze() for every record, in input order.
[[nodiscard]] std::vector<OpcodeSequence> analyze_corpus(
    std::span<const ContractRecord> corpus, std::size_t jobs = 1);

/// Labels of every record; throws Error{missing_labels} if any is absent.
[[nodiscard]] std::vector<int> corpus_labels(std::span<const ContractRecord> corpus);

struct Detection
{
    std::string id;
    int label = 0;
    /// Probability of the vulnerable class.
    double probability = 0.0;
    StageTiming timing;
};

/// The frozen artifacts needed to score new contracts.
struct Detector
{
    ModelParameters params;
    Vocabulary vocabulary;
    EncoderSpec encoder;
};

/// Scores every record with per-stage wall-clock timings, in input order.
[[nodiscard]] std::vector<Detection> detect(
    const Detector& detector, std::span<const ContractRecord> corpus, std::size_t jobs = 1);

struct HoldoutExperiment
{
    std::string held_out;
    HoldoutCounts counts;
    EncoderSpec encoder;
    NetworkConfig network;
    TrainingConfig training;
};

struct HoldoutOutcome
{
    SplitIndices split;
    EvaluationReport report;
    Detector detector;
};

/// Trains on the benign pool plus every category except `held_out`, then evaluates on
/// benign samples and `held_out` positives. The vocabulary is built from the training
/// side only. Records need labels. Throws Error{insufficient_samples} and whatever
/// training throws.
[[nodiscard]] HoldoutOutcome run_holdout(
    std::span<const ContractRecord> corpus, const HoldoutExperiment& experiment, std::size_t jobs = 1);
}  // namespace evmscan
