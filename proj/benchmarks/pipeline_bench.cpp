// evmscan: bytecode-level vulnerability detection for EVM smart contracts
// Copyright 2026 The evmscan Authors.
// SPDX-License-Identifier: Apache-2.0

#include "synthetic.hpp"

#include <evmscan/cfg.hpp>
#include <evmscan/disassembler.hpp>
#include <evmscan/features.hpp>
#include <evmscan/model.hpp>
#include <evmscan/pipeline.hpp>

#include <benchmark/benchmark.h>

#include <random>

using namespace evmscan;

namespace
{
Bytecode contract_of_size(std::size_t min_bytes)
{
    std::mt19937_64 rng{1};
    std::vector<uint8_t> bytes;
    while (bytes.size() < min_bytes)
    {
        const auto c = test::synthetic_contract(rng, true, "reentrancy");
        bytes.insert(bytes.end(), c.begin(), c.end());
    }
    return Bytecode{std::move(bytes)};
}

void BM_disassemble(benchmark::State& state)
{
    std::mt19937_64 rng{7};
    const Bytecode code{test::random_program(rng, static_cast<std::size_t>(state.range(0)))};
    for (auto _ : state)
        benchmark::DoNotOptimize(disassemble(code));
    state.SetBytesProcessed(static_cast<int64_t>(state.iterations() * code.size()));
}
BENCHMARK(BM_disassemble)->Arg(512)->Arg(24576);

void BM_build_cfg(benchmark::State& state)
{
    const auto listing = disassemble(contract_of_size(static_cast<std::size_t>(state.range(0))));
    for (auto _ : state)
        benchmark::DoNotOptimize(build_cfg(listing));
    state.counters["instructions"] = static_cast<double>(listing.instructions.size());
}
BENCHMARK(BM_build_cfg)->Arg(1024)->Arg(16384);

void BM_analyze(benchmark::State& state)
{
    const auto code = contract_of_size(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state)
        benchmark::DoNotOptimize(analyze(code));
}
BENCHMARK(BM_analyze)->Arg(1024)->Arg(16384);

void BM_featurize(benchmark::State& state)
{
    const auto corpus = test::synthetic_corpus(
        static_cast<std::size_t>(state.range(0)), 3, test::synthetic_categories());
    const auto sequences = analyze_corpus(corpus);
    const EncoderSpec encoder;
    for (auto _ : state)
        benchmark::DoNotOptimize(build_feature_matrix(sequences, std::nullopt, encoder));
    state.SetItemsProcessed(static_cast<int64_t>(state.iterations()) * state.range(0));
}
BENCHMARK(BM_featurize)->Arg(100)->Arg(1000);

void BM_train_step(benchmark::State& state)
{
    const auto width = static_cast<std::size_t>(state.range(0));
    const auto blobs = test::gaussian_blobs(64, 256, 1.0, 5);
    auto params = init_params({256, width, 5, 2}, 9);
    const TrainingConfig config;
    for (auto _ : state)
    {
        const auto step = backward(params, blobs.features, blobs.labels, config);
        sgd_momentum_step(params, step.grads, config.learning_rate, config.momentum);
        benchmark::DoNotOptimize(step.loss.total);
    }
    state.SetItemsProcessed(static_cast<int64_t>(state.iterations()) * 64);
}
BENCHMARK(BM_train_step)->Arg(64)->Arg(512)->Unit(benchmark::kMillisecond);

void BM_predict(benchmark::State& state)
{
    const auto blobs = test::gaussian_blobs(static_cast<std::size_t>(state.range(0)), 256, 1.0, 5);
    const auto params = init_params({256, 512, 5, 2}, 9);
    for (auto _ : state)
        benchmark::DoNotOptimize(predict(params, blobs.features));
    state.SetItemsProcessed(static_cast<int64_t>(state.iterations()) * state.range(0));
}
BENCHMARK(BM_predict)->Arg(1)->Arg(256);
}  // namespace

BENCHMARK_MAIN();
