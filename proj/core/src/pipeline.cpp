// evmscan: bytecode-level vulnerability detection for EVM smart contracts
// Copyright 2026 The evmscan Authors.
// SPDX-License-Identifier: Apache-2.0

#include <evmscan/pipeline.hpp>

#include <atomic>
#include <chrono>
#include <exception>
#include <thread>

namespace evmscan
{
namespace
{
using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start)
{
    return std::chrono::duration<double>(Clock::now() - start).count();
}
}  // namespace

OpcodeSequence analyze(const Bytecode& code)
{
    auto seq = dfs_extract(build_cfg(disassemble(code)));
    seq.source_id = code.source_id();
    return seq;
}

void parallel_for(std::size_t n, std::size_t jobs, const std::function<void(std::size_t)>& task)
{
    jobs = std::min(std::max<std::size_t>(jobs, 1), n);
    if (jobs <= 1)
    {
        for (std::size_t i = 0; i < n; ++i)
            task(i);
        return;
    }

    std::vector<std::exception_ptr> errors(n);
    std::atomic<std::size_t> next{0};
    {
        std::vector<std::jthread> pool;
        for (std::size_t w = 0; w < jobs; ++w)
        {
            pool.emplace_back([&] {
                for (auto i = next++; i < n; i = next++)
                {
                    try
                    {
                        task(i);
                    }
                    catch (...)
                    {
                        errors[i] = std::current_exception();
                    }
                }
            });
        }
    }
    for (const auto& e : errors)
    {
        if (e)
            std::rethrow_exception(e);
    }
}

std::vector<OpcodeSequence> analyze_corpus(std::span<const ContractRecord> corpus, std::size_t jobs)
{
    std::vector<OpcodeSequence> out(corpus.size());
    parallel_for(corpus.size(), jobs, [&](std::size_t i) {
        out[i] = analyze(corpus[i].bytecode);
        out[i].source_id = corpus[i].source_id;
    });
    return out;
}

std::vector<int> corpus_labels(std::span<const ContractRecord> corpus)
{
    std::vector<int> labels;
    labels.reserve(corpus.size());
    for (const auto& r : corpus)
    {
        if (!r.label)
            throw Error{ErrorKind::missing_labels, "record '" + r.source_id + "' has no label"};
        labels.push_back(*r.label);
    }
    return labels;
}

std::vector<Detection> detect(
    const Detector& detector, std::span<const ContractRecord> corpus, std::size_t jobs)
{
    std::vector<Detection> out(corpus.size());
    parallel_for(corpus.size(), jobs, [&](std::size_t i) {
        auto& d = out[i];
        d.id = corpus[i].source_id;

        auto start = Clock::now();
        const auto seq = analyze(corpus[i].bytecode);
        d.timing.analysis = seconds_since(start);

        start = Clock::now();
        const auto row = encode_rows(std::span{&seq, 1}, detector.vocabulary, detector.encoder);
        d.timing.encode = seconds_since(start);

        start = Clock::now();
        const auto res = predict(detector.params, row);
        d.timing.predict = seconds_since(start);

        d.label = res.labels.front();
        d.probability = res.probabilities(0, 1);
    });
    return out;
}

HoldoutOutcome run_holdout(
    std::span<const ContractRecord> corpus, const HoldoutExperiment& experiment, std::size_t jobs)
{
    const auto labels = corpus_labels(corpus);
    std::vector<TaggedSample> tagged;
    tagged.reserve(corpus.size());
    for (std::size_t i = 0; i < corpus.size(); ++i)
        tagged.push_back({labels[i], corpus[i].category});

    HoldoutOutcome out;
    out.split = holdout_class_split(
        tagged, experiment.held_out, experiment.counts, experiment.training.seed);

    const auto sequences = analyze_corpus(corpus, jobs);
    std::vector<OpcodeSequence> train_seqs;
    std::vector<int> train_labels;
    for (const auto i : out.split.train)
    {
        train_seqs.push_back(sequences[i]);
        train_labels.push_back(labels[i]);
    }
    std::vector<OpcodeSequence> test_seqs;
    std::vector<int> test_labels;
    for (const auto i : out.split.test)
    {
        test_seqs.push_back(sequences[i]);
        test_labels.push_back(labels[i]);
    }

    auto [vocab, train_matrix] =
        build_feature_matrix(train_seqs, train_labels, experiment.encoder);
    auto network = experiment.network;
    network.input_dim = 0;
    auto trained =
        train(train_matrix.values, train_labels, network, experiment.training);

    const auto test_rows = encode_rows(test_seqs, vocab, experiment.encoder);
    const auto pred = predict(trained.params, test_rows);
    out.report = metrics(confusion(pred.labels, test_labels));
    out.detector = {std::move(trained.params), std::move(vocab), experiment.encoder};
    return out;
}
}  // namespace evmscan
