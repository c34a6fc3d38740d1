// evmscan: bytecode-level vulnerability detection for EVM smart contracts
// Copyright 2026 The evmscan Authors.
// SPDX-License-Identifier: Apache-2.0

#include <evmscan/error.hpp>
#include <evmscan/eval.hpp>

#include <json.hpp>

#include <algorithm>
#include <cstdio>
#include <numeric>
#include <random>
#include <sstream>

namespace evmscan
{
namespace
{
double ratio(std::size_t num, std::size_t den) noexcept
{
    return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

double f1_of(double p, double r) noexcept
{
    return (p + r) == 0.0 ? 0.0 : 2.0 * p * r / (p + r);
}

std::vector<std::size_t> shuffled(std::size_t n, uint64_t seed)
{
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::mt19937_64 rng{seed};
    std::shuffle(idx.begin(), idx.end(), rng);
    return idx;
}
}  // namespace

ConfusionCounts confusion(std::span<const int> predicted, std::span<const int> truth)
{
    if (predicted.size() != truth.size())
        throw Error{ErrorKind::length_mismatch,
            std::to_string(predicted.size()) + " predictions for " +
                std::to_string(truth.size()) + " labels"};
    ConfusionCounts c;
    for (std::size_t i = 0; i < truth.size(); ++i)
    {
        const auto p = predicted[i];
        const auto t = truth[i];
        if ((p != 0 && p != 1) || (t != 0 && t != 1))
            throw Error{ErrorKind::invalid_argument, "labels must be 0 or 1"};
        if (t == 1)
            (p == 1 ? c.tp : c.fn) += 1;
        else
            (p == 1 ? c.fp : c.tn) += 1;
    }
    return c;
}

EvaluationReport metrics(const ConfusionCounts& counts)
{
    const auto total = counts.total();
    if (total == 0)
        throw Error{ErrorKind::empty_evaluation, "no evaluated samples"};

    EvaluationReport r;
    r.counts = counts;
    r.precision = ratio(counts.tp, counts.tp + counts.fp);
    r.recall = ratio(counts.tp, counts.tp + counts.fn);
    r.f1 = f1_of(r.precision, r.recall);
    r.accuracy = ratio(counts.tp + counts.tn, total);
    r.tpr = r.recall;
    r.fnr = ratio(counts.fn, counts.tp + counts.fn);
    r.tnr = ratio(counts.tn, counts.tn + counts.fp);
    r.fpr = ratio(counts.fp, counts.tn + counts.fp);

    // Negative class viewed as positive.
    const auto p0 = ratio(counts.tn, counts.tn + counts.fn);
    const auto r0 = ratio(counts.tn, counts.tn + counts.fp);
    const auto support1 = static_cast<double>(counts.tp + counts.fn);
    const auto support0 = static_cast<double>(counts.tn + counts.fp);
    r.weighted_f1 = (support1 * r.f1 + support0 * f1_of(p0, r0)) / static_cast<double>(total);
    return r;
}

int majority_label(const ToolVerdicts& verdicts) noexcept
{
    const auto n = std::count(verdicts.vulnerable.begin(), verdicts.vulnerable.end(), true);
    return n >= 2 ? 1 : 0;
}

int union_label(const ToolVerdicts& verdicts) noexcept
{
    return std::any_of(verdicts.vulnerable.begin(), verdicts.vulnerable.end(),
               [](bool v) { return v; })
               ? 1
               : 0;
}

SplitIndices split(std::size_t n, double train_ratio, uint64_t seed)
{
    if (n == 0)
        throw Error{ErrorKind::empty_dataset, "cannot split an empty dataset"};
    if (!(train_ratio > 0.0 && train_ratio < 1.0))
        throw Error{ErrorKind::invalid_argument, "split ratio must lie in (0, 1)"};

    const auto idx = shuffled(n, seed);
    const auto n_train = static_cast<std::size_t>(train_ratio * static_cast<double>(n));
    SplitIndices s;
    s.train.assign(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(n_train));
    s.test.assign(idx.begin() + static_cast<std::ptrdiff_t>(n_train), idx.end());
    return s;
}

std::vector<SplitIndices> kfold(std::size_t n, std::size_t k, uint64_t seed)
{
    if (k < 2)
        throw Error{ErrorKind::invalid_argument, "k-fold needs k >= 2"};
    if (k > n)
        throw Error{ErrorKind::k_too_large,
            "k = " + std::to_string(k) + " exceeds " + std::to_string(n) + " samples"};

    const auto idx = shuffled(n, seed);
    std::vector<SplitIndices> folds(k);
    std::size_t begin = 0;
    for (std::size_t f = 0; f < k; ++f)
    {
        const auto size = n / k + (f < n % k ? 1 : 0);
        for (std::size_t i = 0; i < n; ++i)
        {
            if (i >= begin && i < begin + size)
                folds[f].test.push_back(idx[i]);
            else
                folds[f].train.push_back(idx[i]);
        }
        begin += size;
    }
    return folds;
}

SplitIndices holdout_class_split(std::span<const TaggedSample> samples,
    std::string_view held_out, const HoldoutCounts& counts, uint64_t seed)
{
    std::vector<std::size_t> benign;
    std::vector<std::size_t> known;
    std::vector<std::size_t> unknown;
    for (const auto i : shuffled(samples.size(), seed))
    {
        const auto& s = samples[i];
        if (s.label == 0)
            benign.push_back(i);
        else if (s.category && *s.category == held_out)
            unknown.push_back(i);
        else if (s.category)
            known.push_back(i);
    }
    if (unknown.empty())
        throw Error{ErrorKind::insufficient_samples,
            "no positives tagged '" + std::string{held_out} + "'"};
    if (known.empty())
        throw Error{ErrorKind::insufficient_samples,
            "no positives outside '" + std::string{held_out} + "' to train on"};

    auto take = [](const std::vector<std::size_t>& pool, std::size_t offset, std::size_t n,
                    const char* what) {
        if (offset + n > pool.size())
            throw Error{ErrorKind::insufficient_samples,
                std::string{what} + ": requested " + std::to_string(n) + ", available " +
                    std::to_string(pool.size() - std::min(offset, pool.size()))};
        return std::vector<std::size_t>(pool.begin() + static_cast<std::ptrdiff_t>(offset),
            pool.begin() + static_cast<std::ptrdiff_t>(offset + n));
    };

    std::size_t train_benign = 0;
    std::size_t test_benign = 0;
    if (counts.train_benign && counts.test_benign)
    {
        train_benign = *counts.train_benign;
        test_benign = *counts.test_benign;
    }
    else if (counts.train_benign)
    {
        train_benign = *counts.train_benign;
        test_benign = benign.size() - std::min(train_benign, benign.size());
    }
    else if (counts.test_benign)
    {
        test_benign = *counts.test_benign;
        train_benign = benign.size() - std::min(test_benign, benign.size());
    }
    else
    {
        train_benign = benign.size() * 4 / 5;
        test_benign = benign.size() - train_benign;
    }

    SplitIndices out;
    out.train = take(benign, 0, train_benign, "train benign");
    const auto test_b = take(benign, train_benign, test_benign, "test benign");
    out.test = test_b;
    const auto train_p =
        take(known, 0, counts.train_positive.value_or(known.size()), "train positives");
    const auto test_p =
        take(unknown, 0, counts.test_positive.value_or(unknown.size()), "test positives");
    out.train.insert(out.train.end(), train_p.begin(), train_p.end());
    out.test.insert(out.test.end(), test_p.begin(), test_p.end());
    std::sort(out.train.begin(), out.train.end());
    std::sort(out.test.begin(), out.test.end());
    return out;
}

TimingReport timing_report(std::span<const StageTiming> measurements)
{
    if (measurements.empty())
        throw Error{ErrorKind::empty_measurements, "no timing measurements"};
    TimingReport r;
    r.contracts = measurements.size();
    for (const auto& m : measurements)
    {
        r.mean.analysis += m.analysis;
        r.mean.encode += m.encode;
        r.mean.predict += m.predict;
    }
    const auto n = static_cast<double>(measurements.size());
    r.mean.analysis /= n;
    r.mean.encode /= n;
    r.mean.predict /= n;
    r.mean_total = r.mean.total();
    return r;
}

std::string report_to_json(const EvaluationReport& report)
{
    nlohmann::ordered_json j;
    j["accuracy"] = report.accuracy;
    j["precision"] = report.precision;
    j["recall"] = report.recall;
    j["f1"] = report.f1;
    j["weighted_f1"] = report.weighted_f1;
    j["tpr"] = report.tpr;
    j["fnr"] = report.fnr;
    j["tnr"] = report.tnr;
    j["fpr"] = report.fpr;
    j["counts"] = {{"tp", report.counts.tp}, {"fp", report.counts.fp}, {"tn", report.counts.tn},
        {"fn", report.counts.fn}};
    j["avg_detection_seconds"] = report.avg_detection_seconds
                                     ? nlohmann::ordered_json(*report.avg_detection_seconds)
                                     : nlohmann::ordered_json(nullptr);
    if (report.timing)
    {
        j["timing"] = {{"contracts", report.timing->contracts},
            {"analysis", report.timing->mean.analysis}, {"encode", report.timing->mean.encode},
            {"predict", report.timing->mean.predict}, {"total", report.timing->mean_total}};
    }
    return j.dump(2) + "\n";
}

std::string report_to_table(const EvaluationReport& report)
{
    std::ostringstream out;
    char line[96];
    auto row = [&](const char* name, double v) {
        std::snprintf(line, sizeof(line), "%-22s %10.4f\n", name, v);
        out << line;
    };
    row("accuracy", report.accuracy);
    row("precision", report.precision);
    row("recall", report.recall);
    row("f1", report.f1);
    row("weighted_f1", report.weighted_f1);
    row("tpr", report.tpr);
    row("fnr", report.fnr);
    row("tnr", report.tnr);
    row("fpr", report.fpr);
    std::snprintf(line, sizeof(line), "%-22s %10zu %zu %zu %zu\n", "tp fp tn fn",
        report.counts.tp, report.counts.fp, report.counts.tn, report.counts.fn);
    out << line;
    if (report.timing)
    {
        row("t_analysis (s)", report.timing->mean.analysis);
        row("t_encode (s)", report.timing->mean.encode);
        row("t_predict (s)", report.timing->mean.predict);
        row("t_total (s)", report.timing->mean_total);
    }
    return out.str();
}
}  // namespace evmscan
