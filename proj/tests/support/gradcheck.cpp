// evmscan: bytecode-level vulnerability detection for EVM smart contracts
// Copyright 2026 The evmscan Authors.
// SPDX-License-Identifier: Apache-2.0

#include "gradcheck.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace evmscan::test
{
std::vector<Matrix> naive_preactivations(const ModelParameters& params, const Matrix& x)
{
    std::vector<Matrix> pre;
    Matrix a = x;
    for (std::size_t l = 0; l < params.layers.size(); ++l)
    {
        const auto& w = params.layers[l].weight;
        const auto& b = params.layers[l].bias;
        Matrix z{a.rows(), w.cols()};
        for (std::size_t r = 0; r < a.rows(); ++r)
            for (std::size_t c = 0; c < w.cols(); ++c)
            {
                double s = b[c];
                for (std::size_t k = 0; k < w.rows(); ++k)
                    s += a(r, k) * w(k, c);
                z(r, c) = s;
            }
        pre.push_back(z);
        a = z;
        for (auto& v : a.data())
            v = std::max(v, 0.0);
    }
    return pre;
}

double min_hidden_margin(const ModelParameters& params, const Matrix& x)
{
    const auto pre = naive_preactivations(params, x);
    double m = std::numeric_limits<double>::infinity();
    for (std::size_t l = 0; l + 1 < pre.size(); ++l)
        for (const auto v : pre[l].data())
            m = std::min(m, std::abs(v));
    return m;
}

GradCheckResult gradient_check(const ModelParameters& params, const Matrix& x,
    std::span<const int> labels, const TrainingConfig& config, const BatchPairSets& pairs,
    double step)
{
    const auto analytic = backward(params, x, labels, config, &pairs).grads;
    auto loss_at = [&](const ModelParameters& p) {
        const auto out = forward(p, x);
        return combined_loss(out.logits, out.embeddings, labels, config, &pairs).total;
    };

    GradCheckResult res;
    res.positive_pairs = pairs.positive_count();
    res.negative_pairs = pairs.negative_count();
    auto probe = params;
    auto check = [&](double& slot, double a) {
        const auto saved = slot;
        auto at = [&](double offset) {
            slot = saved + offset;
            return loss_at(probe);
        };
        // Five-point central stencil: O(h^4) truncation lets h stay large enough that
        // cancellation in the loss difference does not swamp small gradients.
        const auto near = at(step) - at(-step);
        const auto far = at(2.0 * step) - at(-2.0 * step);
        slot = saved;
        const auto numeric = (8.0 * near - far) / (12.0 * step);
        const auto denom = std::max({std::abs(a), std::abs(numeric), 1e-6});
        res.max_relative_error = std::max(res.max_relative_error, std::abs(a - numeric) / denom);
        ++res.parameters;
    };
    for (std::size_t l = 0; l < probe.layers.size(); ++l)
    {
        auto& w = probe.layers[l].weight.data();
        for (std::size_t k = 0; k < w.size(); ++k)
            check(w[k], analytic.weight[l].data()[k]);
        auto& b = probe.layers[l].bias;
        for (std::size_t k = 0; k < b.size(); ++k)
            check(b[k], analytic.bias[l][k]);
    }
    return res;
}

TinyProblem tiny_problem(std::mt19937_64& rng, double min_margin)
{
    std::uniform_int_distribution<std::size_t> in_dist{2, 6};
    std::uniform_int_distribution<std::size_t> width_dist{3, 6};
    std::uniform_int_distribution<std::size_t> batch_dist{4, 8};
    std::normal_distribution<double> normal{0.0, 1.0};
    std::uniform_real_distribution<double> bias_dist{-0.1, 0.1};

    for (;;)
    {
        NetworkConfig net{in_dist(rng), width_dist(rng), 5, 2};
        TinyProblem p;
        p.params = init_params(net, rng());
        for (auto& layer : p.params.layers)
            for (auto& b : layer.bias)
                b = bias_dist(rng);

        const auto n = batch_dist(rng);
        p.x = Matrix{n, net.input_dim};
        for (auto& v : p.x.data())
            v = normal(rng);
        p.labels.resize(n);
        for (std::size_t i = 0; i < n; ++i)
            p.labels[i] = static_cast<int>(rng() % 2);
        p.labels[0] = 0;
        p.labels[1] = 1;

        if (min_hidden_margin(p.params, p.x) < min_margin)
            continue;
        // Keep embeddings away from zero norm where cosine is not differentiable.
        const auto emb = forward(p.params, p.x).embeddings;
        bool dead = false;
        for (std::size_t r = 0; r < emb.rows(); ++r)
        {
            const auto row = emb.row(r);
            dead = dead || std::all_of(row.begin(), row.end(), [](double v) { return v == 0.0; });
        }
        if (!dead)
            return p;
    }
}
}  // namespace evmscan::test
