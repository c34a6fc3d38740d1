// evmscan: bytecode-level vulnerability detection for EVM smart contracts
// Copyright 2026 The evmscan Authors.
// SPDX-License-Identifier: Apache-2.0

#include <evmscan/error.hpp>
#include <evmscan/model.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <ostream>
#include <random>

namespace evmscan
{
void NetworkConfig::validate() const
{
    if (input_dim == 0 || hidden_width == 0 || output_classes == 0)
        throw Error{ErrorKind::invalid_argument, "network widths must be positive"};
    if (hidden_layers != 5)
        throw Error{ErrorKind::invalid_argument, "the network has exactly 5 hidden layers"};
    if (output_classes != 2)
        throw Error{ErrorKind::invalid_argument, "the classifier has exactly 2 output classes"};
}

void TrainingConfig::validate() const
{
    if (alpha < 0.0)
        throw Error{ErrorKind::invalid_argument, "alpha must be non-negative"};
    if (!(lambda1 > 0.0) || !(lambda2 > 0.0))
        throw Error{ErrorKind::invalid_argument, "lambda1 and lambda2 must be positive"};
    if (!(omega > 0.0 && omega < 1.0))
        throw Error{ErrorKind::invalid_argument, "omega must lie in (0, 1) for cosine similarity"};
    if (batch_size < 2)
        throw Error{ErrorKind::invalid_argument, "batch_size must be at least 2"};
    if (!(learning_rate > 0.0) || momentum < 0.0 || !(momentum < 1.0))
        throw Error{ErrorKind::invalid_argument, "learning rate must be > 0, momentum in [0, 1)"};
    if (std::isnan(mining_margin))
        throw Error{ErrorKind::invalid_argument, "mining_margin must not be NaN"};
}

ModelParameters init_params(const NetworkConfig& network, uint64_t seed)
{
    network.validate();
    ModelParameters params;
    params.network = network;

    std::mt19937_64 rng{seed};
    auto fan_in = network.input_dim;
    for (std::size_t l = 0; l <= network.hidden_layers; ++l)
    {
        const auto fan_out = (l == network.hidden_layers) ? network.output_classes
                                                          : network.hidden_width;
        DenseLayer layer;
        layer.weight = Matrix{fan_in, fan_out};
        layer.weight_velocity = Matrix{fan_in, fan_out};
        layer.bias.assign(fan_out, 0.0);
        layer.bias_velocity.assign(fan_out, 0.0);

        std::normal_distribution<double> dist{0.0, std::sqrt(2.0 / static_cast<double>(fan_in))};
        for (auto& w : layer.weight.data())
            w = dist(rng);

        params.layers.push_back(std::move(layer));
        fan_in = fan_out;
    }
    return params;
}

namespace
{
/// Activations kept for the backward pass. post[0] is the input; post[l + 1] is the
/// ReLU output of hidden layer l; pre.back() holds the logits.
struct ForwardTrace
{
    std::vector<Matrix> pre;
    std::vector<Matrix> post;

    [[nodiscard]] const Matrix& logits() const { return pre.back(); }
    [[nodiscard]] const Matrix& embeddings() const { return post.back(); }
};

void add_bias(Matrix& z, std::span<const double> bias)
{
    for (std::size_t r = 0; r < z.rows(); ++r)
    {
        auto row = z.row(r);
        for (std::size_t c = 0; c < row.size(); ++c)
            row[c] += bias[c];
    }
}

ForwardTrace forward_trace(const ModelParameters& params, const Matrix& batch)
{
    if (batch.cols() != params.network.input_dim)
        throw Error{ErrorKind::dimension_mismatch,
            "row width " + std::to_string(batch.cols()) + " != input_dim " +
                std::to_string(params.network.input_dim)};

    ForwardTrace trace;
    trace.post.push_back(batch);
    for (std::size_t l = 0; l < params.layers.size(); ++l)
    {
        const auto& layer = params.layers[l];
        Matrix z{batch.rows(), layer.weight.cols()};
        gemm(Transpose::no, Transpose::no, 1.0, trace.post.back(), layer.weight, 0.0, z);
        add_bias(z, layer.bias);
        if (l + 1 < params.layers.size())
        {
            Matrix a = z;
            for (auto& x : a.data())
                x = std::max(x, 0.0);
            trace.post.push_back(std::move(a));
        }
        trace.pre.push_back(std::move(z));
    }
    return trace;
}

std::vector<double> softmax_row(std::span<const double> logits)
{
    const auto mx = *std::max_element(logits.begin(), logits.end());
    std::vector<double> p(logits.size());
    double sum = 0.0;
    for (std::size_t c = 0; c < logits.size(); ++c)
    {
        p[c] = std::exp(logits[c] - mx);
        sum += p[c];
    }
    for (auto& x : p)
        x /= sum;
    return p;
}

/// d softplus / dx.
double logistic(double x) noexcept
{
    if (x >= 0.0)
        return 1.0 / (1.0 + std::exp(-x));
    const auto e = std::exp(x);
    return e / (1.0 + e);
}

void check_labels(std::span<const int> labels, std::size_t rows)
{
    if (labels.size() != rows)
        throw Error{ErrorKind::label_length_mismatch,
            std::to_string(labels.size()) + " labels for " + std::to_string(rows) + " rows"};
    for (const auto y : labels)
    {
        if (y != 0 && y != 1)
            throw Error{ErrorKind::invalid_argument, "labels must be 0 or 1"};
    }
}

std::vector<double> row_norms(const Matrix& m)
{
    std::vector<double> norms(m.rows());
    for (std::size_t r = 0; r < m.rows(); ++r)
    {
        const auto row = m.row(r);
        norms[r] = std::sqrt(std::inner_product(row.begin(), row.end(), row.begin(), 0.0));
    }
    return norms;
}
}  // namespace

ForwardOutput forward(const ModelParameters& params, const Matrix& batch)
{
    auto trace = forward_trace(params, batch);
    return {std::move(trace.post.back()), std::move(trace.pre.back())};
}

RowOutput forward(const ModelParameters& params, std::span<const double> row)
{
    Matrix batch{1, row.size()};
    std::copy(row.begin(), row.end(), batch.row(0).begin());
    auto out = forward(params, batch);
    return {std::move(out.embeddings.data()), std::move(out.logits.data())};
}

double cosine_similarity(std::span<const double> a, std::span<const double> b)
{
    const auto dot = std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
    const auto na = std::sqrt(std::inner_product(a.begin(), a.end(), a.begin(), 0.0));
    const auto nb = std::sqrt(std::inner_product(b.begin(), b.end(), b.begin(), 0.0));
    if (na == 0.0 || nb == 0.0)
        return 0.0;
    return dot / (na * nb);
}

Matrix cosine_matrix(const Matrix& embeddings)
{
    const auto n = embeddings.rows();
    Matrix s{n, n};
    for (std::size_t i = 0; i < n; ++i)
    {
        for (std::size_t j = i; j < n; ++j)
        {
            const auto v = cosine_similarity(embeddings.row(i), embeddings.row(j));
            s(i, j) = v;
            s(j, i) = v;
        }
    }
    return s;
}

std::size_t BatchPairSets::positive_count() const noexcept
{
    std::size_t n = 0;
    for (const auto& p : positives)
        n += p.size();
    return n;
}

std::size_t BatchPairSets::negative_count() const noexcept
{
    std::size_t n = 0;
    for (const auto& p : negatives)
        n += p.size();
    return n;
}

BatchPairSets mine_pairs_from_similarity(
    const Matrix& similarity, std::span<const int> labels, double margin)
{
    const auto n = labels.size();
    if (similarity.rows() != n || similarity.cols() != n)
        throw Error{ErrorKind::dimension_mismatch, "similarity matrix does not match labels"};

    BatchPairSets sets;
    sets.positives.resize(n);
    sets.negatives.resize(n);
    for (std::size_t i = 0; i < n; ++i)
    {
        double hardest_negative = -std::numeric_limits<double>::infinity();
        double hardest_positive = std::numeric_limits<double>::infinity();
        bool has_pos = false;
        bool has_neg = false;
        for (std::size_t k = 0; k < n; ++k)
        {
            if (k == i)
                continue;
            if (labels[k] == labels[i])
            {
                has_pos = true;
                hardest_positive = std::min(hardest_positive, similarity(i, k));
            }
            else
            {
                has_neg = true;
                hardest_negative = std::max(hardest_negative, similarity(i, k));
            }
        }
        if (!has_pos || !has_neg)
            continue;

        for (std::size_t j = 0; j < n; ++j)
        {
            if (j == i)
                continue;
            const auto s = similarity(i, j);
            if (labels[j] == labels[i])
            {
                if (s < hardest_negative + margin)
                    sets.positives[i].push_back(j);
            }
            else if (s > hardest_positive - margin)
            {
                sets.negatives[i].push_back(j);
            }
        }
    }
    return sets;
}

BatchPairSets mine_pairs(const Matrix& embeddings, std::span<const int> labels, double margin)
{
    return mine_pairs_from_similarity(cosine_matrix(embeddings), labels, margin);
}

PairWeights pair_weights(std::span<const double> positive_similarities,
    std::span<const double> negative_similarities, double lambda1, double lambda2, double omega)
{
    PairWeights w;
    auto weigh = [](std::span<const double> sims, auto&& exponent, std::vector<double>& out) {
        out.resize(sims.size());
        double denom = 1.0;
        for (std::size_t j = 0; j < sims.size(); ++j)
        {
            out[j] = std::exp(exponent(sims[j]));
            denom += out[j];
        }
        for (auto& x : out)
            x /= denom;
    };
    weigh(positive_similarities, [&](double s) { return lambda1 * (omega - s); }, w.positive);
    weigh(negative_similarities, [&](double s) { return lambda2 * (s - omega); }, w.negative);
    return w;
}

double softplus(double x) noexcept
{
    if (x > 0.0)
        return x + std::log1p(std::exp(-x));
    return std::log1p(std::exp(x));
}

double pc_loss(const Matrix& similarity, const BatchPairSets& pairs, double lambda1,
    double lambda2, double omega)
{
    const auto m_pos = pairs.positive_count();
    const auto m_neg = pairs.negative_count();
    double pos = 0.0;
    double neg = 0.0;
    for (std::size_t i = 0; i < pairs.positives.size(); ++i)
    {
        for (const auto j : pairs.positives[i])
            pos += softplus(lambda1 * (omega - similarity(i, j)));
    }
    for (std::size_t i = 0; i < pairs.negatives.size(); ++i)
    {
        for (const auto j : pairs.negatives[i])
            neg += softplus(lambda2 * (similarity(i, j) - omega));
    }
    double loss = 0.0;
    if (m_pos > 0)
        loss += pos / static_cast<double>(m_pos);
    if (m_neg > 0)
        loss += neg / static_cast<double>(m_neg);
    return loss;
}

double cross_entropy(const Matrix& logits, std::span<const int> labels)
{
    check_labels(labels, logits.rows());
    if (logits.rows() == 0)
        return 0.0;
    double sum = 0.0;
    for (std::size_t r = 0; r < logits.rows(); ++r)
    {
        const auto row = logits.row(r);
        const auto mx = *std::max_element(row.begin(), row.end());
        double lse = 0.0;
        for (const auto z : row)
            lse += std::exp(z - mx);
        sum += mx + std::log(lse) - row[static_cast<std::size_t>(labels[r])];
    }
    return sum / static_cast<double>(logits.rows());
}

LossBreakdown combined_loss(const Matrix& logits, const Matrix& embeddings,
    std::span<const int> labels, const TrainingConfig& config, const BatchPairSets* pairs)
{
    LossBreakdown out;
    out.ce = cross_entropy(logits, labels);
    const auto similarity = cosine_matrix(embeddings);
    const auto mined = pairs ? *pairs
                             : mine_pairs_from_similarity(similarity, labels, config.mining_margin);
    out.pc = pc_loss(similarity, mined, config.lambda1, config.lambda2, config.omega);
    out.total = out.ce + config.alpha * out.pc;
    return out;
}

BatchGradients backward(const ModelParameters& params, const Matrix& batch,
    std::span<const int> labels, const TrainingConfig& config, const BatchPairSets* pairs)
{
    check_labels(labels, batch.rows());
    const auto trace = forward_trace(params, batch);
    const auto n = batch.rows();
    const auto& logits = trace.logits();
    const auto& emb = trace.embeddings();

    BatchGradients out;
    const auto similarity = cosine_matrix(emb);
    out.pairs = pairs ? *pairs : mine_pairs_from_similarity(similarity, labels, config.mining_margin);
    out.loss.ce = cross_entropy(logits, labels);
    out.loss.pc = pc_loss(similarity, out.pairs, config.lambda1, config.lambda2, config.omega);
    out.loss.total = out.loss.ce + config.alpha * out.loss.pc;

    // Cross-entropy: (softmax - onehot) / n.
    Matrix delta{n, logits.cols()};
    for (std::size_t r = 0; r < n; ++r)
    {
        const auto p = softmax_row(logits.row(r));
        for (std::size_t c = 0; c < p.size(); ++c)
            delta(r, c) = (p[c] - (static_cast<int>(c) == labels[r] ? 1.0 : 0.0)) /
                          static_cast<double>(n);
    }

    // Pairwise term: dL/dS for every ordered mined pair, then through the cosine.
    Matrix emb_grad{n, emb.cols()};
    const auto m_pos = out.pairs.positive_count();
    const auto m_neg = out.pairs.negative_count();
    if (config.alpha != 0.0 && (m_pos > 0 || m_neg > 0))
    {
        // h(i, j) collects dL/dS(e_i, e_j) from both orderings of the pair.
        Matrix h{n, n};
        for (std::size_t i = 0; i < n; ++i)
        {
            for (const auto j : out.pairs.positives[i])
            {
                const auto g = -config.alpha * config.lambda1 *
                               logistic(config.lambda1 * (config.omega - similarity(i, j))) /
                               static_cast<double>(m_pos);
                h(i, j) += g;
                h(j, i) += g;
            }
            for (const auto j : out.pairs.negatives[i])
            {
                const auto g = config.alpha * config.lambda2 *
                               logistic(config.lambda2 * (similarity(i, j) - config.omega)) /
                               static_cast<double>(m_neg);
                h(i, j) += g;
                h(j, i) += g;
            }
        }

        // dL/de_i = (1/|e_i|) (sum_j h_ij u_j - (sum_j h_ij S_ij) u_i), u = e / |e|.
        const auto norms = row_norms(emb);
        Matrix unit{n, emb.cols()};
        for (std::size_t r = 0; r < n; ++r)
        {
            if (norms[r] == 0.0)
                continue;
            const auto src = emb.row(r);
            auto dst = unit.row(r);
            for (std::size_t c = 0; c < src.size(); ++c)
                dst[c] = src[c] / norms[r];
        }
        // Zero-norm embeddings have S = 0 and no gradient.
        for (std::size_t i = 0; i < n; ++i)
        {
            if (norms[i] == 0.0)
            {
                for (std::size_t j = 0; j < n; ++j)
                {
                    h(i, j) = 0.0;
                    h(j, i) = 0.0;
                }
            }
        }
        gemm(Transpose::no, Transpose::no, 1.0, h, unit, 0.0, emb_grad);
        for (std::size_t i = 0; i < n; ++i)
        {
            if (norms[i] == 0.0)
                continue;
            double along = 0.0;
            for (std::size_t j = 0; j < n; ++j)
                along += h(i, j) * similarity(i, j);
            auto g = emb_grad.row(i);
            const auto u = unit.row(i);
            for (std::size_t c = 0; c < g.size(); ++c)
                g[c] = (g[c] - along * u[c]) / norms[i];
        }
    }

    const auto layers = params.layers.size();
    out.grads.weight.resize(layers);
    out.grads.bias.resize(layers);
    for (std::size_t l = layers; l-- > 0;)
    {
        const auto& layer = params.layers[l];
        out.grads.weight[l] = Matrix{layer.weight.rows(), layer.weight.cols()};
        gemm(Transpose::yes, Transpose::no, 1.0, trace.post[l], delta, 0.0, out.grads.weight[l]);
        auto& db = out.grads.bias[l];
        db.assign(layer.bias.size(), 0.0);
        for (std::size_t r = 0; r < n; ++r)
        {
            const auto row = delta.row(r);
            for (std::size_t c = 0; c < row.size(); ++c)
                db[c] += row[c];
        }
        if (l == 0)
            break;

        Matrix upstream{n, layer.weight.rows()};
        gemm(Transpose::no, Transpose::yes, 1.0, delta, layer.weight, 0.0, upstream);
        if (l == layers - 1)
        {
            for (std::size_t k = 0; k < upstream.size(); ++k)
                upstream.data()[k] += emb_grad.data()[k];
        }
        const auto& pre = trace.pre[l - 1];
        for (std::size_t k = 0; k < upstream.size(); ++k)
        {
            if (!(pre.data()[k] > 0.0))
                upstream.data()[k] = 0.0;
        }
        delta = std::move(upstream);
    }
    return out;
}

void sgd_momentum_step(
    ModelParameters& params, const Gradients& grads, double learning_rate, double momentum)
{
    if (grads.weight.size() != params.layers.size() || grads.bias.size() != params.layers.size())
        throw Error{ErrorKind::dimension_mismatch, "gradient layer count differs from the model"};

    auto step = [&](std::vector<double>& p, std::vector<double>& v, const std::vector<double>& g) {
        if (p.size() != g.size() || v.size() != g.size())
            throw Error{ErrorKind::dimension_mismatch, "gradient shape differs from parameter"};
        for (std::size_t k = 0; k < p.size(); ++k)
        {
            v[k] = momentum * v[k] + g[k];
            p[k] -= learning_rate * v[k];
        }
    };
    for (std::size_t l = 0; l < params.layers.size(); ++l)
    {
        auto& layer = params.layers[l];
        step(layer.weight.data(), layer.weight_velocity.data(), grads.weight[l].data());
        step(layer.bias, layer.bias_velocity, grads.bias[l]);
    }
}

TrainResult train(const Matrix& features, std::span<const int> labels, NetworkConfig network,
    const TrainingConfig& config, const EpochObserver& observer)
{
    if (features.rows() == 0)
        throw Error{ErrorKind::empty_dataset, "no training samples"};
    check_labels(labels, features.rows());
    if (std::all_of(labels.begin(), labels.end(), [&](int y) { return y == labels.front(); }))
        throw Error{ErrorKind::single_class_dataset, "training labels contain a single class"};
    if (network.input_dim == 0)
        network.input_dim = features.cols();
    if (network.input_dim != features.cols())
        throw Error{ErrorKind::dimension_mismatch, "feature width differs from input_dim"};
    config.validate();

    TrainResult result;
    result.params = init_params(network, config.seed);

    // A separate stream so that shuffling never perturbs initialization.
    std::mt19937_64 shuffle_rng{config.seed ^ 0x9e3779b97f4a7c15ULL};
    std::vector<std::size_t> order(features.rows());
    std::iota(order.begin(), order.end(), std::size_t{0});

    for (std::size_t epoch = 1; epoch <= config.epochs; ++epoch)
    {
        std::shuffle(order.begin(), order.end(), shuffle_rng);
        EpochStats stats;
        stats.epoch = epoch;
        std::size_t batches = 0;
        for (std::size_t start = 0; start < order.size(); start += config.batch_size)
        {
            const auto end = std::min(order.size(), start + config.batch_size);
            const std::span<const std::size_t> idx{order.data() + start, end - start};
            const auto batch = select_rows(features, idx);
            std::vector<int> batch_labels(idx.size());
            for (std::size_t k = 0; k < idx.size(); ++k)
                batch_labels[k] = labels[idx[k]];

            const auto step = backward(result.params, batch, batch_labels, config);
            sgd_momentum_step(result.params, step.grads, config.learning_rate, config.momentum);
            stats.loss += step.loss.total;
            stats.ce += step.loss.ce;
            stats.pc += step.loss.pc;
            ++batches;
        }
        stats.loss /= static_cast<double>(batches);
        stats.ce /= static_cast<double>(batches);
        stats.pc /= static_cast<double>(batches);
        if (!std::isfinite(stats.loss))
            throw Error{ErrorKind::invalid_argument,
                "training diverged in epoch " + std::to_string(stats.epoch) +
                    "; lower the learning rate or raise the batch size"};
        result.history.push_back(stats);
        if (observer)
            observer(stats, result.params);
    }
    return result;
}

Prediction predict(const ModelParameters& params, const Matrix& rows)
{
    const auto out = forward(params, rows);
    Prediction p;
    p.embeddings = out.embeddings;
    p.probabilities = Matrix{rows.rows(), out.logits.cols()};
    p.labels.resize(rows.rows());
    for (std::size_t r = 0; r < rows.rows(); ++r)
    {
        const auto prob = softmax_row(out.logits.row(r));
        std::copy(prob.begin(), prob.end(), p.probabilities.row(r).begin());
        p.labels[r] = static_cast<int>(
            std::distance(prob.begin(), std::max_element(prob.begin(), prob.end())));
    }
    return p;
}

double mean_intra_class_cosine(const Matrix& embeddings, std::span<const int> labels)
{
    check_labels(labels, embeddings.rows());
    double sum = 0.0;
    std::size_t count = 0;
    for (std::size_t i = 0; i < labels.size(); ++i)
    {
        for (std::size_t j = i + 1; j < labels.size(); ++j)
        {
            if (labels[i] != labels[j])
                continue;
            sum += cosine_similarity(embeddings.row(i), embeddings.row(j));
            ++count;
        }
    }
    return count == 0 ? 0.0 : sum / static_cast<double>(count);
}

void write_embeddings(std::ostream& out, const Matrix& embeddings,
    std::span<const std::string> ids, const std::optional<std::vector<int>>& labels)
{
    if (ids.size() != embeddings.rows() || (labels && labels->size() != embeddings.rows()))
        throw Error{ErrorKind::length_mismatch, "ids/labels do not match embedding rows"};
    for (std::size_t r = 0; r < embeddings.rows(); ++r)
    {
        out << ids[r] << ',';
        if (labels)
            out << (*labels)[r];
        for (const auto x : embeddings.row(r))
            out << ',' << format_number(x);
        out << '\n';
    }
}

void export_embeddings(std::ostream& out, const ModelParameters& params, const Matrix& rows,
    std::span<const std::string> ids, const std::optional<std::vector<int>>& labels)
{
    write_embeddings(out, forward(params, rows).embeddings, ids, labels);
}
}  // namespace evmscan
