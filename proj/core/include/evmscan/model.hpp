// evmscan: bytecode-level vulnerability detection for EVM smart contracts
// Copyright 2026 The evmscan Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <evmscan/matrix.hpp>

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace evmscan
{
/// Five fully connected ReLU layers followed by a linear two-class output layer.
/// The embedding is the post-ReLU output of the last hidden layer.
struct NetworkConfig
{
    std::size_t input_dim = 0;
    std::size_t hidden_width = 512;
    std::size_t hidden_layers = 5;
    std::size_t output_classes = 2;

    /// Throws Error{invalid_argument}.
    void validate() const;

    friend bool operator==(const NetworkConfig&, const NetworkConfig&) = default;
};

struct TrainingConfig
{
    std::size_t epochs = 300;
    double learning_rate = 0.02;
    double momentum = 0.9;
    /// Weight of the pairwise-contrastive term in the combined loss.
    double alpha = 0.8;
    /// Positive-pair sharpness.
    double lambda1 = 2.0;
    /// Negative-pair sharpness.
    double lambda2 = 40.0;
    /// Similarity margin shared by both pair terms.
    double omega = 0.5;
    /// Slack used when mining informative pairs.
    double mining_margin = 0.1;
    std::size_t batch_size = 64;
    uint64_t seed = 0;

    /// Throws Error{invalid_argument}.
    void validate() const;

    friend bool operator==(const TrainingConfig&, const TrainingConfig&) = default;
};

/// y = x * weight + bias, weight shaped fan_in x fan_out.
struct DenseLayer
{
    Matrix weight;
    std::vector<double> bias;
    Matrix weight_velocity;
    std::vector<double> bias_velocity;
};

struct ModelParameters
{
    NetworkConfig network;
    std::vector<DenseLayer> layers;
};

/// He-style initialization: N(0, 2 / fan_in) weights, zero biases and momentum buffers.
[[nodiscard]] ModelParameters init_params(const NetworkConfig& network, uint64_t seed);

struct ForwardOutput
{
    Matrix embeddings;
    Matrix logits;
};

/// Throws Error{dimension_mismatch} when the batch width differs from input_dim.
[[nodiscard]] ForwardOutput forward(const ModelParameters& params, const Matrix& batch);

struct RowOutput
{
    std::vector<double> embedding;
    std::vector<double> logits;
};

[[nodiscard]] RowOutput forward(const ModelParameters& params, std::span<const double> row);

/// a.b / (|a| |b|), or 0 when either norm is 0.
[[nodiscard]] double cosine_similarity(std::span<const double> a, std::span<const double> b);

/// Pairwise cosine similarities of the rows of `embeddings`.
[[nodiscard]] Matrix cosine_matrix(const Matrix& embeddings);

/// Partner indices kept for each anchor after mining.
struct BatchPairSets
{
    std::vector<std::vector<std::size_t>> positives;
    std::vector<std::vector<std::size_t>> negatives;

    [[nodiscard]] std::size_t positive_count() const noexcept;
    [[nodiscard]] std::size_t negative_count() const noexcept;
    [[nodiscard]] bool empty() const noexcept
    {
        return positive_count() == 0 && negative_count() == 0;
    }
};

/// For anchor i, keeps positive j when S_ij < max over negatives of S_ik + margin, and
/// negative j when S_ij > min over positives of S_ik - margin. An anchor without both a
/// positive and a negative partner keeps nothing.
[[nodiscard]] BatchPairSets mine_pairs_from_similarity(
    const Matrix& similarity, std::span<const int> labels, double margin);

[[nodiscard]] BatchPairSets mine_pairs(
    const Matrix& embeddings, std::span<const int> labels, double margin);

struct PairWeights
{
    std::vector<double> positive;
    std::vector<double> negative;
};

/// Soft weights for one anchor's mined pairs:
///   w+_j = exp(l1 (w - S_j)) / (1 + sum_k exp(l1 (w - S_k)))
///   w-_j = exp(l2 (S_j - w)) / (1 + sum_k exp(l2 (S_k - w)))
/// where each sum runs over the anchor's whole mined set.
[[nodiscard]] PairWeights pair_weights(std::span<const double> positive_similarities,
    std::span<const double> negative_similarities, double lambda1, double lambda2, double omega);

/// g(x) = ln(1 + exp(x)), evaluated without overflow.
[[nodiscard]] double softplus(double x) noexcept;

/// Sum over mined positive pairs of g(l1 (w - S)) / m+, plus the negative counterpart
/// g(l2 (S - w)) / m-, with m+ and m- the batch-wide mined pair counts. Empty sets add 0.
[[nodiscard]] double pc_loss(const Matrix& similarity, const BatchPairSets& pairs, double lambda1,
    double lambda2, double omega);

/// Mean softmax cross-entropy.
[[nodiscard]] double cross_entropy(const Matrix& logits, std::span<const int> labels);

struct LossBreakdown
{
    double total = 0.0;
    double ce = 0.0;
    double pc = 0.0;
};

/// total = ce + alpha * pc, with pairs mined from the embeddings unless supplied.
[[nodiscard]] LossBreakdown combined_loss(const Matrix& logits, const Matrix& embeddings,
    std::span<const int> labels, const TrainingConfig& config,
    const BatchPairSets* pairs = nullptr);

/// Same shapes as the parameters.
struct Gradients
{
    std::vector<Matrix> weight;
    std::vector<std::vector<double>> bias;
};

struct BatchGradients
{
    LossBreakdown loss;
    BatchPairSets pairs;
    Gradients grads;
};

/// Exact gradients of the combined loss for one batch by reverse accumulation. Mining
/// decisions are constants of the batch; pass `pairs` to pin them.
[[nodiscard]] BatchGradients backward(const ModelParameters& params, const Matrix& batch,
    std::span<const int> labels, const TrainingConfig& config,
    const BatchPairSets* pairs = nullptr);

/// velocity = momentum * velocity + grad; param -= learning_rate * velocity.
void sgd_momentum_step(
    ModelParameters& params, const Gradients& grads, double learning_rate, double momentum);

struct EpochStats
{
    std::size_t epoch = 0;
    double loss = 0.0;
    double ce = 0.0;
    double pc = 0.0;
};

struct TrainResult
{
    ModelParameters params;
    std::vector<EpochStats> history;
};

using EpochObserver = std::function<void(const EpochStats&, const ModelParameters&)>;

/// Seeded mini-batch SGD with momentum on the combined loss. history holds one entry per
/// epoch with batch-averaged losses. Throws Error{empty_dataset},
/// Error{single_class_dataset}, Error{label_length_mismatch}, Error{dimension_mismatch},
/// or Error{invalid_argument} when an epoch's loss is not finite.
[[nodiscard]] TrainResult train(const Matrix& features, std::span<const int> labels,
    NetworkConfig network, const TrainingConfig& config, const EpochObserver& observer = {});

struct Prediction
{
    std::vector<int> labels;
    /// One row per input, softmax over the classes.
    Matrix probabilities;
    Matrix embeddings;
};

[[nodiscard]] Prediction predict(const ModelParameters& params, const Matrix& rows);

/// Average cosine similarity over all unordered same-label pairs.
[[nodiscard]] double mean_intra_class_cosine(const Matrix& embeddings, std::span<const int> labels);

/// CSV: "id,label,e0,e1,..." per row; label is empty when unknown.
void write_embeddings(std::ostream& out, const Matrix& embeddings,
    std::span<const std::string> ids, const std::optional<std::vector<int>>& labels);

void export_embeddings(std::ostream& out, const ModelParameters& params, const Matrix& rows,
    std::span<const std::string> ids, const std::optional<std::vector<int>>& labels = {});

/// The persisted model envelope.
struct ModelFile
{
    ModelParameters params;
    TrainingConfig training;
    std::string vocab_hash;
};

/// {"format_version":1,"network":{...},"training":{...},"vocab_hash":"...","layers":[...]}
[[nodiscard]] std::string model_to_json(const ModelFile& model);
/// Throws Error{parse_error}.
[[nodiscard]] ModelFile model_from_json(std::string_view text);
}  // namespace evmscan
