// evmscan: bytecode-level vulnerability detection for EVM smart contracts
// Copyright 2026 The evmscan Authors.
// SPDX-License-Identifier: Apache-2.0

#include <evmscan/error.hpp>
#include <evmscan/model.hpp>

#include <gtest/gtest.h>

#include "gradcheck.hpp"
#include "synthetic.hpp"

#include <cmath>
#include <limits>
#include <sstream>

using namespace evmscan;

namespace
{
Matrix rows(std::initializer_list<std::initializer_list<double>> r)
{
    Matrix m{r.size(), r.begin()->size()};
    std::size_t i = 0;
    for (const auto& row : r)
    {
        std::size_t j = 0;
        for (const auto v : row)
            m(i, j++) = v;
        ++i;
    }
    return m;
}

/// One-wide network: every weight `w`, every bias `b`, output weights (w, -w).
ModelParameters one_wide(double w, double b)
{
    auto p = init_params({1, 1, 5, 2}, 0);
    for (auto& layer : p.layers)
    {
        std::fill(layer.weight.data().begin(), layer.weight.data().end(), w);
        std::fill(layer.bias.begin(), layer.bias.end(), b);
    }
    p.layers.back().weight(0, 1) = -w;
    return p;
}

ErrorKind kind_of(auto&& fn)
{
    try
    {
        fn();
    }
    catch (const Error& e)
    {
        return e.kind();
    }
    ADD_FAILURE() << "no Error thrown";
    return ErrorKind::invalid_argument;
}
}  // namespace

TEST(config, defaults)
{
    const TrainingConfig c;
    EXPECT_EQ(c.epochs, 300u);
    EXPECT_EQ(c.learning_rate, 0.02);
    EXPECT_EQ(c.momentum, 0.9);
    EXPECT_EQ(c.alpha, 0.8);
    EXPECT_EQ(c.lambda1, 2.0);
    EXPECT_EQ(c.lambda2, 40.0);
    EXPECT_EQ(c.omega, 0.5);
    EXPECT_EQ(c.mining_margin, 0.1);
    EXPECT_EQ(c.batch_size, 64u);
    const NetworkConfig n;
    EXPECT_EQ(n.hidden_width, 512u);
    EXPECT_EQ(n.hidden_layers, 5u);
    EXPECT_EQ(n.output_classes, 2u);
}

TEST(config, validation)
{
    EXPECT_THROW((NetworkConfig{4, 8, 4, 2}.validate()), Error);
    EXPECT_THROW((NetworkConfig{4, 0, 5, 2}.validate()), Error);
    EXPECT_NO_THROW((NetworkConfig{4, 8, 5, 2}.validate()));
    TrainingConfig c;
    c.omega = 1.0;
    EXPECT_THROW(c.validate(), Error);
    c = {};
    c.batch_size = 1;
    EXPECT_THROW(c.validate(), Error);
    c = {};
    c.lambda2 = 0.0;
    EXPECT_THROW(c.validate(), Error);
    c = {};
    c.alpha = -0.1;
    EXPECT_THROW(c.validate(), Error);
}

TEST(init, shapes)
{
    const auto p = init_params({8, 4, 5, 2}, 1);
    ASSERT_EQ(p.layers.size(), 6u);
    EXPECT_EQ(p.layers[0].weight.rows(), 8u);
    EXPECT_EQ(p.layers[0].weight.cols(), 4u);
    for (std::size_t l = 1; l < 5; ++l)
    {
        EXPECT_EQ(p.layers[l].weight.rows(), 4u);
        EXPECT_EQ(p.layers[l].weight.cols(), 4u);
    }
    EXPECT_EQ(p.layers[5].weight.rows(), 4u);
    EXPECT_EQ(p.layers[5].weight.cols(), 2u);
    for (const auto& layer : p.layers)
    {
        EXPECT_EQ(layer.bias.size(), layer.weight.cols());
        for (const auto b : layer.bias)
            EXPECT_EQ(b, 0.0);
        for (const auto v : layer.weight_velocity.data())
            EXPECT_EQ(v, 0.0);
    }
}

TEST(init, seeded)
{
    const auto a = init_params({8, 4, 5, 2}, 7);
    const auto b = init_params({8, 4, 5, 2}, 7);
    const auto c = init_params({8, 4, 5, 2}, 8);
    for (std::size_t l = 0; l < a.layers.size(); ++l)
        EXPECT_EQ(a.layers[l].weight, b.layers[l].weight);
    EXPECT_NE(a.layers[0].weight, c.layers[0].weight);
}

TEST(init, he_scale)
{
    const auto p = init_params({400, 300, 5, 2}, 3);
    const auto& w = p.layers[0].weight.data();
    double sq = 0.0;
    for (const auto v : w)
        sq += v * v;
    EXPECT_NEAR(sq / static_cast<double>(w.size()), 2.0 / 400.0, 0.05 * 2.0 / 400.0);
}

TEST(forward, zero_parameters)
{
    auto p = init_params({3, 4, 5, 2}, 0);
    for (auto& layer : p.layers)
        std::fill(layer.weight.data().begin(), layer.weight.data().end(), 0.0);
    const auto out = forward(p, std::vector<double>{1.0, -2.0, 3.0});
    EXPECT_EQ(out.embedding, std::vector<double>(4, 0.0));
    EXPECT_EQ(out.logits, std::vector<double>(2, 0.0));
}

TEST(forward, one_wide_by_hand)
{
    // x = 1, w = 2, b = -1: h1 = relu(1) = 1, h2 = relu(2 - 1) = 1, ..., h5 = 1.
    auto p = one_wide(2.0, -1.0);
    auto out = forward(p, std::vector<double>{1.0});
    EXPECT_EQ(out.embedding, std::vector<double>{1.0});
    // logits: 2 * 1 - 1 = 1 and -2 * 1 - 1 = -3.
    EXPECT_EQ(out.logits, (std::vector<double>{1.0, -3.0}));

    // x = 3: h1 = 5, h2 = 9, h3 = 17, h4 = 33, h5 = 65.
    out = forward(p, std::vector<double>{3.0});
    EXPECT_EQ(out.embedding, std::vector<double>{65.0});
    EXPECT_EQ(out.logits, (std::vector<double>{129.0, -131.0}));

    // x = -1 dies at the first layer: h = relu(-3) = 0, then relu(-1) = 0 onwards.
    out = forward(p, std::vector<double>{-1.0});
    EXPECT_EQ(out.embedding, std::vector<double>{0.0});
    EXPECT_EQ(out.logits, (std::vector<double>{-1.0, -1.0}));
}

TEST(forward, embeddings_are_nonnegative_and_match_naive)
{
    std::mt19937_64 rng{4};
    for (int iter = 0; iter < 10; ++iter)
    {
        const auto prob = test::tiny_problem(rng);
        const auto out = forward(prob.params, prob.x);
        for (const auto v : out.embeddings.data())
            EXPECT_GE(v, 0.0);
        const auto pre = test::naive_preactivations(prob.params, prob.x);
        for (std::size_t k = 0; k < out.logits.size(); ++k)
            EXPECT_NEAR(out.logits.data()[k], pre.back().data()[k], 1e-12);
    }
}

TEST(forward, dimension_mismatch)
{
    const auto p = init_params({3, 4, 5, 2}, 0);
    EXPECT_EQ(kind_of([&] { (void)forward(p, Matrix{2, 4}); }), ErrorKind::dimension_mismatch);
    EXPECT_EQ(kind_of([&] { (void)predict(p, Matrix{2, 2}); }), ErrorKind::dimension_mismatch);
}

TEST(cosine, values)
{
    const std::vector<double> v{1.0, 2.0, 3.0};
    EXPECT_NEAR(cosine_similarity(v, v), 1.0, 1e-15);
    EXPECT_EQ(cosine_similarity(std::vector<double>{1.0, 0.0}, std::vector<double>{0.0, 2.0}), 0.0);
    EXPECT_NEAR(cosine_similarity(std::vector<double>{1.0, 0.0}, std::vector<double>{1.0, 1.0}),
        1.0 / std::sqrt(2.0), 1e-15);
    EXPECT_EQ(cosine_similarity(std::vector<double>{0.0, 0.0}, std::vector<double>{1.0, 1.0}), 0.0);
}

TEST(mining, infinite_margin_keeps_everything)
{
    const auto emb = rows({{1, 0}, {1, 1}, {0, 1}, {1, 2}});
    const std::vector<int> labels{0, 0, 1, 1};
    const auto pairs = mine_pairs(emb, labels, std::numeric_limits<double>::infinity());
    EXPECT_EQ(pairs.positive_count(), 4u);
    EXPECT_EQ(pairs.negative_count(), 8u);
}

TEST(mining, separated_batch_needs_no_pairs)
{
    // Classes along orthogonal axes with tiny spread: positives ~1, negatives ~0.
    const auto emb = rows({{1, 0}, {1, 0.01}, {0, 1}, {0.01, 1}});
    const std::vector<int> labels{0, 0, 1, 1};
    EXPECT_TRUE(mine_pairs(emb, labels, 0.1).empty());
}

TEST(mining, single_class_has_no_pairs)
{
    const auto emb = rows({{1, 0}, {0, 1}});
    EXPECT_TRUE(mine_pairs(emb, std::vector<int>{1, 1}, 0.1).empty());
}

TEST(mining, thresholds_by_hand)
{
    // Anchor 0: positives S = 0.9 (j=1), 0.3 (j=2); negatives S = 0.35 (j=3), 0.1 (j=4).
    // Positive kept iff S < max_neg + 0.1 = 0.45: j=2 only.
    // Negative kept iff S > min_pos - 0.1 = 0.2: j=3 only.
    Matrix s{5, 5};
    const double vals[5] = {1.0, 0.9, 0.3, 0.35, 0.1};
    for (std::size_t j = 0; j < 5; ++j)
    {
        s(0, j) = vals[j];
        s(j, 0) = vals[j];
    }
    for (std::size_t i = 1; i < 5; ++i)
        s(i, i) = 1.0;
    const std::vector<int> labels{0, 0, 0, 1, 1};
    const auto p = mine_pairs_from_similarity(s, labels, 0.1);
    EXPECT_EQ(p.positives[0], std::vector<std::size_t>{2});
    EXPECT_EQ(p.negatives[0], std::vector<std::size_t>{3});
}

TEST(pair_weights, single_positive_at_margin)
{
    const auto w = pair_weights(std::vector<double>{0.5}, {}, 2.0, 40.0, 0.5);
    ASSERT_EQ(w.positive.size(), 1u);
    EXPECT_EQ(w.positive[0], 0.5);
    const auto wn = pair_weights({}, std::vector<double>{0.5}, 2.0, 40.0, 0.5);
    EXPECT_EQ(wn.negative[0], 0.5);
}

TEST(pair_weights, symmetry_and_hardness)
{
    const auto w = pair_weights(std::vector<double>{0.4, 0.4}, {}, 2.0, 40.0, 0.5);
    EXPECT_EQ(w.positive[0], w.positive[1]);
    const auto h = pair_weights(std::vector<double>{0.2, 0.8}, std::vector<double>{0.1, 0.6}, 2.0, 40.0, 0.5);
    EXPECT_GT(h.positive[0], h.positive[1]);
    EXPECT_LT(h.negative[0], h.negative[1]);
    // By hand: exp(0.6) / (1 + exp(0.6) + exp(-0.6)).
    EXPECT_NEAR(h.positive[0], std::exp(0.6) / (1.0 + std::exp(0.6) + std::exp(-0.6)), 1e-15);
}

TEST(pc_loss, values)
{
    EXPECT_NEAR(softplus(0.0), std::log(2.0), 1e-15);
    EXPECT_NEAR(softplus(800.0), 800.0, 1e-12);
    EXPECT_NEAR(softplus(-800.0), 0.0, 1e-300);

    Matrix s{2, 2};
    s(0, 1) = s(1, 0) = 0.5;
    BatchPairSets none{{{}, {}}, {{}, {}}};
    EXPECT_EQ(pc_loss(s, none, 2.0, 40.0, 0.5), 0.0);

    BatchPairSets one{{{1}, {}}, {{}, {}}};
    EXPECT_NEAR(pc_loss(s, one, 2.0, 40.0, 0.5), std::log(2.0), 1e-15);
}

TEST(pc_loss, normalized_by_batch_pair_counts)
{
    Matrix s{3, 3};
    s(0, 1) = s(1, 0) = 0.2;
    s(0, 2) = s(2, 0) = 0.7;
    s(1, 2) = s(2, 1) = 0.4;
    // positives: (0,1), (1,0); negatives: (0,2), (1,2), (2,0).
    BatchPairSets p{{{1}, {0}, {}}, {{2}, {2}, {0}}};
    const double pos = 2.0 * softplus(2.0 * (0.5 - 0.2)) / 2.0;
    const double neg = (2.0 * softplus(40.0 * (0.7 - 0.5)) + softplus(40.0 * (0.4 - 0.5))) / 3.0;
    EXPECT_NEAR(pc_loss(s, p, 2.0, 40.0, 0.5), pos + neg, 1e-12);
}

TEST(combined_loss, alpha_zero_is_cross_entropy)
{
    TrainingConfig c;
    c.alpha = 0.0;
    const auto logits = rows({{0.3, -1.0}, {2.0, 0.5}, {0.0, 0.0}});
    const auto emb = rows({{1, 0}, {0, 1}, {1, 1}});
    const std::vector<int> labels{0, 1, 1};
    const auto l = combined_loss(logits, emb, labels, c);
    EXPECT_EQ(l.total, l.ce);
    EXPECT_EQ(l.ce, cross_entropy(logits, labels));
}

TEST(combined_loss, uniform_logits)
{
    const auto logits = rows({{0.0, 0.0}, {1.5, 1.5}});
    EXPECT_NEAR(cross_entropy(logits, std::vector<int>{0, 1}), std::log(2.0), 1e-15);
}

TEST(combined_loss, hand_built_batch)
{
    // Embeddings (1,0), (1,1), (0,1) with labels 0, 0, 1.
    // S01 = 1/sqrt2, S02 = 0, S12 = 1/sqrt2.
    const auto emb = rows({{1, 0}, {1, 1}, {0, 1}});
    const auto logits = rows({{1.0, 0.0}, {0.0, 0.0}, {0.0, 2.0}});
    const std::vector<int> labels{0, 0, 1};
    TrainingConfig c;
    const double r = 1.0 / std::sqrt(2.0);

    // Anchor 0: pos {1: r}, neg {2: 0}. Keep pos iff r < 0 + 0.1: no. Keep neg iff 0 > r - 0.1: no.
    // Anchor 1: pos {0: r}, neg {2: r}. Keep pos iff r < r + 0.1: yes. Keep neg iff r > r - 0.1: yes.
    // Anchor 2: no positives, nothing kept.
    const double pc = softplus(2.0 * (0.5 - r)) / 1.0 + softplus(40.0 * (r - 0.5)) / 1.0;
    const double ce = ((std::log(1.0 + std::exp(-1.0))) + std::log(2.0) + std::log(1.0 + std::exp(-2.0))) / 3.0;
    const auto l = combined_loss(logits, emb, labels, c);
    EXPECT_NEAR(l.ce, ce, 1e-14);
    EXPECT_NEAR(l.pc, pc, 1e-12);
    EXPECT_NEAR(l.total, ce + 0.8 * pc, 1e-12);
}

TEST(backward, matches_finite_differences)
{
    std::mt19937_64 rng{99};
    TrainingConfig c;
    for (int iter = 0; iter < 10; ++iter)
    {
        const auto prob = test::tiny_problem(rng);
        const auto emb = forward(prob.params, prob.x).embeddings;
        const auto margin = iter % 2 == 0 ? std::numeric_limits<double>::infinity() : c.mining_margin;
        const auto pairs = mine_pairs(emb, prob.labels, margin);
        const auto res = test::gradient_check(prob.params, prob.x, prob.labels, c, pairs);
        EXPECT_LT(res.max_relative_error, 1e-4) << "iteration " << iter;
    }
}

TEST(backward, converged_softmax_has_no_ce_gradient)
{
    auto p = one_wide(1.0, 0.0);
    p.layers.back().weight(0, 0) = 100.0;
    p.layers.back().weight(0, 1) = -100.0;
    TrainingConfig c;
    c.alpha = 0.0;
    const auto g = backward(p, rows({{1.0}, {2.0}}), std::vector<int>{0, 0}, c).grads;
    for (const auto& w : g.weight)
        for (const auto v : w.data())
            EXPECT_NEAR(v, 0.0, 1e-40);
}

TEST(backward, duplicate_sample_doubles_ce_contribution)
{
    TrainingConfig c;
    c.alpha = 0.0;
    const auto x1 = rows({{0.5, -0.2}});
    auto p = init_params({2, 4, 5, 2}, 3);
    const auto single = backward(p, x1, std::vector<int>{1}, c).grads;
    // Batch {x, x, y}: mean over 3, x appears twice.
    const auto batch = rows({{0.5, -0.2}, {0.5, -0.2}, {-0.3, 0.9}});
    const auto only_y = backward(p, rows({{-0.3, 0.9}}), std::vector<int>{0}, c).grads;
    const auto both = backward(p, batch, std::vector<int>{1, 1, 0}, c).grads;
    for (std::size_t l = 0; l < both.weight.size(); ++l)
        for (std::size_t k = 0; k < both.weight[l].size(); ++k)
            EXPECT_NEAR(both.weight[l].data()[k],
                (2.0 * single.weight[l].data()[k] + only_y.weight[l].data()[k]) / 3.0, 1e-14);
}

TEST(sgd, plain_and_momentum)
{
    auto p = init_params({1, 1, 5, 2}, 0);
    Gradients g;
    for (const auto& layer : p.layers)
    {
        g.weight.emplace_back(layer.weight.rows(), layer.weight.cols(), 0.5);
        g.bias.emplace_back(layer.bias.size(), 0.25);
    }
    const auto w0 = p.layers[0].weight(0, 0);

    auto q = p;
    sgd_momentum_step(q, g, 0.1, 0.0);
    EXPECT_NEAR(q.layers[0].weight(0, 0), w0 - 0.1 * 0.5, 1e-15);
    EXPECT_NEAR(q.layers[0].bias[0], -0.1 * 0.25, 1e-15);

    q = p;
    sgd_momentum_step(q, g, 0.1, 0.9);
    sgd_momentum_step(q, g, 0.1, 0.9);
    EXPECT_NEAR(q.layers[0].weight(0, 0), w0 - 0.1 * 0.5 * 2.9, 1e-15);

    q = p;
    Gradients zero = g;
    for (auto& w : zero.weight)
        std::fill(w.data().begin(), w.data().end(), 0.0);
    for (auto& b : zero.bias)
        std::fill(b.begin(), b.end(), 0.0);
    sgd_momentum_step(q, zero, 0.1, 0.9);
    EXPECT_EQ(q.layers[0].weight, p.layers[0].weight);
}

TEST(train, errors)
{
    TrainingConfig c;
    c.epochs = 1;
    const NetworkConfig n{0, 4, 5, 2};
    EXPECT_EQ(kind_of([&] { (void)train(Matrix{0, 3}, std::vector<int>{}, n, c); }),
        ErrorKind::empty_dataset);
    EXPECT_EQ(kind_of([&] { (void)train(Matrix{2, 3}, std::vector<int>{1, 1}, n, c); }),
        ErrorKind::single_class_dataset);
    EXPECT_EQ(kind_of([&] { (void)train(Matrix{2, 3}, std::vector<int>{1}, n, c); }),
        ErrorKind::label_length_mismatch);
    EXPECT_EQ(kind_of([&] { (void)train(Matrix{2, 3}, std::vector<int>{0, 1}, NetworkConfig{5, 4, 5, 2}, c); }),
        ErrorKind::dimension_mismatch);
}

TEST(train, deterministic_and_learns_blobs)
{
    const auto blobs = test::gaussian_blobs(120, 6, 1.0, 3);
    TrainingConfig c;
    c.epochs = 15;
    c.batch_size = 32;
    const NetworkConfig n{0, 32, 5, 2};
    std::size_t observed = 0;
    const auto a = train(blobs.features, blobs.labels, n, c,
        [&](const EpochStats& s, const ModelParameters&) { EXPECT_EQ(s.epoch, ++observed); });
    const auto b = train(blobs.features, blobs.labels, n, c);
    EXPECT_EQ(observed, 15u);
    ASSERT_EQ(a.history.size(), 15u);
    for (std::size_t l = 0; l < a.params.layers.size(); ++l)
        EXPECT_EQ(a.params.layers[l].weight, b.params.layers[l].weight);
    for (const auto& s : a.history)
        EXPECT_NEAR(s.loss, s.ce + c.alpha * s.pc, 1e-12);

    const auto pred = predict(a.params, blobs.features);
    std::size_t correct = 0;
    for (std::size_t i = 0; i < blobs.labels.size(); ++i)
        correct += pred.labels[i] == blobs.labels[i];
    EXPECT_GE(static_cast<double>(correct) / 120.0, 0.99);
}

TEST(train, divergence_is_reported)
{
    const auto blobs = test::gaussian_blobs(120, 6, 1.0, 3);
    TrainingConfig c;
    c.epochs = 15;
    c.batch_size = 16;
    try
    {
        (void)train(blobs.features, blobs.labels, NetworkConfig{0, 32, 5, 2}, c);
        FAIL();
    }
    catch (const Error& e)
    {
        EXPECT_EQ(e.kind(), ErrorKind::invalid_argument);
        EXPECT_NE(std::string{e.what()}.find("diverged"), std::string::npos);
    }
}

TEST(predict, probabilities)
{
    auto p = one_wide(1.0, 0.0);
    p.layers.back().weight(0, 0) = 10.0;
    p.layers.back().weight(0, 1) = -10.0;
    const auto out = predict(p, rows({{1.0}, {-1.0}, {0.3}}));
    EXPECT_EQ(out.labels[0], 0);
    EXPECT_GT(out.probabilities(0, 0), 0.999);
    for (std::size_t r = 0; r < 3; ++r)
        EXPECT_NEAR(out.probabilities(r, 0) + out.probabilities(r, 1), 1.0, 1e-9);
    const auto again = predict(p, rows({{1.0}, {-1.0}, {0.3}}));
    EXPECT_EQ(again.probabilities, out.probabilities);
    EXPECT_EQ(again.labels, out.labels);
}

TEST(intra_class_cosine, by_hand)
{
    const auto emb = rows({{1, 0}, {1, 1}, {0, 1}, {0, 2}});
    // class 0: one pair at 1/sqrt2; class 1: one pair at 1.
    EXPECT_NEAR(mean_intra_class_cosine(emb, std::vector<int>{0, 0, 1, 1}),
        (1.0 / std::sqrt(2.0) + 1.0) / 2.0, 1e-15);
}

TEST(embeddings, export_csv)
{
    const auto p = init_params({2, 3, 5, 2}, 5);
    const auto x = rows({{1, 2}, {3, 4}, {5, 6}});
    const std::vector<std::string> ids{"a", "b", "c"};
    std::ostringstream s1;
    std::ostringstream s2;
    export_embeddings(s1, p, x, ids, std::vector<int>{0, 1, 0});
    export_embeddings(s2, p, x, ids, std::vector<int>{0, 1, 0});
    EXPECT_EQ(s1.str(), s2.str());

    std::istringstream in{s1.str()};
    std::string line;
    std::size_t n = 0;
    while (std::getline(in, line))
    {
        ++n;
        EXPECT_EQ(std::count(line.begin(), line.end(), ','), 4);
    }
    EXPECT_EQ(n, 3u);

    std::ostringstream unlabeled;
    export_embeddings(unlabeled, p, x, ids);
    EXPECT_EQ(unlabeled.str().rfind("a,,", 0), 0u);
}

TEST(model_json, round_trip)
{
    ModelFile f{init_params({3, 4, 5, 2}, 2), TrainingConfig{}, "abc"};
    f.training.seed = 17;
    const auto text = model_to_json(f);
    const auto back = model_from_json(text);
    EXPECT_EQ(back.vocab_hash, "abc");
    EXPECT_EQ(back.training, f.training);
    EXPECT_EQ(back.params.network, f.params.network);
    for (std::size_t l = 0; l < f.params.layers.size(); ++l)
    {
        EXPECT_EQ(back.params.layers[l].weight, f.params.layers[l].weight);
        EXPECT_EQ(back.params.layers[l].bias, f.params.layers[l].bias);
    }
    EXPECT_EQ(model_to_json(back), text);
    EXPECT_EQ(kind_of([] { (void)model_from_json("{}"); }), ErrorKind::parse_error);
    EXPECT_EQ(kind_of([] { (void)model_from_json("not json"); }), ErrorKind::parse_error);
}
