// evmscan: bytecode-level vulnerability detection for EVM smart contracts
// Copyright 2026 The evmscan Authors.
// SPDX-License-Identifier: Apache-2.0

#include <evmscan/error.hpp>
#include <evmscan/model.hpp>

#include <json.hpp>

namespace evmscan
{
namespace
{
constexpr int format_version = 1;
}

std::string model_to_json(const ModelFile& model)
{
    const auto& net = model.params.network;
    const auto& tc = model.training;

    nlohmann::ordered_json j;
    j["format_version"] = format_version;
    j["network"] = {
        {"input_dim", net.input_dim},
        {"hidden_width", net.hidden_width},
        {"hidden_layers", net.hidden_layers},
        {"output_classes", net.output_classes},
        {"activation", "relu"},
    };
    j["training"] = {
        {"epochs", tc.epochs},
        {"learning_rate", tc.learning_rate},
        {"momentum", tc.momentum},
        {"alpha", tc.alpha},
        {"lambda1", tc.lambda1},
        {"lambda2", tc.lambda2},
        {"omega", tc.omega},
        {"mining_margin", tc.mining_margin},
        {"batch_size", tc.batch_size},
        {"seed", tc.seed},
    };
    j["vocab_hash"] = model.vocab_hash;
    auto layers = nlohmann::ordered_json::array();
    for (const auto& layer : model.params.layers)
    {
        nlohmann::ordered_json l;
        l["w"] = layer.weight.data();
        l["b"] = layer.bias;
        l["rows"] = layer.weight.rows();
        l["cols"] = layer.weight.cols();
        layers.push_back(std::move(l));
    }
    j["layers"] = std::move(layers);
    return j.dump() + "\n";
}

ModelFile model_from_json(std::string_view text)
{
    try
    {
        const auto j = nlohmann::json::parse(text);
        if (j.at("format_version").get<int>() != format_version)
            throw Error{ErrorKind::parse_error, "unsupported model format_version"};

        ModelFile model;
        const auto& net = j.at("network");
        auto& nc = model.params.network;
        nc.input_dim = net.at("input_dim").get<std::size_t>();
        nc.hidden_width = net.at("hidden_width").get<std::size_t>();
        nc.hidden_layers = net.at("hidden_layers").get<std::size_t>();
        nc.output_classes = net.at("output_classes").get<std::size_t>();
        nc.validate();

        const auto& tr = j.at("training");
        auto& tc = model.training;
        tc.epochs = tr.at("epochs").get<std::size_t>();
        tc.learning_rate = tr.at("learning_rate").get<double>();
        tc.momentum = tr.at("momentum").get<double>();
        tc.alpha = tr.at("alpha").get<double>();
        tc.lambda1 = tr.at("lambda1").get<double>();
        tc.lambda2 = tr.at("lambda2").get<double>();
        tc.omega = tr.at("omega").get<double>();
        tc.mining_margin = tr.at("mining_margin").get<double>();
        tc.batch_size = tr.at("batch_size").get<std::size_t>();
        tc.seed = tr.at("seed").get<uint64_t>();

        model.vocab_hash = j.at("vocab_hash").get<std::string>();

        const auto& layers = j.at("layers");
        if (layers.size() != nc.hidden_layers + 1)
            throw Error{ErrorKind::parse_error, "layer count does not match the network"};
        auto fan_in = nc.input_dim;
        for (std::size_t l = 0; l < layers.size(); ++l)
        {
            const auto& lj = layers[l];
            const auto rows = lj.at("rows").get<std::size_t>();
            const auto cols = lj.at("cols").get<std::size_t>();
            const auto expected_cols = l + 1 == layers.size() ? nc.output_classes : nc.hidden_width;
            if (rows != fan_in || cols != expected_cols)
                throw Error{ErrorKind::parse_error,
                    "layer " + std::to_string(l) + " shape does not chain"};

            DenseLayer layer;
            layer.weight = Matrix{rows, cols};
            layer.weight.data() = lj.at("w").get<std::vector<double>>();
            layer.bias = lj.at("b").get<std::vector<double>>();
            if (layer.weight.data().size() != rows * cols || layer.bias.size() != cols)
                throw Error{ErrorKind::parse_error,
                    "layer " + std::to_string(l) + " has the wrong number of values"};
            layer.weight_velocity = Matrix{rows, cols};
            layer.bias_velocity.assign(cols, 0.0);
            model.params.layers.push_back(std::move(layer));
            fan_in = cols;
        }
        return model;
    }
    catch (const nlohmann::json::exception& e)
    {
        throw Error{ErrorKind::parse_error, std::string{"model: "} + e.what()};
    }
    catch (const Error& e)
    {
        if (e.kind() == ErrorKind::parse_error)
            throw;
        throw Error{ErrorKind::parse_error, std::string{"model: "} + e.what()};
    }
}
}  // namespace evmscan
