// evmscan: bytecode-level vulnerability detection for EVM smart contracts
// Copyright 2026 The evmscan Authors.
// SPDX-License-Identifier: Apache-2.0

#include "config.hpp"

#include <evmscan/error.hpp>
#include <evmscan/matrix.hpp>

#include <toml.hpp>

#include <sstream>

namespace evmscan::cli
{
namespace
{
[[noreturn]] void fail(const std::string& where, const std::string& what)
{
    throw Error{ErrorKind::parse_error, where + ": " + what};
}

void check_keys(const toml::table& table, const std::string& name,
    std::initializer_list<std::string_view> allowed)
{
    for (const auto& [key, _] : table)
    {
        if (std::find(allowed.begin(), allowed.end(), key.str()) == allowed.end())
            fail(name, "unknown key '" + std::string{key.str()} + "'");
    }
}

const toml::table* section(const toml::table& root, std::string_view name)
{
    const auto* node = root.get(name);
    if (node == nullptr)
        return nullptr;
    const auto* t = node->as_table();
    if (t == nullptr)
        fail(std::string{name}, "expected a table");
    return t;
}

void read_size(const toml::table& t, std::string_view sec, std::string_view key, std::size_t& out)
{
    const auto* node = t.get(key);
    if (node == nullptr)
        return;
    const auto v = node->value<int64_t>();
    if (!node->is_integer() || !v || *v < 0)
        fail(std::string{sec} + "." + std::string{key}, "expected a non-negative integer");
    out = static_cast<std::size_t>(*v);
}

void read_double(const toml::table& t, std::string_view sec, std::string_view key, double& out)
{
    const auto* node = t.get(key);
    if (node == nullptr)
        return;
    if (!node->is_number())
        fail(std::string{sec} + "." + std::string{key}, "expected a number");
    out = *node->value<double>();
}

void read_path(const toml::table& t, std::string_view key, std::optional<std::string>& out)
{
    const auto* node = t.get(key);
    if (node == nullptr)
        return;
    if (!node->is_string())
        fail("paths." + std::string{key}, "expected a string");
    out = *node->value<std::string>();
}
}  // namespace

void apply_config_file(RunConfig& config, const std::filesystem::path& path)
{
    if (!std::filesystem::is_regular_file(path))
        throw Error{ErrorKind::file_not_found, path.string()};

    toml::table root;
    try
    {
        root = toml::parse_file(path.string());
    }
    catch (const toml::parse_error& e)
    {
        std::ostringstream msg;
        msg << path.string() << ":" << e.source().begin.line << ": " << e.description();
        throw Error{ErrorKind::parse_error, msg.str()};
    }
    check_keys(root, "config", {"network", "training", "features", "paths"});

    if (const auto* t = section(root, "network"))
    {
        check_keys(*t, "network", {"hidden_width", "hidden_layers", "output_classes"});
        read_size(*t, "network", "hidden_width", config.network.hidden_width);
        read_size(*t, "network", "hidden_layers", config.network.hidden_layers);
        read_size(*t, "network", "output_classes", config.network.output_classes);
    }
    if (const auto* t = section(root, "training"))
    {
        check_keys(*t, "training",
            {"epochs", "learning_rate", "momentum", "alpha", "lambda1", "lambda2", "omega",
                "mining_margin", "batch_size", "seed"});
        auto& c = config.training;
        read_size(*t, "training", "epochs", c.epochs);
        read_double(*t, "training", "learning_rate", c.learning_rate);
        read_double(*t, "training", "momentum", c.momentum);
        read_double(*t, "training", "alpha", c.alpha);
        read_double(*t, "training", "lambda1", c.lambda1);
        read_double(*t, "training", "lambda2", c.lambda2);
        read_double(*t, "training", "omega", c.omega);
        read_double(*t, "training", "mining_margin", c.mining_margin);
        read_size(*t, "training", "batch_size", c.batch_size);
        std::size_t seed = c.seed;
        read_size(*t, "training", "seed", seed);
        c.seed = seed;
    }
    if (const auto* t = section(root, "features"))
    {
        check_keys(*t, "features", {"encoder", "orders", "length", "min_df"});
        if (const auto* node = t->get("encoder"))
        {
            if (!node->is_string())
                fail("features.encoder", "expected a string");
            config.encoder.kind = parse_encoder_kind(*node->value<std::string>());
        }
        if (const auto* node = t->get("orders"))
        {
            const auto* arr = node->as_array();
            if (arr == nullptr || arr->empty())
                fail("features.orders", "expected a non-empty array of integers");
            std::vector<int> orders;
            for (const auto& el : *arr)
            {
                const auto v = el.value<int64_t>();
                if (!el.is_integer() || !v || *v < 1)
                    fail("features.orders", "expected positive integers");
                orders.push_back(static_cast<int>(*v));
            }
            config.encoder.orders = std::move(orders);
        }
        read_size(*t, "features", "length", config.encoder.length);
        read_size(*t, "features", "min_df", config.encoder.min_df);
    }
    if (const auto* t = section(root, "paths"))
    {
        check_keys(*t, "paths", {"corpus", "vocabulary", "model", "report"});
        read_path(*t, "corpus", config.paths.corpus);
        read_path(*t, "vocabulary", config.paths.vocabulary);
        read_path(*t, "model", config.paths.model);
        read_path(*t, "report", config.paths.report);
    }
}

std::string to_toml(const RunConfig& config)
{
    std::ostringstream out;
    const auto& n = config.network;
    out << "[network]\n"
        << "hidden_width = " << n.hidden_width << "\n"
        << "hidden_layers = " << n.hidden_layers << "\n"
        << "output_classes = " << n.output_classes << "\n\n";

    const auto& t = config.training;
    out << "[training]\n"
        << "epochs = " << t.epochs << "\n"
        << "learning_rate = " << format_number(t.learning_rate) << "\n"
        << "momentum = " << format_number(t.momentum) << "\n"
        << "alpha = " << format_number(t.alpha) << "\n"
        << "lambda1 = " << format_number(t.lambda1) << "\n"
        << "lambda2 = " << format_number(t.lambda2) << "\n"
        << "omega = " << format_number(t.omega) << "\n"
        << "mining_margin = " << format_number(t.mining_margin) << "\n"
        << "batch_size = " << t.batch_size << "\n"
        << "seed = " << t.seed << "\n\n";

    const auto& e = config.encoder;
    out << "[features]\n"
        << "encoder = \"" << to_string(e.kind) << "\"\n"
        << "orders = [";
    for (std::size_t i = 0; i < e.orders.size(); ++i)
        out << (i ? ", " : "") << e.orders[i];
    out << "]\n"
        << "length = " << e.length << "\n"
        << "min_df = " << e.min_df << "\n";

    const auto& p = config.paths;
    if (p.corpus || p.vocabulary || p.model || p.report)
    {
        out << "\n[paths]\n";
        const auto put = [&](std::string_view key, const std::optional<std::string>& v) {
            if (v)
                out << key << " = " << toml::value<std::string>{*v} << "\n";
        };
        put("corpus", p.corpus);
        put("vocabulary", p.vocabulary);
        put("model", p.model);
        put("report", p.report);
    }
    return out.str();
}
}  // namespace evmscan::cli
