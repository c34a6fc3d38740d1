// evmscan: bytecode-level vulnerability detection for EVM smart contracts
// Copyright 2026 The evmscan Authors.
// SPDX-License-Identifier: Apache-2.0

#include "cli.hpp"
#include "config.hpp"

#include <evmscan/cfg.hpp>
#include <evmscan/digest.hpp>
#include <evmscan/disassembler.hpp>
#include <evmscan/eval.hpp>
#include <evmscan/features.hpp>
#include <evmscan/ingestion.hpp>
#include <evmscan/matrix.hpp>
#include <evmscan/model.hpp>
#include <evmscan/pipeline.hpp>

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace evmscan::cli
{
namespace
{
namespace fs = std::filesystem;

std::string read_file(const fs::path& path)
{
    if (!fs::is_regular_file(path))
        throw Error{ErrorKind::file_not_found, path.string()};
    std::ifstream in{path, std::ios::binary};
    if (!in)
        throw Error{ErrorKind::io_error, "cannot read " + path.string()};
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const fs::path& path, std::string_view content)
{
    std::ofstream out{path, std::ios::binary | std::ios::trunc};
    if (!out)
        throw Error{ErrorKind::io_error, "cannot write " + path.string()};
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.close();
    if (!out)
        throw Error{ErrorKind::io_error, "cannot write " + path.string()};
}

std::string trim(std::string_view s)
{
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos)
        return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return std::string{s.substr(b, e - b + 1)};
}

bool is_corpus_file(const std::string& arg)
{
    return fs::path{arg}.extension() == ".jsonl" && fs::is_regular_file(arg);
}

/// A hex literal or the path of a file holding one.
ContractRecord load_contract(const std::string& arg, std::size_t index)
{
    ContractRecord r;
    if (!arg.empty() && fs::is_regular_file(arg))
    {
        r.source_id = fs::path{arg}.filename().string();
        r.bytecode = parse_hex(trim(read_file(arg)));
    }
    else
    {
        r.source_id = "contract" + std::to_string(index);
        r.bytecode = parse_hex(trim(arg));
    }
    r.bytecode.set_source_id(r.source_id);
    return r;
}

std::vector<ContractRecord> load_corpus(const fs::path& path, std::ostream& err)
{
    auto loaded = load_jsonl(path);
    for (const auto& e : loaded.errors)
        err << path.string() << ":" << e.line << ": skipped: " << e.message << "\n";
    return std::move(loaded.records);
}

/// Corpus files and contract arguments, in order.
std::vector<ContractRecord> load_inputs(const std::vector<std::string>& args, std::ostream& err)
{
    std::vector<ContractRecord> out;
    for (std::size_t i = 0; i < args.size(); ++i)
    {
        if (is_corpus_file(args[i]))
        {
            auto corpus = load_corpus(args[i], err);
            std::move(corpus.begin(), corpus.end(), std::back_inserter(out));
        }
        else
        {
            out.push_back(load_contract(args[i], i));
        }
    }
    return out;
}

std::string labels_to_text(std::span<const int> labels)
{
    std::string s;
    for (const auto l : labels)
        s += std::to_string(l) + "\n";
    return s;
}

std::vector<int> labels_from_text(const std::string& text, const std::string& name)
{
    std::vector<int> labels;
    std::istringstream in{text};
    std::string line;
    std::size_t n = 0;
    while (std::getline(in, line))
    {
        ++n;
        const auto t = trim(line);
        if (t.empty())
            continue;
        if (t != "0" && t != "1")
            throw Error{ErrorKind::parse_error,
                name + ":" + std::to_string(n) + ": label must be 0 or 1"};
        labels.push_back(t == "1" ? 1 : 0);
    }
    return labels;
}

std::string fixed(double v, int digits = 6)
{
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
    return buf;
}

/// Flag values that override the config file when given.
struct Overrides
{
    std::optional<std::string> config_file;

    std::optional<std::size_t> hidden_width;

    std::optional<std::size_t> epochs;
    std::optional<double> learning_rate;
    std::optional<double> momentum;
    std::optional<double> alpha;
    std::optional<double> lambda1;
    std::optional<double> lambda2;
    std::optional<double> omega;
    std::optional<double> mining_margin;
    std::optional<std::size_t> batch_size;
    std::optional<uint64_t> seed;

    std::optional<std::string> encoder;
    std::vector<int> orders;
    std::optional<std::size_t> length;
    std::optional<std::size_t> min_df;
};

template <typename T>
void overlay(T& field, const std::optional<T>& flag)
{
    if (flag)
        field = *flag;
}

RunConfig resolve(const Overrides& o)
{
    RunConfig c;
    if (o.config_file)
        apply_config_file(c, *o.config_file);

    overlay(c.network.hidden_width, o.hidden_width);

    auto& t = c.training;
    overlay(t.epochs, o.epochs);
    overlay(t.learning_rate, o.learning_rate);
    overlay(t.momentum, o.momentum);
    overlay(t.alpha, o.alpha);
    overlay(t.lambda1, o.lambda1);
    overlay(t.lambda2, o.lambda2);
    overlay(t.omega, o.omega);
    overlay(t.mining_margin, o.mining_margin);
    overlay(t.batch_size, o.batch_size);
    overlay(t.seed, o.seed);

    if (o.encoder)
        c.encoder.kind = parse_encoder_kind(*o.encoder);
    if (!o.orders.empty())
        c.encoder.orders = o.orders;
    overlay(c.encoder.length, o.length);
    overlay(c.encoder.min_df, o.min_df);

    // input_dim comes from the data; only the configured widths are checked here.
    auto network = c.network;
    network.input_dim = 1;
    network.validate();
    c.training.validate();
    return c;
}

void add_config_option(CLI::App& app, Overrides& o)
{
    app.add_option("--config", o.config_file, "TOML file with [network], [training], [features], [paths]");
}

void add_network_options(CLI::App& app, Overrides& o)
{
    const NetworkConfig d;
    app.add_option("--hidden-width", o.hidden_width, "Units per hidden layer")
        ->default_str(std::to_string(d.hidden_width));
}

void add_training_options(CLI::App& app, Overrides& o)
{
    const TrainingConfig d;
    app.add_option("--epochs", o.epochs, "Training epochs")->default_str(std::to_string(d.epochs));
    app.add_option("--lr,--learning-rate", o.learning_rate, "SGD learning rate")
        ->default_str(format_number(d.learning_rate));
    app.add_option("--momentum", o.momentum, "SGD momentum")->default_str(format_number(d.momentum));
    app.add_option("--alpha", o.alpha, "Weight of the pairwise-contrastive loss")
        ->default_str(format_number(d.alpha));
    app.add_option("--lambda1", o.lambda1, "Positive-pair sharpness")
        ->default_str(format_number(d.lambda1));
    app.add_option("--lambda2", o.lambda2, "Negative-pair sharpness")
        ->default_str(format_number(d.lambda2));
    app.add_option("--omega", o.omega, "Similarity margin")->default_str(format_number(d.omega));
    app.add_option("--mining-margin", o.mining_margin, "Slack for informative pair mining")
        ->default_str(format_number(d.mining_margin));
    app.add_option("--batch-size", o.batch_size, "Mini-batch size")
        ->default_str(std::to_string(d.batch_size));
    app.add_option("--seed", o.seed, "Seed for initialization, shuffling and splits")
        ->default_str(std::to_string(d.seed));
}

void add_feature_options(CLI::App& app, Overrides& o)
{
    const EncoderSpec d;
    app.add_option("--encoder", o.encoder, "ngram_tfidf, unigram_tfidf or integer")
        ->default_str(std::string{to_string(d.kind)});
    app.add_option("--orders", o.orders, "n-gram orders, comma separated")
        ->delimiter(',')
        ->default_str("1,2");
    app.add_option("--length", o.length, "Row length of the integer encoder")
        ->default_str(std::to_string(d.length));
    app.add_option("--min-df", o.min_df, "Minimum document frequency of a feature")
        ->default_str(std::to_string(d.min_df));
}

std::string require_path(
    const std::optional<std::string>& flag, const std::optional<std::string>& from_config,
    std::string_view what)
{
    if (flag)
        return *flag;
    if (from_config)
        return *from_config;
    throw Error{ErrorKind::invalid_argument, "missing " + std::string{what}};
}

void check_row_width(const ModelParameters& params, const LoadedVocabulary& vocab)
{
    const auto width = vocab.encoder.kind == EncoderKind::integer ? vocab.encoder.length :
                                                                    vocab.vocabulary.size();
    if (params.network.input_dim != width)
        throw Error{ErrorKind::dimension_mismatch,
            "model expects " + std::to_string(params.network.input_dim) +
                " inputs, vocabulary produces " + std::to_string(width)};
}

/// Loads model and vocabulary and checks that the model was trained against this vocabulary.
Detector load_detector(const std::string& model_path, const std::string& vocab_path)
{
    const auto vocab_text = read_file(vocab_path);
    auto model = model_from_json(read_file(model_path));
    if (model.vocab_hash != sha256_hex(vocab_text))
        throw Error{ErrorKind::vocabulary_mismatch,
            "model " + model_path + " was trained with a different vocabulary than " + vocab_path};
    auto vocab = vocabulary_from_json(vocab_text);
    check_row_width(model.params, vocab);
    return {std::move(model.params), std::move(vocab.vocabulary), vocab.encoder};
}

// --- commands -------------------------------------------------------------------------

struct DisasmArgs
{
    std::vector<std::string> inputs;
    std::size_t jobs = 1;
};

int cmd_disasm(const DisasmArgs& a, std::ostream& out)
{
    std::vector<ContractRecord> contracts;
    for (std::size_t i = 0; i < a.inputs.size(); ++i)
        contracts.push_back(load_contract(a.inputs[i], i));

    std::vector<std::string> listings(contracts.size());
    parallel_for(contracts.size(), a.jobs,
        [&](std::size_t i) { listings[i] = render(disassemble(contracts[i].bytecode)); });

    for (std::size_t i = 0; i < listings.size(); ++i)
    {
        if (listings.size() > 1)
            out << "# " << contracts[i].source_id << "\n";
        out << listings[i];
    }
    return exit_ok;
}

struct CfgArgs
{
    std::vector<std::string> inputs;
    std::optional<std::string> dot;
    std::size_t jobs = 1;
};

int cmd_cfg(const CfgArgs& a, std::ostream& out)
{
    if (a.dot && a.inputs.size() != 1)
        throw Error{ErrorKind::invalid_argument, "--dot needs exactly one input"};

    std::vector<ContractRecord> contracts;
    for (std::size_t i = 0; i < a.inputs.size(); ++i)
        contracts.push_back(load_contract(a.inputs[i], i));

    std::vector<ControlFlowGraph> graphs(contracts.size());
    parallel_for(contracts.size(), a.jobs,
        [&](std::size_t i) { graphs[i] = build_cfg(disassemble(contracts[i].bytecode)); });

    for (std::size_t i = 0; i < graphs.size(); ++i)
    {
        if (graphs.size() > 1)
            out << contracts[i].source_id << ": ";
        out << graphs[i].blocks.size() << " blocks, " << graphs[i].edge_count() << " edges, "
            << graphs[i].unresolved_count << " unresolved\n";
    }
    if (a.dot)
        write_file(*a.dot, to_dot(graphs.front()));
    return exit_ok;
}

struct FeaturizeArgs
{
    std::optional<std::string> corpus;
    std::string out;
    std::optional<std::string> vocab;
    std::optional<std::string> labels;
    std::string voting = "given";
    bool keep_duplicates = false;
    std::size_t jobs = 1;
    Overrides overrides;
};

int cmd_featurize(const FeaturizeArgs& a, std::ostream& err)
{
    const auto config = resolve(a.overrides);
    const auto corpus_path = require_path(a.corpus, config.paths.corpus, "corpus");
    const auto vocab_path = require_path(a.vocab, config.paths.vocabulary, "--vocab");

    auto corpus = load_corpus(corpus_path, err);
    if (!a.keep_duplicates)
    {
        auto d = dedup(std::move(corpus));
        if (d.removed > 0)
            err << "removed " << d.removed << " duplicate contract(s)\n";
        corpus = std::move(d.records);
    }
    const auto mode = parse_label_mode(a.voting);
    if (a.labels || mode != LabelMode::given)
        corpus = attach_labels(std::move(corpus), mode);

    std::optional<std::vector<int>> labels;
    if (a.labels)
        labels = corpus_labels(corpus);

    const auto sequences = analyze_corpus(corpus, a.jobs);
    const auto [vocab, matrix] = build_feature_matrix(sequences, labels, config.encoder);

    std::ostringstream m;
    write_matrix(m, matrix.values);
    write_file(a.out, m.str());
    write_file(vocab_path, vocabulary_to_json(vocab, config.encoder));
    if (a.labels)
        write_file(*a.labels, labels_to_text(*labels));
    err << matrix.values.rows() << " rows, " << matrix.values.cols() << " columns\n";
    return exit_ok;
}

struct TrainArgs
{
    std::optional<std::string> matrix;
    std::optional<std::string> labels;
    std::optional<std::string> vocab;
    std::optional<std::string> model;
    std::optional<std::string> history;
    bool print_config = false;
    bool quiet = false;
    Overrides overrides;
};

int cmd_train(const TrainArgs& a, std::ostream& out, std::ostream& err)
{
    const auto config = resolve(a.overrides);
    if (a.print_config)
    {
        out << to_toml(config);
        return exit_ok;
    }
    if (!a.matrix || !a.labels)
        throw Error{ErrorKind::invalid_argument, "train needs --matrix and --labels"};
    const auto vocab_path = require_path(a.vocab, config.paths.vocabulary, "--vocab");
    const auto model_path = require_path(a.model, config.paths.model, "--model");

    std::istringstream matrix_in{read_file(*a.matrix)};
    const auto features = read_matrix(matrix_in);
    const auto labels = labels_from_text(read_file(*a.labels), *a.labels);
    const auto vocab_text = read_file(vocab_path);
    const auto vocab = vocabulary_from_json(vocab_text);

    auto network = config.network;
    network.input_dim = 0;
    const auto epochs = config.training.epochs;
    const auto every = std::max<std::size_t>(1, epochs / 10);
    auto result = train(features, labels, network, config.training,
        [&](const EpochStats& s, const ModelParameters&) {
            if (!a.quiet && (s.epoch == 1 || s.epoch % every == 0 || s.epoch == epochs))
                err << "epoch " << s.epoch << "/" << epochs << " loss " << fixed(s.loss)
                    << " ce " << fixed(s.ce) << " pc " << fixed(s.pc) << "\n";
        });
    check_row_width(result.params, vocab);

    write_file(model_path, model_to_json({result.params, config.training, sha256_hex(vocab_text)}));
    if (a.history)
    {
        std::string csv = "epoch,loss,ce,pc\n";
        for (const auto& s : result.history)
            csv += std::to_string(s.epoch) + "," + format_number(s.loss) + "," +
                   format_number(s.ce) + "," + format_number(s.pc) + "\n";
        write_file(*a.history, csv);
    }
    return exit_ok;
}

struct PredictArgs
{
    std::optional<std::string> model;
    std::optional<std::string> vocab;
    std::vector<std::string> inputs;
    std::optional<std::string> out;
    std::optional<std::string> config_file;
    std::size_t jobs = 1;
};

int cmd_predict(const PredictArgs& a, std::ostream& out, std::ostream& err)
{
    RunConfig config;
    if (a.config_file)
        apply_config_file(config, *a.config_file);
    const auto detector = load_detector(require_path(a.model, config.paths.model, "--model"),
        require_path(a.vocab, config.paths.vocabulary, "--vocab"));

    const auto contracts = load_inputs(a.inputs, err);
    if (contracts.empty())
        throw Error{ErrorKind::empty_dataset, "no contracts to score"};
    const auto detections = detect(detector, contracts, a.jobs);

    std::string plain;
    std::vector<StageTiming> timings;
    for (const auto& d : detections)
    {
        out << d.id << " " << d.label << " " << fixed(d.probability) << " "
            << fixed(d.timing.analysis) << " " << fixed(d.timing.encode) << " "
            << fixed(d.timing.predict) << "\n";
        plain += d.id + " " + std::to_string(d.label) + " " + fixed(d.probability) + "\n";
        timings.push_back(d.timing);
    }
    const auto t = timing_report(timings);
    out << "# " << t.contracts << " contracts, mean seconds: analysis " << fixed(t.mean.analysis)
        << " encode " << fixed(t.mean.encode) << " predict " << fixed(t.mean.predict)
        << " total " << fixed(t.mean_total) << "\n";
    if (a.out)
        write_file(*a.out, plain);
    return exit_ok;
}

struct EvaluateArgs
{
    std::optional<std::string> corpus;
    std::optional<std::string> model;
    std::optional<std::string> vocab;
    std::string voting = "given";
    std::optional<std::string> holdout;
    std::optional<std::size_t> train_benign;
    std::optional<std::size_t> train_positive;
    std::optional<std::size_t> test_benign;
    std::optional<std::size_t> test_positive;
    std::optional<std::string> report;
    bool timing = false;
    std::size_t jobs = 1;
    Overrides overrides;
};

int cmd_evaluate(const EvaluateArgs& a, std::ostream& out, std::ostream& err)
{
    const auto config = resolve(a.overrides);
    const auto corpus_path = require_path(a.corpus, config.paths.corpus, "corpus");
    auto corpus = attach_labels(load_corpus(corpus_path, err), parse_label_mode(a.voting));

    EvaluationReport report;
    if (a.holdout)
    {
        HoldoutExperiment exp;
        exp.held_out = *a.holdout;
        exp.counts = {a.train_benign, a.train_positive, a.test_benign, a.test_positive};
        exp.encoder = config.encoder;
        exp.network = config.network;
        exp.training = config.training;
        const auto outcome = run_holdout(corpus, exp, a.jobs);
        err << "hold-out '" << exp.held_out << "': " << outcome.split.train.size() << " train, "
            << outcome.split.test.size() << " test\n";
        report = outcome.report;
    }
    else
    {
        const auto detector = load_detector(require_path(a.model, config.paths.model, "--model"),
            require_path(a.vocab, config.paths.vocabulary, "--vocab"));
        const auto detections = detect(detector, corpus, a.jobs);
        std::vector<int> predicted;
        std::vector<StageTiming> timings;
        for (const auto& d : detections)
        {
            predicted.push_back(d.label);
            timings.push_back(d.timing);
        }
        report = metrics(confusion(predicted, corpus_labels(corpus)));
        if (a.timing)
        {
            report.timing = timing_report(timings);
            report.avg_detection_seconds = report.timing->mean_total;
        }
    }

    out << report_to_table(report);
    if (const auto path = a.report ? a.report : config.paths.report)
        write_file(*path, report_to_json(report));
    return exit_ok;
}

struct FetchArgs
{
    std::vector<std::string> addresses;
    std::optional<std::string> endpoint;
    std::optional<std::string> out;
    std::size_t jobs = 8;
    std::size_t timeout_ms = 10'000;
};

int cmd_fetch(const FetchArgs& a, std::ostream& out, std::ostream& err)
{
    const auto endpoint = a.endpoint ? a.endpoint : default_rpc_endpoint();
    if (!endpoint)
        throw Error{ErrorKind::invalid_argument, "no --endpoint given and EVMSCAN_RPC_URL unset"};

    const auto results = fetch_codes(
        *endpoint, a.addresses, a.jobs, RpcOptions{std::chrono::milliseconds{a.timeout_ms}});

    std::string jsonl;
    std::optional<ErrorKind> first_failure;
    for (std::size_t i = 0; i < results.size(); ++i)
    {
        if (const auto* e = std::get_if<Error>(&results[i]))
        {
            err << a.addresses[i] << ": " << e->what() << "\n";
            if (!first_failure)
                first_failure = e->kind();
            continue;
        }
        ContractRecord r;
        r.source_id = a.addresses[i];
        r.bytecode = std::get<Bytecode>(results[i]);
        jsonl += to_jsonl_line(r) + "\n";
    }
    if (a.out)
        write_file(*a.out, jsonl);
    else
        out << jsonl;
    return first_failure ? exit_code(*first_failure) : exit_ok;
}

struct EmbedArgs
{
    std::optional<std::string> corpus;
    std::optional<std::string> model;
    std::optional<std::string> vocab;
    std::optional<std::string> out;
    std::optional<std::string> config_file;
    std::size_t jobs = 1;
};

int cmd_embed(const EmbedArgs& a, std::ostream& out, std::ostream& err)
{
    RunConfig config;
    if (a.config_file)
        apply_config_file(config, *a.config_file);
    const auto detector = load_detector(require_path(a.model, config.paths.model, "--model"),
        require_path(a.vocab, config.paths.vocabulary, "--vocab"));
    const auto corpus = load_corpus(require_path(a.corpus, config.paths.corpus, "corpus"), err);

    const auto sequences = analyze_corpus(corpus, a.jobs);
    const auto rows = encode_rows(sequences, detector.vocabulary, detector.encoder);
    std::vector<std::string> ids;
    std::optional<std::vector<int>> labels;
    if (std::all_of(corpus.begin(), corpus.end(), [](const auto& r) { return r.label.has_value(); }))
        labels = corpus_labels(corpus);
    for (const auto& r : corpus)
        ids.push_back(r.source_id);

    std::ostringstream csv;
    export_embeddings(csv, detector.params, rows, ids, labels);
    if (a.out)
        write_file(*a.out, csv.str());
    else
        out << csv.str();
    return exit_ok;
}
}  // namespace

int exit_code(ErrorKind kind) noexcept
{
    switch (kind)
    {
    case ErrorKind::malformed_hex:
    case ErrorKind::parse_error:
    case ErrorKind::unknown_mnemonic:
        return exit_input;
    case ErrorKind::file_not_found:
    case ErrorKind::io_error:
    case ErrorKind::transport:
    case ErrorKind::rpc_error:
    case ErrorKind::empty_code:
        return exit_io;
    case ErrorKind::empty_graph:
    case ErrorKind::empty_corpus:
    case ErrorKind::label_length_mismatch:
    case ErrorKind::single_class_dataset:
    case ErrorKind::empty_dataset:
    case ErrorKind::length_mismatch:
    case ErrorKind::empty_evaluation:
    case ErrorKind::k_too_large:
    case ErrorKind::insufficient_samples:
    case ErrorKind::empty_measurements:
    case ErrorKind::missing_verdicts:
    case ErrorKind::missing_labels:
        return exit_dataset;
    case ErrorKind::vocabulary_mismatch:
    case ErrorKind::dimension_mismatch:
        return exit_mismatch;
    case ErrorKind::invalid_argument:
        return exit_usage;
    }
    return exit_usage;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"evmscan: bytecode-level vulnerability detection for EVM smart contracts",
        "evmscan"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "evmscan 0.1.0");

    const auto jobs_option = [](CLI::App& sub, std::size_t& jobs) {
        sub.add_option("-j,--jobs", jobs, "Contracts processed in parallel")
            ->capture_default_str()
            ->check(CLI::PositiveNumber);
    };

    DisasmArgs disasm;
    auto* c_disasm = app.add_subcommand("disasm", "Disassemble bytecode given as hex or a file");
    c_disasm->add_option("input", disasm.inputs, "Hex string(s) or file(s)")->required();
    jobs_option(*c_disasm, disasm.jobs);

    CfgArgs cfg;
    auto* c_cfg = app.add_subcommand("cfg", "Recover the control flow graph and summarize it");
    c_cfg->add_option("input", cfg.inputs, "Hex string(s) or file(s)")->required();
    c_cfg->add_option("--dot", cfg.dot, "Write the graph in Graphviz format");
    jobs_option(*c_cfg, cfg.jobs);

    FeaturizeArgs feat;
    auto* c_feat = app.add_subcommand("featurize", "Build the feature matrix and vocabulary");
    c_feat->add_option("corpus", feat.corpus, "JSONL corpus");
    c_feat->add_option("-o,--out", feat.out, "Feature matrix output")->required();
    c_feat->add_option("--vocab", feat.vocab, "Vocabulary JSON output");
    c_feat->add_option("--labels", feat.labels, "Write labels, one per line");
    c_feat->add_option("--voting", feat.voting, "Label source: given, majority or union")
        ->capture_default_str();
    c_feat->add_flag("--keep-duplicates", feat.keep_duplicates, "Skip bytecode deduplication");
    jobs_option(*c_feat, feat.jobs);
    add_feature_options(*c_feat, feat.overrides);
    add_config_option(*c_feat, feat.overrides);

    TrainArgs tr;
    auto* c_train = app.add_subcommand("train", "Train the detector");
    c_train->add_option("--matrix", tr.matrix, "Feature matrix from featurize");
    c_train->add_option("--labels", tr.labels, "Labels from featurize");
    c_train->add_option("--vocab", tr.vocab, "Vocabulary the matrix was built with");
    c_train->add_option("--model", tr.model, "Model JSON output");
    c_train->add_option("--history", tr.history, "Per-epoch loss CSV output");
    c_train->add_flag("--print-config", tr.print_config, "Print the resolved configuration and exit");
    c_train->add_flag("-q,--quiet", tr.quiet, "No progress output");
    add_network_options(*c_train, tr.overrides);
    add_training_options(*c_train, tr.overrides);
    add_config_option(*c_train, tr.overrides);

    PredictArgs pr;
    auto* c_predict = app.add_subcommand("predict", "Score contracts with a trained model");
    c_predict->add_option("input", pr.inputs, "JSONL corpus, hex string(s) or file(s)")->required();
    c_predict->add_option("--model", pr.model, "Model JSON");
    c_predict->add_option("--vocab", pr.vocab, "Vocabulary JSON");
    c_predict->add_option("--out", pr.out, "Also write 'id label p' lines without timings");
    c_predict->add_option("--config", pr.config_file, "TOML file supplying [paths]");
    jobs_option(*c_predict, pr.jobs);

    EvaluateArgs ev;
    auto* c_eval = app.add_subcommand("evaluate", "Compute detection metrics on a labeled corpus");
    c_eval->add_option("corpus", ev.corpus, "JSONL corpus");
    c_eval->add_option("--model", ev.model, "Model JSON");
    c_eval->add_option("--vocab", ev.vocab, "Vocabulary JSON");
    c_eval->add_option("--voting", ev.voting, "Label source: given, majority or union")
        ->capture_default_str();
    c_eval->add_option("--holdout-category", ev.holdout,
        "Train without this category and test on it; trains a fresh model");
    c_eval->add_option("--train-benign", ev.train_benign, "Benign training samples")
        ->default_str("80% of benign");
    c_eval->add_option("--train-positive", ev.train_positive, "Vulnerable training samples")
        ->default_str("all");
    c_eval->add_option("--test-benign", ev.test_benign, "Benign test samples")
        ->default_str("20% of benign");
    c_eval->add_option("--test-positive", ev.test_positive, "Held-out test samples")
        ->default_str("all");
    c_eval->add_option("--report", ev.report, "JSON report output");
    c_eval->add_flag("--timing", ev.timing, "Include per-stage detection timings in the report");
    jobs_option(*c_eval, ev.jobs);
    add_network_options(*c_eval, ev.overrides);
    add_training_options(*c_eval, ev.overrides);
    add_feature_options(*c_eval, ev.overrides);
    add_config_option(*c_eval, ev.overrides);

    FetchArgs fe;
    auto* c_fetch = app.add_subcommand("fetch", "Download deployed bytecode over JSON-RPC");
    c_fetch->add_option("address", fe.addresses, "Contract addresses")->required();
    c_fetch->add_option("--endpoint", fe.endpoint, "JSON-RPC URL")->default_str("$EVMSCAN_RPC_URL");
    c_fetch->add_option("-o,--out", fe.out, "JSONL output (default stdout)");
    c_fetch->add_option("-j,--jobs", fe.jobs, "Requests in flight")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    c_fetch->add_option("--timeout-ms", fe.timeout_ms, "Per-request timeout")->capture_default_str();

    EmbedArgs em;
    auto* c_embed = app.add_subcommand("embed", "Export last-hidden-layer embeddings as CSV");
    c_embed->add_option("corpus", em.corpus, "JSONL corpus");
    c_embed->add_option("--model", em.model, "Model JSON");
    c_embed->add_option("--vocab", em.vocab, "Vocabulary JSON");
    c_embed->add_option("-o,--out", em.out, "CSV output (default stdout)");
    c_embed->add_option("--config", em.config_file, "TOML file supplying [paths]");
    jobs_option(*c_embed, em.jobs);

    try
    {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    }
    catch (const CLI::ParseError& e)
    {
        const auto code = app.exit(e, out, err);
        return code == 0 ? exit_ok : exit_usage;
    }

    try
    {
        if (*c_disasm)
            return cmd_disasm(disasm, out);
        if (*c_cfg)
            return cmd_cfg(cfg, out);
        if (*c_feat)
            return cmd_featurize(feat, err);
        if (*c_train)
            return cmd_train(tr, out, err);
        if (*c_predict)
            return cmd_predict(pr, out, err);
        if (*c_eval)
            return cmd_evaluate(ev, out, err);
        if (*c_fetch)
            return cmd_fetch(fe, out, err);
        if (*c_embed)
            return cmd_embed(em, out, err);
    }
    catch (const Error& e)
    {
        err << "error: " << e.what() << "\n";
        return exit_code(e.kind());
    }
    catch (const std::filesystem::filesystem_error& e)
    {
        err << "error: " << e.what() << "\n";
        return exit_io;
    }
    return exit_usage;
}
}  // namespace evmscan::cli
