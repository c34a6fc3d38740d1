// evmscan: bytecode-level vulnerability detection for EVM smart contracts
// Copyright 2026 The evmscan Authors.
// SPDX-License-Identifier: Apache-2.0

#include <evmscan/error.hpp>
#include <evmscan/features.hpp>
#include <evmscan/opcodes.hpp>

#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>

namespace evmscan
{
namespace
{
void check_orders(std::span<const int> orders)
{
    if (orders.empty())
        throw Error{ErrorKind::invalid_argument, "n-gram orders must not be empty"};
    for (const auto n : orders)
    {
        if (n < 1)
            throw Error{ErrorKind::invalid_argument,
                "n-gram order must be positive, got " + std::to_string(n)};
    }
}

std::vector<std::size_t> to_orders_vec(std::span<const int> orders)
{
    std::set<int> unique(orders.begin(), orders.end());
    return {unique.begin(), unique.end()};
}
}  // namespace

Vocabulary::Vocabulary(
    std::vector<NgramFeature> features, std::vector<std::size_t> doc_freq, std::size_t corpus_size)
  : m_features{std::move(features)}, m_doc_freq{std::move(doc_freq)}, m_corpus_size{corpus_size}
{
    if (m_features.size() != m_doc_freq.size())
        throw Error{ErrorKind::invalid_argument, "vocabulary features and doc_freq differ in size"};
    for (std::size_t i = 0; i < m_features.size(); ++i)
    {
        if (i > 0 && !(m_features[i - 1] < m_features[i]))
            throw Error{ErrorKind::invalid_argument, "vocabulary features must be strictly sorted"};
        if (m_doc_freq[i] < 1 || m_doc_freq[i] > m_corpus_size)
            throw Error{ErrorKind::invalid_argument, "document frequency out of range"};
        m_index.emplace(m_features[i], i);
    }
}

std::optional<std::size_t> Vocabulary::column(const NgramFeature& f) const
{
    const auto it = m_index.find(f);
    if (it == m_index.end())
        return std::nullopt;
    return it->second;
}

double Vocabulary::idf(std::size_t column) const
{
    const auto n = static_cast<double>(m_corpus_size);
    const auto df = static_cast<double>(m_doc_freq.at(column));
    return std::log((1.0 + n) / (1.0 + df)) + 1.0;
}

std::string_view to_string(EncoderKind kind) noexcept
{
    switch (kind)
    {
    case EncoderKind::ngram_tfidf:
        return "ngram_tfidf";
    case EncoderKind::unigram_tfidf:
        return "unigram_tfidf";
    case EncoderKind::integer:
        return "integer";
    }
    return "ngram_tfidf";
}

EncoderKind parse_encoder_kind(std::string_view name)
{
    if (name == "ngram_tfidf")
        return EncoderKind::ngram_tfidf;
    if (name == "unigram_tfidf")
        return EncoderKind::unigram_tfidf;
    if (name == "integer")
        return EncoderKind::integer;
    throw Error{ErrorKind::invalid_argument, "unknown encoder '" + std::string{name} + "'"};
}

std::vector<int> EncoderSpec::effective_orders() const
{
    if (kind == EncoderKind::unigram_tfidf || kind == EncoderKind::integer)
        return {1};
    return orders;
}

NgramCounts extract_ngrams(std::span<const std::string> sequence, std::span<const int> orders)
{
    check_orders(orders);
    NgramCounts counts;
    for (const auto n : to_orders_vec(orders))
    {
        if (sequence.size() < n)
            continue;
        for (std::size_t i = 0; i + n <= sequence.size(); ++i)
        {
            NgramFeature f;
            f.grams.assign(sequence.begin() + static_cast<std::ptrdiff_t>(i),
                sequence.begin() + static_cast<std::ptrdiff_t>(i + n));
            ++counts[std::move(f)];
        }
    }
    return counts;
}

Vocabulary build_vocabulary(std::span<const NgramCounts> corpus, std::size_t min_df)
{
    if (corpus.empty())
        throw Error{ErrorKind::empty_corpus, "cannot build a vocabulary from an empty corpus"};

    std::map<NgramFeature, std::size_t> df;
    for (const auto& doc : corpus)
    {
        for (const auto& [feature, count] : doc)
        {
            if (count > 0)
                ++df[feature];
        }
    }

    std::vector<NgramFeature> features;
    std::vector<std::size_t> freq;
    for (auto& [feature, k] : df)
    {
        if (k < min_df)
            continue;
        features.push_back(feature);
        freq.push_back(k);
    }
    return Vocabulary{std::move(features), std::move(freq), corpus.size()};
}

std::vector<double> tfidf_encode(const NgramCounts& counts, const Vocabulary& vocab)
{
    std::vector<double> row(vocab.size(), 0.0);
    for (const auto& [feature, count] : counts)
    {
        if (const auto col = vocab.column(feature))
            row[*col] = static_cast<double>(count) * vocab.idf(*col);
    }
    return row;
}

namespace
{
FeatureMatrix make_matrix_shell(
    std::span<const OpcodeSequence> corpus, const std::optional<std::vector<int>>& labels)
{
    if (corpus.empty())
        throw Error{ErrorKind::empty_corpus, "cannot build a feature matrix from an empty corpus"};
    if (labels && labels->size() != corpus.size())
        throw Error{ErrorKind::label_length_mismatch,
            std::to_string(labels->size()) + " labels for " + std::to_string(corpus.size()) +
                " contracts"};

    FeatureMatrix fm;
    fm.labels = labels;
    fm.row_ids.reserve(corpus.size());
    for (std::size_t i = 0; i < corpus.size(); ++i)
        fm.row_ids.push_back(corpus[i].source_id.value_or(std::to_string(i)));
    return fm;
}
}  // namespace

std::pair<Vocabulary, FeatureMatrix> build_feature_matrix(std::span<const OpcodeSequence> corpus,
    const std::optional<std::vector<int>>& labels, std::span<const int> orders, std::size_t min_df)
{
    EncoderSpec spec;
    spec.kind = EncoderKind::ngram_tfidf;
    spec.orders.assign(orders.begin(), orders.end());
    spec.min_df = min_df;
    return build_feature_matrix(corpus, labels, spec);
}

std::pair<Vocabulary, FeatureMatrix> build_feature_matrix(std::span<const OpcodeSequence> corpus,
    const std::optional<std::vector<int>>& labels, const EncoderSpec& encoder)
{
    auto fm = make_matrix_shell(corpus, labels);
    const auto orders = encoder.effective_orders();

    std::vector<NgramCounts> counts;
    counts.reserve(corpus.size());
    for (const auto& seq : corpus)
        counts.push_back(extract_ngrams(seq.mnemonics, orders));
    auto vocab = build_vocabulary(counts, encoder.min_df);

    if (encoder.kind == EncoderKind::integer)
    {
        fm.values = encode_rows(corpus, vocab, encoder);
        return {std::move(vocab), std::move(fm)};
    }

    fm.values = Matrix{corpus.size(), vocab.size()};
    for (std::size_t i = 0; i < counts.size(); ++i)
    {
        const auto row = tfidf_encode(counts[i], vocab);
        std::copy(row.begin(), row.end(), fm.values.row(i).begin());
    }
    return {std::move(vocab), std::move(fm)};
}

IntegerEncoding IntegerEncoding::from_opcode_table(std::size_t length)
{
    std::set<std::string_view> names;
    for (const auto& spec : opcode_table())
        names.insert(spec.mnemonic);

    IntegerEncoding enc;
    enc.length = length;
    int64_t code = 1;
    for (const auto name : names)
        enc.mapping.emplace(std::string{name}, code++);
    return enc;
}

std::vector<int64_t> integer_encode(
    std::span<const std::string> sequence, const IntegerEncoding& encoding)
{
    std::vector<int64_t> out(encoding.length, 0);
    const auto n = std::min(sequence.size(), encoding.length);
    for (std::size_t i = 0; i < n; ++i)
    {
        const auto it = encoding.mapping.find(sequence[i]);
        if (it == encoding.mapping.end())
            throw Error{ErrorKind::unknown_mnemonic, "no integer code for '" + sequence[i] + "'"};
        out[i] = it->second;
    }
    return out;
}

Matrix encode_rows(
    std::span<const OpcodeSequence> sequences, const Vocabulary& vocab, const EncoderSpec& encoder)
{
    if (encoder.kind == EncoderKind::integer)
    {
        const auto enc = IntegerEncoding::from_opcode_table(encoder.length);
        Matrix m{sequences.size(), encoder.length};
        for (std::size_t i = 0; i < sequences.size(); ++i)
        {
            const auto codes = integer_encode(sequences[i].mnemonics, enc);
            std::transform(codes.begin(), codes.end(), m.row(i).begin(),
                [](int64_t c) { return static_cast<double>(c); });
        }
        return m;
    }

    const auto orders = encoder.effective_orders();
    Matrix m{sequences.size(), vocab.size()};
    for (std::size_t i = 0; i < sequences.size(); ++i)
    {
        const auto row = tfidf_encode(extract_ngrams(sequences[i].mnemonics, orders), vocab);
        std::copy(row.begin(), row.end(), m.row(i).begin());
    }
    return m;
}

std::string vocabulary_to_json(const Vocabulary& vocab, const EncoderSpec& encoder)
{
    nlohmann::ordered_json j;
    j["corpus_size"] = vocab.corpus_size();
    auto features = nlohmann::ordered_json::array();
    for (std::size_t i = 0; i < vocab.size(); ++i)
    {
        nlohmann::ordered_json f;
        f["grams"] = vocab.features()[i].grams;
        f["df"] = vocab.doc_freq()[i];
        features.push_back(std::move(f));
    }
    j["features"] = std::move(features);
    nlohmann::ordered_json enc;
    enc["kind"] = to_string(encoder.kind);
    enc["orders"] = encoder.orders;
    enc["length"] = encoder.length;
    enc["min_df"] = encoder.min_df;
    j["encoder"] = std::move(enc);
    return j.dump(2) + "\n";
}

LoadedVocabulary vocabulary_from_json(std::string_view text)
{
    try
    {
        const auto j = nlohmann::json::parse(text);
        std::vector<NgramFeature> features;
        std::vector<std::size_t> df;
        for (const auto& f : j.at("features"))
        {
            features.push_back(NgramFeature{f.at("grams").get<std::vector<std::string>>()});
            df.push_back(f.at("df").get<std::size_t>());
        }
        LoadedVocabulary out{
            Vocabulary{std::move(features), std::move(df), j.at("corpus_size").get<std::size_t>()},
            EncoderSpec{}};
        if (j.contains("encoder"))
        {
            const auto& e = j["encoder"];
            out.encoder.kind = parse_encoder_kind(e.at("kind").get<std::string>());
            out.encoder.orders = e.value("orders", std::vector<int>{1, 2});
            out.encoder.length = e.value("length", std::size_t{2048});
            out.encoder.min_df = e.value("min_df", std::size_t{1});
        }
        return out;
    }
    catch (const nlohmann::json::exception& e)
    {
        throw Error{ErrorKind::parse_error, std::string{"vocabulary: "} + e.what()};
    }
    catch (const Error& e)
    {
        throw Error{ErrorKind::parse_error, std::string{"vocabulary: "} + e.what()};
    }
}

void write_matrix(std::ostream& out, const Matrix& m)
{
    out << m.rows() << ' ' << m.cols() << '\n';
    for (std::size_t r = 0; r < m.rows(); ++r)
    {
        const auto row = m.row(r);
        for (std::size_t c = 0; c < row.size(); ++c)
        {
            if (c > 0)
                out << ' ';
            out << format_number(row[c]);
        }
        out << '\n';
    }
}

Matrix read_matrix(std::istream& in)
{
    std::size_t rows = 0;
    std::size_t cols = 0;
    if (!(in >> rows >> cols))
        throw Error{ErrorKind::parse_error, "matrix header must be 'rows cols'"};
    Matrix m{rows, cols};
    for (auto& x : m.data())
    {
        std::string token;
        if (!(in >> token))
            throw Error{ErrorKind::parse_error, "matrix has fewer entries than its header"};
        const auto* last = token.data() + token.size();
        const auto [ptr, ec] = std::from_chars(token.data(), last, x);
        if (ec != std::errc{} || ptr != last || !std::isfinite(x))
            throw Error{ErrorKind::parse_error, "bad matrix entry '" + token + "'"};
    }
    std::string extra;
    if (in >> extra)
        throw Error{ErrorKind::parse_error, "matrix has more entries than its header"};
    return m;
}
}  // namespace evmscan
