// evmscan: bytecode-level vulnerability detection for EVM smart contracts
// Copyright 2026 The evmscan Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <evmscan/cfg.hpp>
#include <evmscan/matrix.hpp>

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace evmscan
{
/// A window of consecutive mnemonics. Ordered by (order, mnemonic tuple).
struct NgramFeature
{
    std::vector<std::string> grams;

    [[nodiscard]] std::size_t order() const noexcept { return grams.size(); }

    friend bool operator==(const NgramFeature&, const NgramFeature&) = default;
    friend std::strong_ordering operator<=>(const NgramFeature& a, const NgramFeature& b)
    {
        if (const auto c = a.grams.size() <=> b.grams.size(); c != 0)
            return c;
        return a.grams <=> b.grams;
    }
};

using NgramCounts = std::map<NgramFeature, std::size_t>;

/// Column space of the feature matrix, frozen once built.
class Vocabulary
{
public:
    Vocabulary() = default;
    /// features must be strictly ascending; doc_freq aligned with features.
    Vocabulary(std::vector<NgramFeature> features, std::vector<std::size_t> doc_freq,
        std::size_t corpus_size);

    [[nodiscard]] std::size_t size() const noexcept { return m_features.size(); }
    [[nodiscard]] std::size_t corpus_size() const noexcept { return m_corpus_size; }
    [[nodiscard]] const std::vector<NgramFeature>& features() const noexcept { return m_features; }
    [[nodiscard]] const std::vector<std::size_t>& doc_freq() const noexcept { return m_doc_freq; }

    [[nodiscard]] std::optional<std::size_t> column(const NgramFeature& f) const;

    /// ln((1 + N) / (1 + df)) + 1.
    [[nodiscard]] double idf(std::size_t column) const;

    friend bool operator==(const Vocabulary& a, const Vocabulary& b)
    {
        return a.m_features == b.m_features && a.m_doc_freq == b.m_doc_freq &&
               a.m_corpus_size == b.m_corpus_size;
    }

private:
    std::vector<NgramFeature> m_features;
    std::vector<std::size_t> m_doc_freq;
    std::size_t m_corpus_size = 0;
    std::map<NgramFeature, std::size_t> m_index;
};

struct FeatureMatrix
{
    Matrix values;
    std::vector<std::string> row_ids;
    std::optional<std::vector<int>> labels;
};

enum class EncoderKind
{
    ngram_tfidf,
    unigram_tfidf,
    integer,
};

[[nodiscard]] std::string_view to_string(EncoderKind kind) noexcept;
/// Throws Error{invalid_argument} for unknown names.
[[nodiscard]] EncoderKind parse_encoder_kind(std::string_view name);

/// How contracts are turned into rows.
struct EncoderSpec
{
    EncoderKind kind = EncoderKind::ngram_tfidf;
    /// n-gram orders for the TFIDF encoders.
    std::vector<int> orders = {1, 2};
    /// Fixed row length for the integer encoder.
    std::size_t length = 2048;
    /// Features seen in fewer contracts than this are dropped from the vocabulary.
    std::size_t min_df = 1;

    /// The orders actually used: {1} for unigram_tfidf, `orders` otherwise.
    [[nodiscard]] std::vector<int> effective_orders() const;
};

/// Sliding-window n-grams with occurrence counts for every requested order.
/// Orders must be non-empty and positive.
[[nodiscard]] NgramCounts extract_ngrams(
    std::span<const std::string> sequence, std::span<const int> orders);

/// Throws Error{empty_corpus} when the corpus is empty.
[[nodiscard]] Vocabulary build_vocabulary(std::span<const NgramCounts> corpus, std::size_t min_df = 1);

/// tf = raw count, idf as Vocabulary::idf(); features outside the vocabulary are ignored.
[[nodiscard]] std::vector<double> tfidf_encode(const NgramCounts& counts, const Vocabulary& vocab);

/// Builds the vocabulary over the whole corpus and encodes every contract against it.
/// Throws Error{empty_corpus} or Error{label_length_mismatch}.
[[nodiscard]] std::pair<Vocabulary, FeatureMatrix> build_feature_matrix(
    std::span<const OpcodeSequence> corpus, const std::optional<std::vector<int>>& labels,
    std::span<const int> orders = std::vector<int>{1, 2}, std::size_t min_df = 1);

/// As above, with the encoder deciding orders and row encoding. For the integer encoder
/// the vocabulary holds unigram statistics and rows are the padded integer codes.
[[nodiscard]] std::pair<Vocabulary, FeatureMatrix> build_feature_matrix(
    std::span<const OpcodeSequence> corpus, const std::optional<std::vector<int>>& labels,
    const EncoderSpec& encoder);

/// Mnemonic to positive code; 0 is reserved for padding.
struct IntegerEncoding
{
    std::map<std::string, int64_t, std::less<>> mapping;
    std::size_t length = 2048;

    /// Codes 1..K over every distinct mnemonic of the opcode table, alphabetical.
    [[nodiscard]] static IntegerEncoding from_opcode_table(std::size_t length = 2048);
};

/// Maps in order, zero-pads to `length`, keeps only the first `length` codes.
/// Throws Error{unknown_mnemonic}.
[[nodiscard]] std::vector<int64_t> integer_encode(
    std::span<const std::string> sequence, const IntegerEncoding& encoding);

/// Encodes sequences against a frozen vocabulary (TFIDF encoders) or the opcode table
/// (integer encoder). The vocabulary is ignored for the integer encoder.
[[nodiscard]] Matrix encode_rows(std::span<const OpcodeSequence> sequences,
    const Vocabulary& vocab, const EncoderSpec& encoder);

/// {"corpus_size": N, "features": [{"grams": [...], "df": k}, ...], "encoder": {...}}
[[nodiscard]] std::string vocabulary_to_json(const Vocabulary& vocab, const EncoderSpec& encoder);

struct LoadedVocabulary
{
    Vocabulary vocabulary;
    EncoderSpec encoder;
};

/// Throws Error{parse_error}. A missing "encoder" object means the n-gram TFIDF defaults.
[[nodiscard]] LoadedVocabulary vocabulary_from_json(std::string_view text);

/// Header "rows cols", then one space-separated row per line.
void write_matrix(std::ostream& out, const Matrix& m);
/// Throws Error{parse_error}.
[[nodiscard]] Matrix read_matrix(std::istream& in);
}  // namespace evmscan
