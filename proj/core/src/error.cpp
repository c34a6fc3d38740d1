// evmscan: bytecode-level vulnerability detection for EVM smart contracts
// Copyright 2026 The evmscan Authors.
// SPDX-License-Identifier: Apache-2.0

#include <evmscan/error.hpp>

namespace evmscan
{
std::string_view to_string(ErrorKind kind) noexcept
{
    switch (kind)
    {
    case ErrorKind::malformed_hex:
        return "MalformedHex";
    case ErrorKind::empty_graph:
        return "EmptyGraph";
    case ErrorKind::empty_corpus:
        return "EmptyCorpus";
    case ErrorKind::label_length_mismatch:
        return "LabelLengthMismatch";
    case ErrorKind::unknown_mnemonic:
        return "UnknownMnemonic";
    case ErrorKind::dimension_mismatch:
        return "DimensionMismatch";
    case ErrorKind::single_class_dataset:
        return "SingleClassDataset";
    case ErrorKind::empty_dataset:
        return "EmptyDataset";
    case ErrorKind::length_mismatch:
        return "LengthMismatch";
    case ErrorKind::empty_evaluation:
        return "EmptyEvaluation";
    case ErrorKind::k_too_large:
        return "KTooLarge";
    case ErrorKind::insufficient_samples:
        return "InsufficientSamples";
    case ErrorKind::empty_measurements:
        return "EmptyMeasurements";
    case ErrorKind::file_not_found:
        return "FileNotFound";
    case ErrorKind::parse_error:
        return "ParseError";
    case ErrorKind::transport:
        return "Transport";
    case ErrorKind::rpc_error:
        return "RpcError";
    case ErrorKind::empty_code:
        return "EmptyCode";
    case ErrorKind::missing_verdicts:
        return "MissingVerdicts";
    case ErrorKind::missing_labels:
        return "MissingLabels";
    case ErrorKind::vocabulary_mismatch:
        return "VocabularyMismatch";
    case ErrorKind::invalid_argument:
        return "InvalidArgument";
    case ErrorKind::io_error:
        return "IoError";
    }
    return "Unknown";
}
}  // namespace evmscan
