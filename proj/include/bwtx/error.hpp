// Copyright 2026 The bwtx Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace bwtx {

enum class ErrorCode {
    EmptyText,
    TextTooLarge,
    NoEndMarkerAvailable,
    PresetUnavailable,
    UnknownPreset,
    DuplicateCharacter,
    MissingCharacters,
    UnknownCharacter,
    MalformedSpec,
    NotAValidTransform,
    OracleBoundExceeded,
    OutOfBounds,
    TextMismatch,
    CycleDetected,
    EndMarkerConstraint,
    WriteFailure,
    CorruptFile,
    VersionUnsupported,
    CacheInvalid,
};

constexpr std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::EmptyText: return "EmptyText";
        case ErrorCode::TextTooLarge: return "TextTooLarge";
        case ErrorCode::NoEndMarkerAvailable: return "NoEndMarkerAvailable";
        case ErrorCode::PresetUnavailable: return "PresetUnavailable";
        case ErrorCode::UnknownPreset: return "UnknownPreset";
        case ErrorCode::DuplicateCharacter: return "DuplicateCharacter";
        case ErrorCode::MissingCharacters: return "MissingCharacters";
        case ErrorCode::UnknownCharacter: return "UnknownCharacter";
        case ErrorCode::MalformedSpec: return "MalformedSpec";
        case ErrorCode::NotAValidTransform: return "NotAValidTransform";
        case ErrorCode::OracleBoundExceeded: return "OracleBoundExceeded";
        case ErrorCode::OutOfBounds: return "OutOfBounds";
        case ErrorCode::TextMismatch: return "TextMismatch";
        case ErrorCode::CycleDetected: return "CycleDetected";
        case ErrorCode::EndMarkerConstraint: return "EndMarkerConstraint";
        case ErrorCode::WriteFailure: return "WriteFailure";
        case ErrorCode::CorruptFile: return "CorruptFile";
        case ErrorCode::VersionUnsupported: return "VersionUnsupported";
        case ErrorCode::CacheInvalid: return "CacheInvalid";
    }
    return "Unknown";
}

/// All library failures are reported as an Error carrying one of the codes above.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code), detail_(message) {}

    ErrorCode code() const noexcept { return code_; }
    const std::string& detail() const noexcept { return detail_; }

private:
    ErrorCode code_;
    std::string detail_;
};

}  // namespace bwtx
