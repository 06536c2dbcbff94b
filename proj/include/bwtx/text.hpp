// Copyright 2026 The bwtx Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "bwtx/error.hpp"

namespace bwtx {

using Bytes = std::vector<std::uint8_t>;
using ByteView = std::span<const std::uint8_t>;

/// Row, column and text offsets. Transforms are limited to texts that fit this type.
using index_t = std::uint32_t;

inline constexpr std::size_t kMaxAugmentedLength = std::numeric_limits<index_t>::max() - 1;

inline Bytes to_bytes(std::string_view s) { return Bytes(s.begin(), s.end()); }

inline std::string to_string(ByteView b) { return std::string(b.begin(), b.end()); }

inline ByteView as_bytes(std::string_view s) {
    return {reinterpret_cast<const std::uint8_t*>(s.data()), s.size()};
}

/// Printable ASCII passes through; everything else (and the backslash) becomes \xNN.
inline std::string escape_bytes(ByteView bytes) {
    static constexpr char kHex[] = "0123456789abcdef";
    std::string out;
    out.reserve(bytes.size());
    for (std::uint8_t b : bytes) {
        if (b >= 0x20 && b < 0x7f && b != '\\') {
            out.push_back(static_cast<char>(b));
        } else {
            out += "\\x";
            out.push_back(kHex[b >> 4]);
            out.push_back(kHex[b & 0xf]);
        }
    }
    return out;
}

inline std::string escape_byte(std::uint8_t b) { return escape_bytes(ByteView(&b, 1)); }

/// '$' when free, otherwise the first byte in 0x00..0xFF that the data does not use.
inline std::uint8_t select_end_marker(ByteView data) {
    if (data.empty()) throw Error(ErrorCode::EmptyText, "input text is empty");
    std::array<bool, 256> used{};
    for (std::uint8_t b : data) used[b] = true;
    if (!used['$']) return '$';
    for (unsigned b = 0; b < 256; ++b) {
        if (!used[b]) return static_cast<std::uint8_t>(b);
    }
    throw Error(ErrorCode::NoEndMarkerAvailable, "all 256 byte values occur in the text");
}

/// Input bytes plus the end marker that conceptually terminates them.
///
/// The augmented text T' = data + end_marker has length m = n + 1 and is never
/// materialized; use at() to read it.
class TextBuffer {
public:
    explicit TextBuffer(Bytes data) : data_(std::move(data)) {
        validate_size();
        end_marker_ = select_end_marker(data_);
        count();
    }

    TextBuffer(Bytes data, std::uint8_t end_marker) : data_(std::move(data)), end_marker_(end_marker) {
        validate_size();
        count();
        if (counts_[end_marker_] != 0) {
            throw Error(ErrorCode::MalformedSpec, "end marker " + escape_byte(end_marker_) + " occurs in the text");
        }
    }

    static TextBuffer from_string(std::string_view s) { return TextBuffer(to_bytes(s)); }

    ByteView data() const noexcept { return data_; }
    std::size_t size() const noexcept { return data_.size(); }
    std::size_t augmented_size() const noexcept { return data_.size() + 1; }
    std::uint8_t end_marker() const noexcept { return end_marker_; }

    /// Byte i of T'.
    std::uint8_t at(std::size_t i) const noexcept { return i < data_.size() ? data_[i] : end_marker_; }

    const std::array<std::uint64_t, 256>& counts() const noexcept { return counts_; }
    bool contains(std::uint8_t b) const noexcept { return counts_[b] != 0; }

    /// Distinct data bytes in ascending value.
    Bytes alphabet() const {
        Bytes out;
        for (unsigned b = 0; b < 256; ++b) {
            if (counts_[b] != 0) out.push_back(static_cast<std::uint8_t>(b));
        }
        return out;
    }

    friend bool operator==(const TextBuffer& a, const TextBuffer& b) {
        return a.end_marker_ == b.end_marker_ && a.data_ == b.data_;
    }

private:
    void validate_size() const {
        if (data_.empty()) throw Error(ErrorCode::EmptyText, "input text is empty");
        if (data_.size() + 1 > kMaxAugmentedLength) {
            throw Error(ErrorCode::TextTooLarge, "text of " + std::to_string(data_.size()) + " bytes is too large");
        }
    }

    void count() noexcept {
        counts_.fill(0);
        for (std::uint8_t b : data_) ++counts_[b];
    }

    Bytes data_;
    std::uint8_t end_marker_ = '$';
    std::array<std::uint64_t, 256> counts_{};
};

}  // namespace bwtx
