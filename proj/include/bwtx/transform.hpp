// Copyright 2026 The bwtx Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "bwtx/error.hpp"
#include "bwtx/ordering.hpp"
#include "bwtx/suffix_array.hpp"
#include "bwtx/text.hpp"

namespace bwtx {

/// Number of maximal equal-byte runs.
inline std::size_t run_count(ByteView last_column) {
    if (last_column.empty()) return 0;
    std::size_t r = 1;
    for (std::size_t i = 1; i < last_column.size(); ++i) r += last_column[i] != last_column[i - 1];
    return r;
}

/// Bytes taken by a (symbol, length) pair encoding where runs longer than 255
/// are split into chunks of at most 255.
inline std::size_t rle_length(ByteView last_column) {
    std::size_t pairs = 0;
    std::size_t i = 0;
    while (i < last_column.size()) {
        std::size_t j = i + 1;
        while (j < last_column.size() && last_column[j] == last_column[i]) ++j;
        pairs += (j - i + 254) / 255;
        i = j;
    }
    return 2 * pairs;
}

struct RunStatistics {
    std::uint8_t end_marker_used = '$';
    std::size_t original_size = 0;
    std::size_t run_count = 0;
    std::size_t rle_length = 0;

    friend bool operator==(const RunStatistics&, const RunStatistics&) = default;
};

inline RunStatistics compute_statistics(const TextBuffer& text, ByteView last_column) {
    return {text.end_marker(), text.size(), run_count(last_column), rle_length(last_column)};
}

/// A built BWT: suffix array, its inverse and the last column of the
/// conceptual rotation matrix under one alphabet ordering. Immutable.
class Transform {
public:
    Transform(std::shared_ptr<const TextBuffer> text, AlphabetOrdering ordering, std::vector<index_t> sa,
              std::vector<index_t> isa, Bytes last_column)
        : text_(std::move(text)),
          ordering_(std::move(ordering)),
          sa_(std::move(sa)),
          isa_(std::move(isa)),
          last_column_(std::move(last_column)),
          stats_(compute_statistics(*text_, last_column_)) {}

    const TextBuffer& text() const noexcept { return *text_; }
    const std::shared_ptr<const TextBuffer>& text_ptr() const noexcept { return text_; }
    const AlphabetOrdering& ordering() const noexcept { return ordering_; }

    /// Number of rows (and columns) of the matrix, n + 1.
    index_t size() const noexcept { return static_cast<index_t>(sa_.size()); }

    std::span<const index_t> sa() const noexcept { return sa_; }
    std::span<const index_t> isa() const noexcept { return isa_; }
    ByteView last_column() const noexcept { return last_column_; }
    const RunStatistics& stats() const noexcept { return stats_; }

private:
    std::shared_ptr<const TextBuffer> text_;
    AlphabetOrdering ordering_;
    std::vector<index_t> sa_;
    std::vector<index_t> isa_;
    Bytes last_column_;
    RunStatistics stats_;
};

namespace detail {

inline void require_cover(const TextBuffer& text, const AlphabetOrdering& ordering) {
    if (ordering.end_marker() != text.end_marker()) {
        throw Error(ErrorCode::TextMismatch, "ordering was made for a different end marker");
    }
    for (std::uint8_t b : text.alphabet()) {
        if (!ordering.contains(b)) throw Error(ErrorCode::MissingCharacters, "ordering does not list '" + escape_byte(b) + "'");
    }
    if (ordering.sigma() != text.alphabet().size()) {
        throw Error(ErrorCode::UnknownCharacter, "ordering lists bytes absent from the text");
    }
}

inline std::vector<index_t> inverse_permutation(std::span<const index_t> perm) {
    std::vector<index_t> inv(perm.size());
    for (std::size_t i = 0; i < perm.size(); ++i) inv[perm[i]] = static_cast<index_t>(i);
    return inv;
}

/// LF mapping over L under the given ordering. Visits rows in text order from
/// the end: visit(row, text_position) for positions n, n-1, ..., 0.
/// Throws NotAValidTransform unless the walk is a single cycle through all rows.
template <typename Visit>
void walk_last_column(ByteView last_column, const AlphabetOrdering& ordering, Visit&& visit) {
    const std::size_t m = last_column.size();
    if (m < 2) throw Error(ErrorCode::NotAValidTransform, "last column must hold at least two bytes");
    if (m > kMaxAugmentedLength) throw Error(ErrorCode::TextTooLarge, "last column is too long");
    const std::uint8_t marker = ordering.end_marker();

    std::array<index_t, 257> starts{};
    std::size_t markers = 0;
    for (std::uint8_t b : last_column) {
        const auto r = ordering.rank(b);
        if (r == AlphabetOrdering::kAbsent) {
            throw Error(ErrorCode::NotAValidTransform, "byte '" + escape_byte(b) + "' is not in the ordering");
        }
        ++starts[r + 1];
        markers += b == marker;
    }
    if (markers != 1) {
        throw Error(ErrorCode::NotAValidTransform, "last column must contain the end marker exactly once");
    }
    for (std::size_t r = 1; r < starts.size(); ++r) starts[r] += starts[r - 1];

    std::vector<index_t> lf(m);
    for (std::size_t i = 0; i < m; ++i) lf[i] = starts[ordering.rank(last_column[i])]++;

    // Row 0 is the rotation that starts at the end marker.
    index_t row = 0;
    visit(row, m - 1);
    for (std::size_t pos = m - 1; pos-- > 0;) {
        if (last_column[row] == marker) {
            throw Error(ErrorCode::NotAValidTransform, "LF walk closes before visiting every row");
        }
        row = lf[row];
        visit(row, pos);
    }
    if (last_column[row] != marker || lf[row] != 0) {
        throw Error(ErrorCode::NotAValidTransform, "LF walk does not return to the first row");
    }
}

}  // namespace detail

/// Builds the transform with induced suffix sorting over rank-mapped bytes.
/// Since the end marker is unique and least, suffix order is rotation order.
inline Transform build_transform(std::shared_ptr<const TextBuffer> text, AlphabetOrdering ordering) {
    detail::require_cover(*text, ordering);
    const std::size_t n = text->size();
    const std::size_t m = n + 1;

    std::vector<index_t> sa;
    {
        Bytes ranked(m);
        for (std::size_t i = 0; i < n; ++i) ranked[i] = static_cast<std::uint8_t>(ordering.rank(text->data()[i]));
        ranked[n] = 0;
        sa = suffix_array<std::uint8_t>(ranked, static_cast<index_t>(ordering.sigma() + 1));
    }

    std::vector<index_t> isa = detail::inverse_permutation(sa);
    Bytes last(m);
    for (std::size_t i = 0; i < m; ++i) last[i] = text->at(sa[i] == 0 ? n : sa[i] - 1);
    return Transform(std::move(text), std::move(ordering), std::move(sa), std::move(isa), std::move(last));
}

inline Transform build_transform(const TextBuffer& text, AlphabetOrdering ordering) {
    return build_transform(std::make_shared<const TextBuffer>(text), std::move(ordering));
}

/// Recovers the data bytes (without end marker) from a last column.
inline Bytes invert(ByteView last_column, const AlphabetOrdering& ordering, std::uint8_t end_marker) {
    if (end_marker != ordering.end_marker()) {
        throw Error(ErrorCode::NotAValidTransform, "end marker does not match the ordering");
    }
    Bytes out(last_column.size() > 0 ? last_column.size() - 1 : 0);
    detail::walk_last_column(last_column, ordering, [&](index_t row, std::size_t pos) {
        if (pos > 0) out[pos - 1] = last_column[row];
    });
    return out;
}

/// Rebuilds a transform from a stored last column without suffix sorting.
/// Throws CacheInvalid if the column does not belong to text under ordering.
inline Transform transform_from_last_column(std::shared_ptr<const TextBuffer> text, AlphabetOrdering ordering,
                                            Bytes last_column) {
    detail::require_cover(*text, ordering);
    const std::size_t m = text->augmented_size();
    if (last_column.size() != m) {
        throw Error(ErrorCode::CacheInvalid, "cached column has length " + std::to_string(last_column.size()) +
                                                 ", expected " + std::to_string(m));
    }
    std::vector<index_t> sa(m);
    try {
        detail::walk_last_column(last_column, ordering, [&](index_t row, std::size_t pos) {
            // Predecessor byte of the rotation at pos is L[row]; check it against the text.
            const std::uint8_t expected = text->at(pos == 0 ? m - 1 : pos - 1);
            if (last_column[row] != expected) throw Error(ErrorCode::CacheInvalid, "cached column does not match the text");
            sa[row] = static_cast<index_t>(pos);
        });
    } catch (const Error& e) {
        if (e.code() == ErrorCode::CacheInvalid) throw;
        throw Error(ErrorCode::CacheInvalid, e.detail());
    }
    std::vector<index_t> isa = detail::inverse_permutation(sa);
    return Transform(std::move(text), std::move(ordering), std::move(sa), std::move(isa), std::move(last_column));
}

}  // namespace bwtx
