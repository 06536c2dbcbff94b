// Copyright 2026 The bwtx Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "bwtx/error.hpp"
#include "bwtx/transform.hpp"

namespace bwtx {

/// Half-open row interval.
struct RowInterval {
    index_t lo = 0;
    index_t hi = 0;

    bool empty() const noexcept { return lo >= hi; }
    index_t size() const noexcept { return empty() ? 0 : hi - lo; }
    bool contains(index_t row) const noexcept { return row >= lo && row < hi; }
    friend bool operator==(const RowInterval&, const RowInterval&) = default;
};

/// Byte at (row, col) of the rotation matrix, read through the suffix array.
inline std::uint8_t cell(const Transform& t, index_t row, index_t col) {
    const index_t m = t.size();
    if (row >= m || col >= m) {
        throw Error(ErrorCode::OutOfBounds, "cell (" + std::to_string(row) + ", " + std::to_string(col) +
                                                ") outside a " + std::to_string(m) + "x" + std::to_string(m) + " matrix");
    }
    const std::uint64_t pos = std::uint64_t{t.sa()[row]} + col;
    return t.text().at(pos >= m ? pos - m : pos);
}

inline std::uint8_t first_column(const Transform& t, index_t row) { return cell(t, row, 0); }

inline constexpr index_t kDefaultWindowRows = 64;
inline constexpr index_t kDefaultWindowCols = 64;

struct WindowSpec {
    index_t top_row = 0;
    index_t left_col = 0;
    index_t height = kDefaultWindowRows;
    index_t width = kDefaultWindowCols;
};

/// Materialized slice of the matrix. Dimensions are after clipping.
struct WindowGrid {
    index_t top_row = 0;
    index_t left_col = 0;
    index_t height = 0;
    index_t width = 0;
    index_t matrix_size = 0;
    Bytes cells;               // row-major, height * width
    Bytes last_column;         // L for the window's rows
    std::vector<bool> truncated;

    ByteView row(index_t i) const { return ByteView(cells).subspan(std::size_t{i} * width, width); }
    std::uint8_t at(index_t i, index_t j) const { return cells[std::size_t{i} * width + j]; }
};

inline WindowGrid window(const Transform& t, const WindowSpec& spec) {
    const index_t m = t.size();
    if (spec.top_row >= m || spec.left_col >= m || spec.height == 0 || spec.width == 0) {
        throw Error(ErrorCode::OutOfBounds, "window at (" + std::to_string(spec.top_row) + ", " +
                                                std::to_string(spec.left_col) + ") of size " +
                                                std::to_string(spec.height) + "x" + std::to_string(spec.width) +
                                                " is outside a matrix of " + std::to_string(m) + " rows");
    }
    WindowGrid grid;
    grid.top_row = spec.top_row;
    grid.left_col = spec.left_col;
    grid.height = std::min<index_t>(spec.height, m - spec.top_row);
    grid.width = std::min<index_t>(spec.width, m - spec.left_col);
    grid.matrix_size = m;
    grid.cells.resize(std::size_t{grid.height} * grid.width);
    grid.last_column.resize(grid.height);
    grid.truncated.assign(grid.height, grid.width < m);

    const auto sa = t.sa();
    for (index_t i = 0; i < grid.height; ++i) {
        const index_t row = grid.top_row + i;
        std::uint64_t pos = std::uint64_t{sa[row]} + grid.left_col;
        if (pos >= m) pos -= m;
        std::uint8_t* out = grid.cells.data() + std::size_t{i} * grid.width;
        for (index_t j = 0; j < grid.width; ++j) {
            out[j] = t.text().at(pos);
            if (++pos == m) pos = 0;
        }
        grid.last_column[i] = t.last_column()[row];
    }
    return grid;
}

namespace detail {

// Compares the first |pattern| bytes of the rotation at row against pattern
// under the transform's ranks; wraps cyclically.
inline int compare_prefix(const Transform& t, index_t row, ByteView pattern) {
    const auto& ord = t.ordering();
    const index_t m = t.size();
    std::uint64_t pos = t.sa()[row];
    for (std::uint8_t p : pattern) {
        const auto a = ord.rank(t.text().at(pos));
        const auto b = ord.rank(p);
        if (a != b) return a < b ? -1 : 1;
        if (++pos == m) pos = 0;
    }
    return 0;
}

}  // namespace detail

/// Rows whose rotation starts with pattern, by two binary searches.
inline RowInterval prefix_search(const Transform& t, ByteView pattern) {
    if (pattern.empty()) return {};
    for (std::uint8_t b : pattern) {
        if (t.ordering().rank(b) == AlphabetOrdering::kAbsent) return {};
    }
    index_t lo = 0, hi = t.size();
    while (lo < hi) {
        const index_t mid = lo + (hi - lo) / 2;
        if (detail::compare_prefix(t, mid, pattern) < 0) lo = mid + 1; else hi = mid;
    }
    const index_t first = lo;
    hi = t.size();
    while (lo < hi) {
        const index_t mid = lo + (hi - lo) / 2;
        if (detail::compare_prefix(t, mid, pattern) <= 0) lo = mid + 1; else hi = mid;
    }
    return {first, lo};
}

enum class Direction { forward, backward };

/// Nearest matching row strictly after (forward) or before (backward) from_row.
inline std::optional<index_t> find_match(const Transform& t, ByteView pattern, index_t from_row, Direction direction) {
    if (from_row >= t.size()) {
        throw Error(ErrorCode::OutOfBounds, "row " + std::to_string(from_row) + " is outside the matrix");
    }
    const RowInterval hits = prefix_search(t, pattern);
    if (hits.empty()) return std::nullopt;
    if (direction == Direction::forward) {
        const index_t candidate = std::max<index_t>(hits.lo, from_row + 1);
        if (candidate < hits.hi) return candidate;
    } else if (from_row > 0) {
        const index_t candidate = std::min<index_t>(hits.hi - 1, from_row - 1);
        if (candidate >= hits.lo) return candidate;
    }
    return std::nullopt;
}

/// Row of dst that holds the same rotation as row of src.
inline index_t locate_row(const Transform& src, index_t row, const Transform& dst) {
    if (src.text_ptr() != dst.text_ptr() && !(src.text() == dst.text())) {
        throw Error(ErrorCode::TextMismatch, "transforms were built from different texts");
    }
    if (row >= src.size()) throw Error(ErrorCode::OutOfBounds, "row " + std::to_string(row) + " is outside the matrix");
    return dst.isa()[src.sa()[row]];
}

}  // namespace bwtx
