// Copyright 2026 The bwtx Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

// Quadratic reference construction used by the test suites. Not included by bwtx.hpp.

#include <algorithm>
#include <memory>
#include <vector>

#include "bwtx/transform.hpp"

namespace bwtx {

inline constexpr std::size_t kDefaultOracleBound = 4096;

/// Materializes every rotation as a rank sequence and sorts them.
inline Transform naive_bwt(std::shared_ptr<const TextBuffer> text, AlphabetOrdering ordering,
                           std::size_t bound = kDefaultOracleBound) {
    const std::size_t m = text->augmented_size();
    if (m > bound) {
        throw Error(ErrorCode::OracleBoundExceeded,
                    "naive construction limited to " + std::to_string(bound) + " rows, got " + std::to_string(m));
    }
    detail::require_cover(*text, ordering);

    struct Rotation {
        std::vector<std::uint16_t> ranks;
        index_t start;
    };
    std::vector<Rotation> rotations;
    rotations.reserve(m);
    for (std::size_t start = 0; start < m; ++start) {
        Rotation rot{std::vector<std::uint16_t>(m), static_cast<index_t>(start)};
        for (std::size_t j = 0; j < m; ++j) rot.ranks[j] = ordering.rank(text->at((start + j) % m));
        rotations.push_back(std::move(rot));
    }
    std::sort(rotations.begin(), rotations.end(),
              [](const Rotation& a, const Rotation& b) { return a.ranks < b.ranks; });

    std::vector<index_t> sa(m);
    std::vector<index_t> isa(m);
    Bytes last(m);
    for (std::size_t row = 0; row < m; ++row) {
        sa[row] = rotations[row].start;
        isa[sa[row]] = static_cast<index_t>(row);
        last[row] = text->at((sa[row] + m - 1) % m);
    }
    return Transform(std::move(text), std::move(ordering), std::move(sa), std::move(isa), std::move(last));
}

inline Transform naive_bwt(const TextBuffer& text, AlphabetOrdering ordering, std::size_t bound = kDefaultOracleBound) {
    return naive_bwt(std::make_shared<const TextBuffer>(text), std::move(ordering), bound);
}

}  // namespace bwtx
