// Copyright 2026 The bwtx Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "bwtx/text.hpp"

namespace bwtx {

namespace instrumentation {

/// Number of suffix-array constructions performed by this process.
inline std::atomic<std::uint64_t> sa_constructions{0};

}  // namespace instrumentation

namespace detail {

inline constexpr index_t kEmpty = std::numeric_limits<index_t>::max();

// Induced sorting (SA-IS). s[0..n) over {0..k-1}, s[n-1] == 0 and unique.
// The reduced problem is stored in the tail of sa, so extra space is the type
// bitvector plus two bucket arrays of size k.
template <typename CharT>
void sais(const CharT* s, index_t* sa, index_t n, index_t k) {
    if (n == 1) {
        sa[0] = 0;
        return;
    }

    std::vector<bool> stype(n);
    stype[n - 1] = true;
    for (index_t i = n - 1; i-- > 0;) {
        stype[i] = s[i] < s[i + 1] || (s[i] == s[i + 1] && stype[i + 1]);
    }
    auto is_lms = [&](index_t i) { return i > 0 && i != kEmpty && stype[i] && !stype[i - 1]; };

    std::vector<index_t> counts(k, 0);
    for (index_t i = 0; i < n; ++i) ++counts[s[i]];
    std::vector<index_t> bkt(k);
    auto heads = [&] {
        index_t sum = 0;
        for (index_t c = 0; c < k; ++c) {
            bkt[c] = sum;
            sum += counts[c];
        }
    };
    auto tails = [&] {
        index_t sum = 0;
        for (index_t c = 0; c < k; ++c) {
            sum += counts[c];
            bkt[c] = sum;
        }
    };
    auto induce = [&] {
        heads();
        for (index_t i = 0; i < n; ++i) {
            const index_t j = sa[i];
            if (j != kEmpty && j > 0 && !stype[j - 1]) sa[bkt[s[j - 1]]++] = j - 1;
        }
        tails();
        for (index_t i = n; i-- > 0;) {
            const index_t j = sa[i];
            if (j != kEmpty && j > 0 && stype[j - 1]) sa[--bkt[s[j - 1]]] = j - 1;
        }
    };

    // Sort LMS substrings.
    std::fill(sa, sa + n, kEmpty);
    tails();
    for (index_t i = n; i-- > 1;) {
        if (is_lms(i)) sa[--bkt[s[i]]] = i;
    }
    induce();

    index_t n1 = 0;
    for (index_t i = 0; i < n; ++i) {
        if (is_lms(sa[i])) sa[n1++] = sa[i];
    }

    // Name them; equal LMS substrings get equal names.
    std::fill(sa + n1, sa + n, kEmpty);
    index_t names = 0;
    index_t prev = kEmpty;
    for (index_t i = 0; i < n1; ++i) {
        const index_t pos = sa[i];
        bool diff = prev == kEmpty;
        for (index_t d = 0; !diff; ++d) {
            if (s[pos + d] != s[prev + d] || stype[pos + d] != stype[prev + d]) {
                diff = true;
            } else if (d > 0 && (is_lms(pos + d) || is_lms(prev + d))) {
                break;
            }
        }
        if (diff) {
            ++names;
            prev = pos;
        }
        sa[n1 + pos / 2] = names - 1;
    }
    for (index_t i = n, j = n; i-- > n1;) {
        if (sa[i] != kEmpty) sa[--j] = sa[i];
    }

    index_t* reduced = sa + n - n1;
    if (names < n1) {
        sais<index_t>(reduced, sa, n1, names);
    } else {
        for (index_t i = 0; i < n1; ++i) sa[reduced[i]] = i;
    }

    // Map reduced ranks back to LMS positions, then induce the full order.
    for (index_t i = 1, j = 0; i < n; ++i) {
        if (is_lms(i)) reduced[j++] = i;
    }
    for (index_t i = 0; i < n1; ++i) sa[i] = reduced[sa[i]];
    std::fill(sa + n1, sa + n, kEmpty);
    tails();
    for (index_t i = n1; i-- > 0;) {
        const index_t p = sa[i];
        sa[i] = kEmpty;
        sa[--bkt[s[p]]] = p;
    }
    induce();
}

}  // namespace detail

/// Suffix array of a ranked text whose last symbol is 0 and occurs nowhere else.
/// alphabet_size is one more than the largest symbol.
template <typename CharT>
std::vector<index_t> suffix_array(std::span<const CharT> ranked, index_t alphabet_size) {
    instrumentation::sa_constructions.fetch_add(1, std::memory_order_relaxed);
    std::vector<index_t> sa(ranked.size());
    if (!ranked.empty()) detail::sais<CharT>(ranked.data(), sa.data(), static_cast<index_t>(ranked.size()), alphabet_size);
    return sa;
}

}  // namespace bwtx
