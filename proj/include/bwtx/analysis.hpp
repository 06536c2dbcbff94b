// Copyright 2026 The bwtx Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "bwtx/error.hpp"
#include "bwtx/matrix_view.hpp"
#include "bwtx/ordering.hpp"
#include "bwtx/transform.hpp"

namespace bwtx {

struct RunBreaker {
    index_t row = 0;
    std::uint8_t breaker = 0;
    std::uint8_t flanked_by = 0;

    friend bool operator==(const RunBreaker&, const RunBreaker&) = default;
};

/// Rows j with L[j-1] == L[j+1] != L[j].
inline std::vector<RunBreaker> run_breakers(ByteView last_column) {
    std::vector<RunBreaker> out;
    for (std::size_t j = 1; j + 1 < last_column.size(); ++j) {
        if (last_column[j - 1] == last_column[j + 1] && last_column[j] != last_column[j - 1]) {
            out.push_back({static_cast<index_t>(j), last_column[j], last_column[j - 1]});
        }
    }
    return out;
}

inline std::vector<RunBreaker> run_breakers(const Transform& t) { return run_breakers(t.last_column()); }

/// Runs of one byte in L that could merge if the rows between them moved away.
struct PotentialRun {
    std::uint8_t character = 0;
    std::vector<RowInterval> member_runs;
    std::vector<RowInterval> gaps;
    std::size_t total_length = 0;
    std::size_t total_gap = 0;
};

inline constexpr std::size_t kDefaultMaxGap = 4;

/// Groups consecutive runs of each byte whose combined gap length is at most
/// max_gap (so every single gap is too). Per byte, every maximal group of two
/// or more runs is reported, plus the longest run not covered by such a group.
/// Ordered by total_length desc, total_gap asc, byte asc, first row asc.
inline std::vector<PotentialRun> potential_runs(ByteView last_column, std::size_t max_gap = kDefaultMaxGap,
                                                std::optional<std::uint8_t> skip = std::nullopt) {
    std::array<std::vector<RowInterval>, 256> runs;
    for (std::size_t i = 0; i < last_column.size();) {
        std::size_t j = i + 1;
        while (j < last_column.size() && last_column[j] == last_column[i]) ++j;
        runs[last_column[i]].push_back({static_cast<index_t>(i), static_cast<index_t>(j)});
        i = j;
    }

    std::vector<PotentialRun> out;
    auto make_group = [&](std::uint8_t c, std::size_t first, std::size_t last) {
        const auto& rs = runs[c];
        PotentialRun g;
        g.character = c;
        for (std::size_t k = first; k <= last; ++k) {
            g.member_runs.push_back(rs[k]);
            g.total_length += rs[k].size();
            if (k > first) {
                g.gaps.push_back({rs[k - 1].hi, rs[k].lo});
                g.total_gap += rs[k].lo - rs[k - 1].hi;
            }
        }
        return g;
    };

    for (unsigned c = 0; c < 256; ++c) {
        const auto& rs = runs[c];
        if (rs.empty() || (skip && *skip == c)) continue;
        std::vector<bool> covered(rs.size(), false);
        bool grouped = false;
        std::size_t end = 0, gap = 0, prev_end = 0;
        for (std::size_t start = 0; start < rs.size(); ++start) {
            if (end < start) {
                end = start;
                gap = 0;
            }
            while (end + 1 < rs.size() && gap + (rs[end + 1].lo - rs[end].hi) <= max_gap) {
                gap += rs[end + 1].lo - rs[end].hi;
                ++end;
            }
            const bool maximal = start == 0 || end > prev_end;
            if (maximal && end > start) {
                out.push_back(make_group(static_cast<std::uint8_t>(c), start, end));
                std::fill(covered.begin() + start, covered.begin() + end + 1, true);
                grouped = true;
            }
            prev_end = end;
            if (end > start) gap -= rs[start + 1].lo - rs[start].hi;
        }
        std::optional<std::size_t> best;
        for (std::size_t k = 0; k < rs.size(); ++k) {
            if (!covered[k] && (!best || rs[k].size() > rs[*best].size())) best = k;
        }
        if (best && (!grouped || rs[*best].size() > 1)) out.push_back(make_group(static_cast<std::uint8_t>(c), *best, *best));
    }

    std::stable_sort(out.begin(), out.end(), [](const PotentialRun& a, const PotentialRun& b) {
        if (a.total_length != b.total_length) return a.total_length > b.total_length;
        if (a.total_gap != b.total_gap) return a.total_gap < b.total_gap;
        if (a.character != b.character) return a.character < b.character;
        return a.member_runs.front().lo < b.member_runs.front().lo;
    });
    return out;
}

/// The end marker's single row is never a candidate.
inline std::vector<PotentialRun> potential_runs(const Transform& t, std::size_t max_gap = kDefaultMaxGap) {
    return potential_runs(t.last_column(), max_gap, t.text().end_marker());
}

/// Maximal row interval sharing one first-column byte.
struct Section {
    std::uint8_t first_char = 0;
    RowInterval rows;

    friend bool operator==(const Section&, const Section&) = default;
};

/// F is L sorted by rank, so sections follow from the byte counts.
inline std::vector<Section> sections(const Transform& t) {
    std::vector<Section> out;
    out.push_back({t.text().end_marker(), {0, 1}});
    index_t row = 1;
    for (std::uint8_t b : t.ordering().order()) {
        const auto count = static_cast<index_t>(t.text().counts()[b]);
        out.push_back({b, {row, row + count}});
        row += count;
    }
    return out;
}

/// The pair of bytes that decides the order of two adjacent rows.
struct OrderConstraint {
    std::uint8_t lesser = 0;
    std::uint8_t greater = 0;
    index_t upper_row = 0;
    index_t lower_row = 0;
    index_t depth = 0;
    /// One side is the end marker, whose rank cannot change.
    bool immovable = false;
};

inline index_t rotation_lcp(const Transform& t, index_t a, index_t b) {
    const index_t m = t.size();
    index_t d = 0;
    while (d < m && cell(t, a, d) == cell(t, b, d)) ++d;
    return d;
}

/// One constraint per adjacent row pair in the section, at the depth where
/// the two rotations first differ.
inline std::vector<OrderConstraint> distinguishing_pairs(const Transform& t, const Section& section) {
    if (section.rows.hi > t.size()) throw Error(ErrorCode::OutOfBounds, "section extends past the matrix");
    std::vector<OrderConstraint> out;
    const std::uint8_t marker = t.text().end_marker();
    for (index_t i = section.rows.lo; i + 1 < section.rows.hi; ++i) {
        const index_t depth = rotation_lcp(t, i, i + 1);
        OrderConstraint c;
        c.lesser = cell(t, i, depth);
        c.greater = cell(t, i + 1, depth);
        c.upper_row = i;
        c.lower_row = i + 1;
        c.depth = depth;
        c.immovable = c.lesser == marker || c.greater == marker;
        out.push_back(c);
    }
    return out;
}

/// Reorders base so every constraint holds. Each byte is emitted after its
/// required predecessors, visiting bytes in base order, so unconstrained bytes
/// keep their base positions relative to the constrained ones they precede.
inline AlphabetOrdering combine_constraints(const std::vector<OrderConstraint>& desired, const AlphabetOrdering& base) {
    const std::uint8_t marker = base.end_marker();
    std::array<std::vector<std::uint8_t>, 256> preds;
    for (const auto& c : desired) {
        if (c.greater == marker) {
            throw Error(ErrorCode::EndMarkerConstraint, "'" + escape_byte(c.lesser) + "' cannot precede the end marker");
        }
        if (c.lesser == marker) continue;
        if (c.lesser == c.greater) {
            throw Error(ErrorCode::CycleDetected, "'" + escape_byte(c.lesser) + "' cannot be less than itself");
        }
        for (std::uint8_t b : {c.lesser, c.greater}) {
            if (!base.contains(b)) throw Error(ErrorCode::UnknownCharacter, "'" + escape_byte(b) + "' is not in the ordering");
        }
        preds[c.greater].push_back(c.lesser);
    }
    for (auto& p : preds) {
        std::sort(p.begin(), p.end(), [&](std::uint8_t a, std::uint8_t b) { return base.rank(a) < base.rank(b); });
        p.erase(std::unique(p.begin(), p.end()), p.end());
    }

    enum : std::uint8_t { white, grey, black };
    std::array<std::uint8_t, 256> colour{};
    Bytes out;
    Bytes stack;
    auto visit = [&](auto&& self, std::uint8_t b) -> void {
        if (colour[b] == black) return;
        if (colour[b] == grey) {
            auto it = std::find(stack.begin(), stack.end(), b);
            std::string cycle;
            for (auto p = stack.rbegin(); p != stack.rend(); ++p) {
                cycle += escape_byte(*p) + "<";
                if (p.base() - 1 == it) break;
            }
            throw Error(ErrorCode::CycleDetected, "constraints form a cycle: " + cycle + escape_byte(stack.back()));
        }
        colour[b] = grey;
        stack.push_back(b);
        for (std::uint8_t p : preds[b]) self(self, p);
        stack.pop_back();
        colour[b] = black;
        out.push_back(b);
    };
    for (std::uint8_t b : base.order()) visit(visit, b);
    return AlphabetOrdering::from_order(base.name(), std::move(out), marker);
}

enum class Placement { before, after };

/// Moves ch next to anchor; everything else keeps its relative order.
inline AlphabetOrdering move_char(const AlphabetOrdering& base, std::uint8_t ch, std::uint8_t anchor, Placement placement) {
    if (!base.contains(ch)) throw Error(ErrorCode::UnknownCharacter, "'" + escape_byte(ch) + "' is not in the ordering");
    if (!base.contains(anchor)) throw Error(ErrorCode::UnknownCharacter, "'" + escape_byte(anchor) + "' is not in the ordering");
    if (ch == anchor) throw Error(ErrorCode::UnknownCharacter, "a byte cannot be moved relative to itself");
    Bytes order;
    for (std::uint8_t b : base.order()) {
        if (b == ch) continue;
        if (b == anchor && placement == Placement::before) order.push_back(ch);
        order.push_back(b);
        if (b == anchor && placement == Placement::after) order.push_back(ch);
    }
    return AlphabetOrdering::from_order(base.name(), std::move(order), base.end_marker());
}

/// Statistics of a throwaway transform.
inline RunStatistics evaluate_ordering(const TextBuffer& text, const AlphabetOrdering& ordering) {
    return build_transform(text, ordering).stats();
}

}  // namespace bwtx
