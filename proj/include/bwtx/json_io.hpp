// Copyright 2026 The bwtx Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

// JSON shapes shared by the HTTP service and the command line tool.
// Bytes are integers, byte strings are base64, rows are 0-based.

#include <nlohmann/json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "bwtx/analysis.hpp"
#include "bwtx/base64.hpp"
#include "bwtx/matrix_view.hpp"
#include "bwtx/transform.hpp"

namespace bwtx::json_io {

using nlohmann::json;

inline json stats(const RunStatistics& s) {
    return {{"end_marker", s.end_marker_used},
            {"end_marker_char", escape_byte(s.end_marker_used)},
            {"original_size", s.original_size},
            {"r", s.run_count},
            {"rle_length", s.rle_length}};
}

inline json ordering(const AlphabetOrdering& o) {
    return {{"name", o.name()}, {"order", o.order()}, {"label", o.describe()}, {"spec", format_ordering(o.order())}};
}

inline json interval(const RowInterval& r) { return json::array({r.lo, r.hi}); }

inline json run_breakers(const std::vector<RunBreaker>& items) {
    json out = json::array();
    for (const auto& b : items) out.push_back({{"row", b.row}, {"breaker", b.breaker}, {"flanked_by", b.flanked_by}});
    return out;
}

inline json potential_runs(const std::vector<PotentialRun>& items) {
    json out = json::array();
    for (const auto& g : items) {
        json runs = json::array(), gaps = json::array();
        for (const auto& r : g.member_runs) runs.push_back(interval(r));
        for (const auto& r : g.gaps) gaps.push_back(interval(r));
        out.push_back({{"character", g.character},
                       {"member_runs", runs},
                       {"gaps", gaps},
                       {"total_length", g.total_length},
                       {"total_gap", g.total_gap}});
    }
    return out;
}

inline json sections(const std::vector<Section>& items) {
    json out = json::array();
    for (const auto& s : items) out.push_back({{"first_char", s.first_char}, {"rows", interval(s.rows)}});
    return out;
}

inline json constraints(const std::vector<OrderConstraint>& items) {
    json out = json::array();
    for (const auto& c : items) {
        out.push_back({{"lesser", c.lesser},
                       {"greater", c.greater},
                       {"rows", json::array({c.upper_row, c.lower_row})},
                       {"depth", c.depth},
                       {"immovable", c.immovable}});
    }
    return out;
}

enum class AnalysisKind { run_breakers, potential_runs, sections, pairs };

inline std::optional<AnalysisKind> find_analysis_kind(std::string_view name) {
    if (name == "run_breakers") return AnalysisKind::run_breakers;
    if (name == "potential_runs") return AnalysisKind::potential_runs;
    if (name == "sections") return AnalysisKind::sections;
    if (name == "pairs") return AnalysisKind::pairs;
    return std::nullopt;
}

/// Section index selects one section for pairs; without it every section is reported.
inline json analysis(const Transform& t, AnalysisKind kind, std::size_t max_gap = kDefaultMaxGap,
                     std::optional<std::size_t> section_index = std::nullopt) {
    json out;
    switch (kind) {
        case AnalysisKind::run_breakers:
            out = {{"kind", "run_breakers"}, {"items", run_breakers(bwtx::run_breakers(t))}};
            break;
        case AnalysisKind::potential_runs:
            out = {{"kind", "potential_runs"}, {"max_gap", max_gap}, {"items", potential_runs(bwtx::potential_runs(t, max_gap))}};
            break;
        case AnalysisKind::sections:
            out = {{"kind", "sections"}, {"items", sections(bwtx::sections(t))}};
            break;
        case AnalysisKind::pairs: {
            const auto all = bwtx::sections(t);
            json items = json::array();
            for (std::size_t i = 0; i < all.size(); ++i) {
                if (section_index && *section_index != i) continue;
                items.push_back({{"section", i},
                                 {"first_char", all[i].first_char},
                                 {"rows", interval(all[i].rows)},
                                 {"constraints", constraints(distinguishing_pairs(t, all[i]))}});
            }
            if (section_index && *section_index >= all.size()) {
                throw Error(ErrorCode::OutOfBounds, "section " + std::to_string(*section_index) + " does not exist");
            }
            out = {{"kind", "pairs"}, {"items", items}};
            break;
        }
    }
    return out;
}

/// Window payload; rows and the L slice are base64.
inline json window(const WindowGrid& g) {
    json rows = json::array();
    for (index_t i = 0; i < g.height; ++i) rows.push_back(base64::encode(g.row(i)));
    json truncated = json::array();
    for (bool b : g.truncated) truncated.push_back(b);
    return {{"top_row", g.top_row}, {"left_col", g.left_col}, {"height", g.height},     {"width", g.width},
            {"m", g.matrix_size},   {"rows", rows},            {"last_column", base64::encode(g.last_column)},
            {"truncated", truncated}};
}

}  // namespace bwtx::json_io
