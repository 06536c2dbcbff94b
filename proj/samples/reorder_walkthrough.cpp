// Copyright 2026 The bwtx Authors
// SPDX-License-Identifier: Apache-2.0

// Joins the split run of 'a' in the transform of "aacaacaacbdccccc" by
// reordering the alphabet, printing the statistics along the way.

#include <iostream>

#include "bwtx/bwtx.hpp"

int main() {
    auto text = std::make_shared<const bwtx::TextBuffer>(bwtx::to_bytes("aacaacaacbdccccc"));
    const auto ascii = bwtx::preset_ordering(bwtx::Preset::ascii, *text);
    const auto t = bwtx::build_transform(text, ascii);
    std::cout << ascii.describe() << "  L=" << bwtx::escape_bytes(t.last_column()) << "  r=" << t.stats().run_count << "\n";

    const auto runs = bwtx::potential_runs(t);
    const auto& best = runs.front();
    std::cout << "longest potential run: " << best.total_length << " x '" << bwtx::escape_byte(best.character)
              << "' across " << best.member_runs.size() << " runs, gap " << best.total_gap << "\n";

    for (const auto& section : bwtx::sections(t)) {
        for (const auto& c : bwtx::distinguishing_pairs(t, section)) {
            std::cout << "  section '" << bwtx::escape_byte(section.first_char) << "' rows " << c.upper_row << "-"
                      << c.lower_row << ": " << bwtx::escape_byte(c.lesser) << " < " << bwtx::escape_byte(c.greater)
                      << " at depth " << c.depth << (c.immovable ? " (end marker)" : "") << "\n";
        }
    }

    bwtx::OrderConstraint c_before_a;
    c_before_a.lesser = 'c';
    c_before_a.greater = 'a';
    const auto proposed = bwtx::combine_constraints({c_before_a}, ascii);
    const auto improved = bwtx::build_transform(text, proposed);
    std::cout << proposed.describe() << "  L=" << bwtx::escape_bytes(improved.last_column())
              << "  r=" << improved.stats().run_count << "\n";
}
