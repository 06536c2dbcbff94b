// Copyright 2026 The bwtx Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <random>

#include "bwtx/matrix_view.hpp"
#include "support/oracle.hpp"

using namespace bwtx;

namespace {

Transform make(const std::string& s, std::string_view ordering = "ascii") {
    auto text = std::make_shared<const TextBuffer>(to_bytes(s));
    return build_transform(text, resolve_ordering(ordering, *text));
}

ErrorCode code_of(auto&& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    return ErrorCode::CorruptFile;
}

}  // namespace

TEST(Cell, Examples) {
    const auto t = make("banana");
    EXPECT_EQ(cell(t, 0, 0), '$');
    EXPECT_EQ(cell(t, 4, 0), 'b');
    EXPECT_EQ(cell(t, 1, 6), 'n');
    EXPECT_EQ(code_of([&] { cell(t, 7, 0); }), ErrorCode::OutOfBounds);
    EXPECT_EQ(code_of([&] { cell(t, 0, 7); }), ErrorCode::OutOfBounds);
}

TEST(Cell, FirstAndLastColumns) {
    std::mt19937_64 rng(4);
    for (int trial = 0; trial < 50; ++trial) {
        const auto t = make(oracle::random_text(rng, 1 + rng() % 300, 2 + rng() % 10), "least_frequent");
        const index_t m = t.size();
        for (index_t r = 1; r < m; ++r) {
            EXPECT_LE(t.ordering().rank(cell(t, r - 1, 0)), t.ordering().rank(cell(t, r, 0)));
        }
        for (index_t r = 0; r < m; ++r) EXPECT_EQ(cell(t, r, m - 1), t.last_column()[r]);
        EXPECT_EQ(cell(t, 0, 0), t.text().end_marker());
    }
}

TEST(Window, FullBananaMatchesOracle) {
    const auto t = make("banana");
    const auto m = oracle::sorted_rotations("banana", '$', "abn");
    const auto g = window(t, {0, 0, 7, 7});
    ASSERT_EQ(g.height, 7u);
    ASSERT_EQ(g.width, 7u);
    for (index_t i = 0; i < 7; ++i) {
        EXPECT_EQ(to_string(g.row(i)), m.rows[i]);
        EXPECT_EQ(g.last_column[i], m.rows[i].back());
        EXPECT_FALSE(g.truncated[i]);
    }
}

TEST(Window, SingleCellAndClipping) {
    const auto t = make("banana");
    const auto one = window(t, {0, 0, 1, 1});
    EXPECT_EQ(to_string(one.cells), "$");
    EXPECT_EQ(one.last_column.size(), 1u);
    EXPECT_EQ(one.last_column[0], 'a');
    EXPECT_TRUE(one.truncated[0]);

    const auto clipped = window(t, {5, 3, 64, 64});
    EXPECT_EQ(clipped.height, 2u);
    EXPECT_EQ(clipped.width, 4u);
    EXPECT_EQ(to_string(clipped.row(0)), "bana");  // "na$bana" from column 3
    EXPECT_EQ(to_string(clipped.row(1)), "a$ba");  // "nana$ba" from column 3
}

TEST(Window, RejectsOutside) {
    const auto t = make("banana");
    EXPECT_EQ(code_of([&] { window(t, {7, 0, 1, 1}); }), ErrorCode::OutOfBounds);
    EXPECT_EQ(code_of([&] { window(t, {0, 7, 1, 1}); }), ErrorCode::OutOfBounds);
    EXPECT_EQ(code_of([&] { window(t, {0, 0, 0, 1}); }), ErrorCode::OutOfBounds);
    EXPECT_EQ(code_of([&] { window(t, {0, 0, 1, 0}); }), ErrorCode::OutOfBounds);
}

TEST(Window, RandomWindowsMatchFullMatrix) {
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 200; ++trial) {
        const std::string s = oracle::random_text(rng, 1 + rng() % 63, 2 + rng() % 6);
        std::string order = oracle::shuffled(oracle::distinct_sorted(s), rng);
        const auto t = make(s, format_ordering(as_bytes(order)));
        const auto full = oracle::sorted_rotations(s, static_cast<char>(t.text().end_marker()), order);
        const index_t m = t.size();
        const WindowSpec spec{static_cast<index_t>(rng() % m), static_cast<index_t>(rng() % m),
                              static_cast<index_t>(1 + rng() % 70), static_cast<index_t>(1 + rng() % 70)};
        const auto g = window(t, spec);
        ASSERT_EQ(g.height, std::min<index_t>(spec.height, m - spec.top_row));
        ASSERT_EQ(g.width, std::min<index_t>(spec.width, m - spec.left_col));
        for (index_t i = 0; i < g.height; ++i) {
            ASSERT_EQ(to_string(g.row(i)), full.rows[spec.top_row + i].substr(spec.left_col, g.width));
            ASSERT_EQ(g.last_column[i], full.rows[spec.top_row + i].back());
        }
    }
}

TEST(PrefixSearch, Examples) {
    const auto t = make("banana");
    EXPECT_EQ(prefix_search(t, as_bytes("an")), (RowInterval{2, 4}));
    EXPECT_EQ(prefix_search(t, as_bytes("$")), (RowInterval{0, 1}));
    EXPECT_TRUE(prefix_search(t, as_bytes("zz")).empty());
    EXPECT_TRUE(prefix_search(t, as_bytes("")).empty());
    EXPECT_TRUE(prefix_search(t, as_bytes("nb")).empty());
}

TEST(PrefixSearch, FollowsActiveOrdering) {
    const auto t = make("banana", "reverse_ascii");
    // n < b < a: rows $banana, na$bana, nana$ba, banana$, a$banan, ana$ban, anana$b
    EXPECT_EQ(prefix_search(t, as_bytes("an")), (RowInterval{5, 7}));
    EXPECT_EQ(prefix_search(t, as_bytes("n")), (RowInterval{1, 3}));
}

TEST(PrefixSearch, MatchesBruteForce) {
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 100; ++trial) {
        const std::string s = oracle::random_text(rng, 1 + rng() % 511, 2 + rng() % 5);
        std::string order = oracle::shuffled(oracle::distinct_sorted(s), rng);
        const auto t = make(s, format_ordering(as_bytes(order)));
        const auto full = oracle::sorted_rotations(s, '$', order);
        for (int q = 0; q < 20; ++q) {
            std::string pattern;
            if (q % 2 == 0) {
                const std::size_t from = rng() % s.size();
                pattern = (s + "$" + s).substr(from, 1 + rng() % 6);
            } else {
                pattern = oracle::random_text(rng, 1 + rng() % 4, 2 + rng() % 6);
            }
            const auto rows = oracle::prefix_rows(full, pattern);
            const auto hit = prefix_search(t, as_bytes(pattern));
            if (rows.empty()) {
                ASSERT_TRUE(hit.empty()) << pattern;
            } else {
                ASSERT_EQ(hit.lo, rows.front()) << pattern;
                ASSERT_EQ(hit.hi, rows.back() + 1) << pattern;
                ASSERT_EQ(hit.size(), rows.size()) << pattern;
            }
        }
    }
}

TEST(FindMatch, Examples) {
    const auto t = make("banana");
    EXPECT_EQ(find_match(t, as_bytes("an"), 0, Direction::forward), 2u);
    EXPECT_EQ(find_match(t, as_bytes("an"), 2, Direction::forward), 3u);
    EXPECT_EQ(find_match(t, as_bytes("an"), 3, Direction::forward), std::nullopt);
    EXPECT_EQ(find_match(t, as_bytes("an"), 2, Direction::backward), std::nullopt);
    EXPECT_EQ(find_match(t, as_bytes("an"), 6, Direction::backward), 3u);
    EXPECT_EQ(find_match(t, as_bytes("an"), 3, Direction::backward), 2u);
    EXPECT_EQ(find_match(t, as_bytes("zz"), 0, Direction::forward), std::nullopt);
    EXPECT_EQ(code_of([&] { find_match(t, as_bytes("a"), 7, Direction::forward); }), ErrorCode::OutOfBounds);
}

TEST(LocateRow, Examples) {
    const auto text = std::make_shared<const TextBuffer>(to_bytes("banana"));
    const auto ascii = build_transform(text, preset_ordering(Preset::ascii, *text));
    const auto reverse = build_transform(text, preset_ordering(Preset::reverse_ascii, *text));
    EXPECT_EQ(locate_row(ascii, 4, reverse), 3u);
    for (index_t i = 0; i < ascii.size(); ++i) {
        EXPECT_EQ(locate_row(ascii, i, ascii), i);
        EXPECT_EQ(locate_row(reverse, locate_row(ascii, i, reverse), ascii), i);
    }
    EXPECT_EQ(code_of([&] { locate_row(ascii, 7, reverse); }), ErrorCode::OutOfBounds);
}

TEST(LocateRow, BijectionAcrossOrderings) {
    std::mt19937_64 rng(77);
    for (int trial = 0; trial < 50; ++trial) {
        const std::string s = oracle::random_text(rng, 1 + rng() % 300, 2 + rng() % 8);
        const auto text = std::make_shared<const TextBuffer>(to_bytes(s));
        const auto a = build_transform(text, preset_ordering(Preset::most_frequent, *text));
        const auto b = build_transform(text, preset_ordering(Preset::order_of_appearance, *text));
        std::vector<bool> hit(a.size());
        for (index_t i = 0; i < a.size(); ++i) {
            const index_t j = locate_row(a, i, b);
            ASSERT_FALSE(hit[j]);
            hit[j] = true;
            EXPECT_EQ(b.sa()[j], a.sa()[i]);
        }
    }
}

TEST(LocateRow, TextMismatch) {
    const auto a = make("banana");
    const auto b = make("bandana");
    EXPECT_EQ(code_of([&] { locate_row(a, 0, b); }), ErrorCode::TextMismatch);
    // equal content in separate buffers is the same text
    const auto c = make("banana", "reverse_ascii");
    EXPECT_EQ(locate_row(a, 4, c), 3u);
}
