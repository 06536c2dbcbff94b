// Copyright 2026 The bwtx Authors
// SPDX-License-Identifier: Apache-2.0
//
// Acceptance suite: one PASS/FAIL line per criterion; exits non-zero if any fail.

#include <sys/resource.h>

#include <atomic>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <new>
#include <random>
#include <sstream>
#include <string>
#include <thread>

#include "bwtx/bwtx.hpp"
#include "bwtx/naive.hpp"
#include "bwtx/service.hpp"
#include "support/oracle.hpp"

// Allocation accounting for the window bound. Only counts while armed.
namespace {
std::atomic<bool> g_armed{false};
std::atomic<std::size_t> g_alloc_bytes{0};
std::atomic<std::size_t> g_alloc_calls{0};
}  // namespace

void* operator new(std::size_t size) {
    if (g_armed.load(std::memory_order_relaxed)) {
        g_alloc_bytes += size;
        ++g_alloc_calls;
    }
    if (void* p = std::malloc(size ? size : 1)) return p;
    throw std::bad_alloc();
}
void* operator new[](std::size_t size) { return ::operator new(size); }
void operator delete(void* p) noexcept { std::free(p); }
void operator delete[](void* p) noexcept { std::free(p); }
void operator delete(void* p, std::size_t) noexcept { std::free(p); }
void operator delete[](void* p, std::size_t) noexcept { std::free(p); }

using namespace bwtx;
using Clock = std::chrono::steady_clock;

namespace {

// Tolerances and limits, pinned here.
constexpr double kBananaMaxMs = 1.0;
constexpr double kPermutationsMaxSec = 1.0;
constexpr double kOracleSuiteMaxSec = 60.0;
constexpr std::size_t kOracleTexts = 200;
constexpr std::size_t kOracleOrderingsPerText = 5;
constexpr std::size_t kOracleMaxN = 512;
constexpr std::size_t kRoundTrips = 1000;
constexpr std::size_t kRoundTripMaxN = 2000;
constexpr std::size_t kScaleN = 10'000'000;
constexpr double kScaleMaxSec = 30.0;
// O(n) machine words: at most three 8-byte words per input byte, plus a fixed allowance
// for the process image and allocator slack.
constexpr std::size_t kScaleWordsPerByte = 3;
constexpr std::size_t kScaleFixedBytes = std::size_t{64} << 20;
constexpr index_t kWindowSide = 64;
// Cells plus one last-column byte and one truncation flag per row, plus bookkeeping.
constexpr std::size_t kWindowSlackBytes = 1024;

struct Outcome {
    bool pass = true;
    std::string failures;
    std::ostringstream note;  // shown on success

    void check(bool ok, const std::string& what) {
        if (ok) return;
        if (!pass) failures += "; ";
        pass = false;
        failures += what;
    }
};

int g_failures = 0;

void report(const char* id, const char* title, const std::function<void(Outcome&)>& body) {
    Outcome o;
    try {
        body(o);
    } catch (const std::exception& e) {
        o.check(false, std::string("exception: ") + e.what());
    }
    if (!o.pass) ++g_failures;
    std::printf("[%s] %s %s: %s\n", o.pass ? "PASS" : "FAIL", id, title,
                o.pass ? o.note.str().c_str() : o.failures.c_str());
    std::fflush(stdout);
}

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::shared_ptr<const TextBuffer> buffer(const std::string& s) { return std::make_shared<const TextBuffer>(to_bytes(s)); }

std::size_t peak_rss_bytes() {
    rusage ru{};
    getrusage(RUSAGE_SELF, &ru);
    return static_cast<std::size_t>(ru.ru_maxrss) * 1024;
}

}  // namespace

int main() {
    report("AC1", "banana example", [](Outcome& o) {
        const auto text = buffer("banana");
        const auto ascii = preset_ordering(Preset::ascii, *text);
        const auto t0 = Clock::now();
        const auto t = build_transform(text, ascii);
        const double ms = seconds_since(t0) * 1e3;
        o.check(to_string(t.last_column()) == "annb$aa", "L = " + escape_bytes(t.last_column()));
        o.check(ms < kBananaMaxMs, "took " + std::to_string(ms) + " ms");
        o.note << "L=" << to_string(t.last_column()) << " in " << ms << " ms (limit " << kBananaMaxMs << ")";
    });

    report("AC2", "space-handling example", [](Outcome& o) {
        const auto text = buffer("banana banana");
        const auto t = build_transform(text, preset_ordering(Preset::ascii, *text));
        o.check(text->end_marker() == '$', "marker is not '$'");
        o.check(to_string(t.last_column()) == "aannnnbb $aaaa", "L = " + escape_bytes(t.last_column()));
        o.note << "L=\"" << to_string(t.last_column()) << "\"";
    });

    report("AC3", "three orderings of the split-run text", [](Outcome& o) {
        const auto text = buffer("aacaacaacbdccccc");
        const std::size_t r_ascii = evaluate_ordering(*text, preset_ordering(Preset::ascii, *text)).run_count;
        const std::size_t r_acbd = evaluate_ordering(*text, parse_ordering("a,c,b,d", *text)).run_count;
        const std::size_t r_cabd = evaluate_ordering(*text, parse_ordering("c,a,b,d", *text)).run_count;
        o.check(r_ascii == 9 && r_acbd == 11 && r_cabd == 6, "r values differ");
        o.note << "r ascii=" << r_ascii << " a<c<b<d=" << r_acbd << " c<a<b<d=" << r_cabd;
    });

    report("AC4", "all orderings of aabaaabac agree", [](Outcome& o) {
        const auto text = buffer("aabaaabac");
        const auto t0 = Clock::now();
        Bytes perm = text->alphabet();
        std::size_t count = 0;
        do {
            const auto s = evaluate_ordering(*text, AlphabetOrdering("perm", perm, *text));
            o.check(s.run_count == 6, escape_bytes(perm) + " r=" + std::to_string(s.run_count));
            o.check(s.rle_length == 12, escape_bytes(perm) + " rle=" + std::to_string(s.rle_length));
            ++count;
        } while (std::next_permutation(perm.begin(), perm.end()));
        const double sec = seconds_since(t0);
        o.check(count == 6, "evaluated " + std::to_string(count) + " orderings");
        o.check(sec < kPermutationsMaxSec, "took " + std::to_string(sec) + " s");
        if (o.pass) o.note << count << " orderings, r=6 rle_length=12 each, " << sec << " s";
    });

    report("AC5", "oracle equivalence", [](Outcome& o) {
        std::mt19937_64 rng(20240517);
        const auto t0 = Clock::now();
        std::size_t cases = 0, windows = 0, searches = 0;
        for (std::size_t i = 0; i < kOracleTexts && o.pass; ++i) {
            const std::size_t n = 1 + rng() % kOracleMaxN;
            const std::size_t sigma = 2 + rng() % 15;
            const std::string s = oracle::random_text(rng, n, sigma);
            const auto text = buffer(s);
            const std::string alphabet = oracle::distinct_sorted(s);
            for (std::size_t k = 0; k < kOracleOrderingsPerText; ++k) {
                const std::string order = oracle::shuffled(alphabet, rng);
                const auto ord = AlphabetOrdering("random", to_bytes(order), *text);
                const auto fast = build_transform(text, ord);
                const auto slow = naive_bwt(text, ord);
                const bool same = std::ranges::equal(fast.sa(), slow.sa()) &&
                                  std::ranges::equal(fast.last_column(), slow.last_column()) &&
                                  fast.stats() == slow.stats();
                o.check(same, "transform differs from naive on case " + std::to_string(cases));
                ++cases;

                const auto matrix = oracle::sorted_rotations(s, static_cast<char>(text->end_marker()), order);
                const index_t m = fast.size();
                WindowSpec spec;
                spec.top_row = static_cast<index_t>(rng() % m);
                spec.left_col = static_cast<index_t>(rng() % m);
                spec.height = static_cast<index_t>(1 + rng() % 80);
                spec.width = static_cast<index_t>(1 + rng() % 80);
                const auto grid = window(fast, spec);
                bool window_ok = grid.height == std::min<index_t>(spec.height, m - spec.top_row) &&
                                 grid.width == std::min<index_t>(spec.width, m - spec.left_col);
                for (index_t r = 0; window_ok && r < grid.height; ++r) {
                    const std::string& row = matrix.rows[grid.top_row + r];
                    window_ok = to_string(grid.row(r)) == row.substr(grid.left_col, grid.width) &&
                                static_cast<char>(grid.last_column[r]) == row.back();
                }
                o.check(window_ok, "window differs from the full matrix on case " + std::to_string(cases - 1));
                ++windows;

                for (int p = 0; p < 4; ++p) {
                    std::string pattern;
                    const std::size_t len = 1 + rng() % 5;
                    if (p % 2 == 0) {
                        const std::size_t start = rng() % (s.size() + 1);
                        pattern = (s + static_cast<char>(text->end_marker()) + s).substr(start, len);
                    } else {
                        for (std::size_t c = 0; c < len; ++c) pattern.push_back(alphabet[rng() % alphabet.size()]);
                    }
                    const auto hits = prefix_search(fast, as_bytes(pattern));
                    const auto expected = oracle::prefix_rows(matrix, pattern);
                    const bool ok = expected.empty() ? hits.empty()
                                                     : hits.lo == expected.front() && hits.hi == expected.back() + 1 &&
                                                           hits.size() == expected.size();
                    o.check(ok, "prefix_search differs for '" + escape_bytes(as_bytes(pattern)) + "'");
                    ++searches;
                }
            }
        }
        const double sec = seconds_since(t0);
        o.check(sec < kOracleSuiteMaxSec, "took " + std::to_string(sec) + " s");
        if (o.pass) o.note << cases << " transforms, " << windows << " windows, " << searches << " searches match in " << sec << " s";
    });

    report("AC6", "inversion round trip", [](Outcome& o) {
        std::mt19937_64 rng(77);
        std::size_t failures = 0;
        for (std::size_t i = 0; i < kRoundTrips; ++i) {
            const std::string s = oracle::random_text(rng, 1 + rng() % kRoundTripMaxN, 1 + rng() % 30);
            const auto text = buffer(s);
            const auto ord = AlphabetOrdering("random", to_bytes(oracle::shuffled(oracle::distinct_sorted(s), rng)), *text);
            const auto t = build_transform(text, ord);
            if (to_string(invert(t.last_column(), ord, text->end_marker())) != s) ++failures;
        }
        o.check(failures == 0, std::to_string(failures) + " of " + std::to_string(kRoundTrips) + " failed");
        if (o.pass) o.note << kRoundTrips << " round trips, 0 failures";
    });

    report("AC7", "run-breaker and potential-run regression", [](Outcome& o) {
        const auto fig2 = buffer("aabaaabac");
        const auto breakers = run_breakers(build_transform(fig2, preset_ordering(Preset::ascii, *fig2)));
        o.check(breakers.size() == 1 && breakers[0].row == 6 && breakers[0].breaker == 'b',
                "run breakers: " + std::to_string(breakers.size()) + " found");
        const auto fig1 = buffer("aacaacaacbdccccc");
        const auto runs = potential_runs(build_transform(fig1, preset_ordering(Preset::ascii, *fig1)));
        o.check(!runs.empty() && runs[0].character == 'a' && runs[0].total_length == 6 && runs[0].total_gap == 2,
                "top potential run is not 'a' x6 gap 2");
        if (o.pass) o.note << "breaker at row 6 ('b'); top potential run 'a' total_length 6 total_gap 2";
    });

    report("AC8", "constraint combination", [](Outcome& o) {
        const auto text = buffer("aacaacaacbdccccc");
        const auto ascii = preset_ordering(Preset::ascii, *text);
        OrderConstraint c_before_a;
        c_before_a.lesser = 'c';
        c_before_a.greater = 'a';
        const auto combined = combine_constraints({c_before_a}, ascii);
        const std::size_t before = evaluate_ordering(*text, ascii).run_count;
        const std::size_t after = evaluate_ordering(*text, combined).run_count;
        o.check(combined.describe() == "c<a<b<d", "combined ordering " + combined.describe());
        o.check(before == 9 && after == 6, "r " + std::to_string(before) + " -> " + std::to_string(after));
        if (o.pass) o.note << combined.describe() << ", r " << before << " -> " << after;
    });

    report("AC9", "scale and space", [](Outcome& o) {
        std::mt19937_64 rng(5);
        std::shared_ptr<const TextBuffer> text;
        {
            std::string s = oracle::random_text(rng, kScaleN, 20);
            text = std::make_shared<const TextBuffer>(to_bytes(s));
        }
        const auto ord = preset_ordering(Preset::ascii, *text);
        const std::size_t rss_before = peak_rss_bytes();
        const auto t0 = Clock::now();
        const auto t = build_transform(text, ord);
        const double sec = seconds_since(t0);
        const std::size_t rss = peak_rss_bytes();
        const std::size_t rss_limit = kScaleWordsPerByte * 8 * kScaleN + kScaleFixedBytes;
        o.check(sec <= kScaleMaxSec, "build took " + std::to_string(sec) + " s");
        o.check(rss <= rss_limit, "peak RSS " + std::to_string(rss >> 20) + " MiB over " + std::to_string(rss_limit >> 20));

        // Window allocation at n = 1e7 versus a tiny matrix: both must cost only the grid.
        auto measure = [&](const Transform& tr, index_t top, index_t left) {
            WindowSpec spec{top, left, kWindowSide, kWindowSide};
            g_alloc_bytes = 0;
            g_alloc_calls = 0;
            g_armed = true;
            const auto grid = window(tr, spec);
            g_armed = false;
            return std::pair{g_alloc_bytes.load(), grid.cells.size()};
        };
        const auto [big_bytes, big_cells] = measure(t, static_cast<index_t>(t.size() / 2), 12345);
        const auto small_text = buffer(oracle::random_text(rng, 1000, 20));
        const auto small = build_transform(small_text, preset_ordering(Preset::ascii, *small_text));
        const auto [small_bytes, small_cells] = measure(small, 100, 100);
        const std::size_t cell_count = std::size_t{kWindowSide} * kWindowSide;
        o.check(big_cells == cell_count, "window has " + std::to_string(big_cells) + " cells");
        o.check(big_bytes <= cell_count + kWindowSlackBytes, "window allocated " + std::to_string(big_bytes) + " bytes");
        o.check(big_bytes == small_bytes, "window allocation depends on m (" + std::to_string(big_bytes) + " vs " +
                                              std::to_string(small_bytes) + ")");
        if (o.pass) {
            o.note << "n=" << kScaleN << " built in " << sec << " s (limit " << kScaleMaxSec << "), peak RSS "
                   << (rss >> 20) << " MiB (limit " << (rss_limit >> 20) << ", " << (rss_before >> 20)
                   << " before build); 64x64 window allocated " << big_bytes << " bytes at m=" << t.size()
                   << " and " << small_bytes << " at m=" << small.size();
        }
    });

    report("AC10", "session round trip", [](Outcome& o) {
        std::mt19937_64 rng(10);
        Session s;
        s.text = buffer(oracle::random_text(rng, 20000, 12));
        const std::vector<std::string> specs = {"most_frequent", "ascii", "vowels_first"};
        for (std::size_t i = 0; i < specs.size(); ++i) {
            auto ord = resolve_ordering(specs[i], *s.text);
            auto built = std::make_shared<const Transform>(build_transform(s.text, ord));
            s.transforms.push_back({"t" + std::to_string(i), ord.name(), ord, {static_cast<index_t>(i), 17, 400}, built});
        }
        s.window_rows = 40;
        s.window_cols = 90;

        for (bool cache : {false, true}) {
            const auto before = instrumentation::sa_constructions.load();
            const auto loaded = load_session(save_session(s, cache));
            const auto constructions = instrumentation::sa_constructions.load() - before;
            const std::string tag = cache ? "cached: " : "uncached: ";
            o.check(same_state(s, loaded.session), tag + "state differs");
            bool stats_ok = loaded.session.transforms.size() == s.transforms.size();
            for (std::size_t i = 0; stats_ok && i < s.transforms.size(); ++i) {
                stats_ok = loaded.session.transforms[i].id == s.transforms[i].id &&
                           loaded.session.transforms[i].built->stats() == s.transforms[i].built->stats();
            }
            o.check(stats_ok, tag + "panel order or stats differ");
            o.check(loaded.warnings.empty(), tag + "unexpected warnings");
            if (cache) o.check(constructions == 0, "cached import ran " + std::to_string(constructions) + " constructions");
        }

        // Same path through the HTTP API.
        Service service;
        const int port = service.bind("127.0.0.1", 0);
        std::thread th([&] { service.listen_after_bind(); });
        service.wait_until_ready();
        httplib::Client client("127.0.0.1", port);
        const Bytes file = save_session(s, true);
        const auto before = instrumentation::sa_constructions.load();
        auto res = client.Post("/sessions/import", std::string(file.begin(), file.end()), "application/octet-stream");
        const auto constructions = instrumentation::sa_constructions.load() - before;
        o.check(res && res->status == 201, "service import failed");
        if (res && res->status == 201) {
            const auto body = nlohmann::json::parse(res->body);
            o.check(body["transforms"].size() == 3 && body["transforms"][2]["highlights"] == nlohmann::json({2, 17, 400}),
                    "service import lost transforms or highlights");
            auto exported = client.Get("/sessions/" + body["session_id"].get<std::string>() + "/export?cache=true");
            o.check(exported && Bytes(exported->body.begin(), exported->body.end()) == file,
                    "service export differs from the imported file");
        }
        o.check(constructions == 0, "service cached import ran " + std::to_string(constructions) + " constructions");
        service.stop();
        th.join();
        if (o.pass) o.note << "cached and uncached restore identical state; cached import (library and service) ran 0 constructions";
    });

    std::printf("%d criteria failed\n", g_failures);
    return g_failures == 0 ? 0 : 1;
}
