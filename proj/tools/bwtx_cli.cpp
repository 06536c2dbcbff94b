// Copyright 2026 The bwtx Authors
// SPDX-License-Identifier: Apache-2.0

#include <CLI11.hpp>

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <iterator>
#include <nlohmann/json.hpp>
#include <optional>
#include <regex>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "bwtx/bwtx.hpp"
#include "bwtx/json_io.hpp"
#include "bwtx/service.hpp"

namespace {

using bwtx::AlphabetOrdering;
using bwtx::Bytes;
using bwtx::Error;
using bwtx::ErrorCode;
using bwtx::TextBuffer;
using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;

struct RuntimeFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct InputOptions {
    std::string text;
    std::string file;
    std::string session;
};

struct OrderingOptions {
    std::vector<std::string> orderings;
    std::vector<std::string> presets;
};

Bytes read_stream(std::istream& in) { return Bytes(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()); }

// Text and, when read from a session, the session's orderings.
struct LoadedInput {
    std::shared_ptr<const TextBuffer> text;
    std::vector<AlphabetOrdering> session_orderings;
};

LoadedInput load_input(const InputOptions& in) {
    LoadedInput out;
    if (!in.text.empty()) {
        out.text = std::make_shared<const TextBuffer>(bwtx::to_bytes(in.text));
    } else if (!in.file.empty() && in.file != "-") {
        std::ifstream f(in.file, std::ios::binary);
        if (!f) throw RuntimeFailure("cannot read " + in.file);
        out.text = std::make_shared<const TextBuffer>(read_stream(f));
    } else if (!in.session.empty() && in.file.empty()) {
        auto loaded = bwtx::load_session_file(in.session);
        for (const auto& w : loaded.warnings) std::cerr << "warning: " << w << "\n";
        out.text = loaded.session.text;
        for (const auto& t : loaded.session.transforms) out.session_orderings.push_back(t.ordering);
    } else {
        out.text = std::make_shared<const TextBuffer>(read_stream(std::cin));
    }
    return out;
}

std::vector<AlphabetOrdering> resolve_orderings(const OrderingOptions& opts, const LoadedInput& input,
                                                const bwtx::PresetTables& tables) {
    std::vector<AlphabetOrdering> out;
    for (const auto& p : opts.presets) out.push_back(bwtx::preset_ordering(bwtx::parse_preset(p), *input.text, tables));
    for (const auto& o : opts.orderings) {
        AlphabetOrdering ord = bwtx::resolve_ordering(o, *input.text, tables);
        if (ord.name() == "custom") ord.set_name(ord.describe());
        out.push_back(std::move(ord));
    }
    return out;
}

AlphabetOrdering single_ordering(const OrderingOptions& opts, const LoadedInput& input, const bwtx::PresetTables& tables) {
    auto all = resolve_orderings(opts, input, tables);
    if (all.size() > 1) throw CLI::ValidationError("give at most one --ordering or --preset");
    if (!all.empty()) return all.front();
    if (!input.session_orderings.empty()) return input.session_orderings.front();
    return bwtx::preset_ordering(bwtx::Preset::ascii, *input.text);
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

void add_input_options(CLI::App* cmd, InputOptions& in) {
    cmd->add_option("text", in.text, "Literal input text (otherwise --file, --session or stdin)");
    cmd->add_option("-f,--file", in.file, "Read the text from a file ('-' for stdin)");
    cmd->add_option("--session", in.session, "Read the text and orderings from a .bwtx session");
}

void add_ordering_options(CLI::App* cmd, OrderingOptions& o) {
    cmd->add_option("--ordering", o.orderings, "Preset name or comma list such as c,a,b,d (least first)")
        ->allow_extra_args(false);
    cmd->add_option("--preset", o.presets, "Preset ordering name")->allow_extra_args(false);
}

bwtx::WindowSpec parse_window(const std::string& arg) {
    static const std::regex re(R"((\d+)x(\d+)(?:@(\d+),(\d+))?)");
    std::smatch m;
    if (!std::regex_match(arg, m, re)) throw CLI::ValidationError("--window expects RxC@row,col, got '" + arg + "'");
    bwtx::WindowSpec spec;
    try {
        spec.height = static_cast<bwtx::index_t>(std::stoul(m[1]));
        spec.width = static_cast<bwtx::index_t>(std::stoul(m[2]));
        if (m[3].matched) {
            spec.top_row = static_cast<bwtx::index_t>(std::stoul(m[3]));
            spec.left_col = static_cast<bwtx::index_t>(std::stoul(m[4]));
        }
    } catch (const std::exception&) {
        throw CLI::ValidationError("--window value out of range: '" + arg + "'");
    }
    return spec;
}

int cmd_transform(const LoadedInput& input, const AlphabetOrdering& ordering, const std::string& format) {
    const auto t = bwtx::build_transform(input.text, ordering);
    const auto& s = t.stats();
    if (format == "json") {
        json out = {{"last_column", bwtx::base64::encode(t.last_column())},
                    {"last_column_escaped", bwtx::escape_bytes(t.last_column())},
                    {"ordering", bwtx::json_io::ordering(ordering)},
                    {"stats", bwtx::json_io::stats(s)}};
        std::cout << out.dump(2) << "\n";
    } else if (format == "csv") {
        std::cout << "L,end_marker,original_size,r,rle_length\n"
                  << csv_field(bwtx::escape_bytes(t.last_column())) << "," << csv_field(bwtx::escape_byte(s.end_marker_used))
                  << "," << s.original_size << "," << s.run_count << "," << s.rle_length << "\n";
    } else {
        char hex[8];
        std::snprintf(hex, sizeof(hex), "0x%02x", s.end_marker_used);
        std::cout << "L: " << bwtx::escape_bytes(t.last_column()) << "\n"
                  << "end_marker: " << bwtx::escape_byte(s.end_marker_used) << " (" << hex << ")\n"
                  << "ordering: " << ordering.name() << " " << ordering.describe() << "\n"
                  << "original_size: " << s.original_size << "\n"
                  << "r: " << s.run_count << "\n"
                  << "rle_length: " << s.rle_length << "\n";
    }
    return kExitOk;
}

std::vector<AlphabetOrdering> all_permutations(const TextBuffer& text) {
    Bytes alphabet = text.alphabet();
    if (alphabet.size() > 8) throw CLI::ValidationError("--permutations is limited to alphabets of at most 8 bytes");
    std::vector<AlphabetOrdering> out;
    do {
        AlphabetOrdering o("custom", alphabet, text);
        o.set_name(o.describe());
        out.push_back(std::move(o));
    } while (std::next_permutation(alphabet.begin(), alphabet.end()));
    return out;
}

int cmd_stats(const LoadedInput& input, std::vector<AlphabetOrdering> orderings, const std::string& format,
              const std::string& session_out, bool cache) {
    std::vector<bwtx::RunStatistics> results(orderings.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i; (i = next.fetch_add(1)) < orderings.size();) {
            results[i] = bwtx::evaluate_ordering(*input.text, orderings[i]);
        }
    };
    const std::size_t threads = std::min<std::size_t>(std::max(1u, std::thread::hardware_concurrency()), orderings.size());
    std::vector<std::thread> pool;
    for (std::size_t i = 1; i < threads; ++i) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();

    if (format == "json") {
        json out = json::array();
        for (std::size_t i = 0; i < orderings.size(); ++i) {
            out.push_back({{"ordering", bwtx::json_io::ordering(orderings[i])}, {"stats", bwtx::json_io::stats(results[i])}});
        }
        std::cout << out.dump(2) << "\n";
    } else {
        const char sep = format == "csv" ? ',' : '\t';
        std::cout << "ordering" << sep << "r" << sep << "rle_length\n";
        for (std::size_t i = 0; i < orderings.size(); ++i) {
            std::cout << (format == "csv" ? csv_field(orderings[i].name()) : orderings[i].name()) << sep
                      << results[i].run_count << sep << results[i].rle_length << "\n";
        }
    }

    if (!session_out.empty()) {
        bwtx::Session s;
        s.text = input.text;
        for (std::size_t i = 0; i < orderings.size(); ++i) {
            s.transforms.push_back({"t" + std::to_string(i), orderings[i].name(), orderings[i], {}, nullptr});
        }
        s.cache_policy = cache ? bwtx::CachePolicy::cache_L : bwtx::CachePolicy::none;
        try {
            bwtx::save_session_file(session_out, s, cache);
        } catch (const Error& e) {
            throw RuntimeFailure(e.what());
        }
    }
    return kExitOk;
}

int cmd_window(const LoadedInput& input, const AlphabetOrdering& ordering, const bwtx::WindowSpec& spec,
               const std::string& format) {
    const auto t = bwtx::build_transform(input.text, ordering);
    const auto grid = bwtx::window(t, spec);
    if (format == "json") {
        std::cout << bwtx::json_io::window(grid).dump(2) << "\n";
        return kExitOk;
    }
    const std::size_t digits = std::to_string(grid.top_row + grid.height - 1).size();
    std::cout << "# rows " << grid.top_row << ".." << grid.top_row + grid.height - 1 << " cols " << grid.left_col << ".."
              << grid.left_col + grid.width - 1 << " of " << grid.matrix_size << "; L after '|'\n";
    for (bwtx::index_t i = 0; i < grid.height; ++i) {
        std::string idx = std::to_string(grid.top_row + i);
        std::cout << std::string(digits - idx.size(), ' ') << idx << "  " << bwtx::escape_bytes(grid.row(i)) << " | "
                  << bwtx::escape_byte(grid.last_column[i]) << "\n";
    }
    return kExitOk;
}

int cmd_analyze(const LoadedInput& input, const AlphabetOrdering& ordering, const std::string& kind_name,
                std::size_t max_gap, std::optional<std::size_t> section) {
    const auto kind = bwtx::json_io::find_analysis_kind(kind_name);
    if (!kind) throw CLI::ValidationError("unknown analysis kind '" + kind_name + "'");
    const auto t = bwtx::build_transform(input.text, ordering);
    json out = bwtx::json_io::analysis(t, *kind, max_gap, section);
    out["ordering"] = bwtx::json_io::ordering(ordering);
    std::cout << out.dump(2) << "\n";
    return kExitOk;
}

int cmd_serve(std::optional<int> port_flag, const std::string& bind) {
    int port = bwtx::kDefaultPort;
    if (port_flag) {
        port = *port_flag;
    } else if (const char* env = std::getenv("BWTX_PORT"); env && *env) {
        try {
            port = std::stoi(env);
        } catch (const std::exception&) {
            throw CLI::ValidationError("BWTX_PORT is not a port number");
        }
    }
    if (port < 0 || port > 65535) throw CLI::ValidationError("port out of range");

    bwtx::ServiceOptions options;
    options.tables = bwtx::preset_tables_from_env();
    bwtx::Service service(std::move(options));
    const int bound = service.bind(bind, port);
    if (bound < 0) throw RuntimeFailure("cannot bind " + bind + ":" + std::to_string(port));
    std::cout << "listening on http://" << bind << ":" << bound << std::endl;
    if (!service.listen_after_bind()) throw RuntimeFailure("server stopped unexpectedly");
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Build, view and analyse Burrows-Wheeler transforms under alphabet orderings", "bwtx"};
    app.require_subcommand(1);

    InputOptions input;
    OrderingOptions ord;
    std::string format = "text";
    std::string window_arg;
    std::string session_out;
    bool cache = false;
    bool permutations = false;
    std::string kind;
    std::size_t max_gap = bwtx::kDefaultMaxGap;
    std::optional<std::size_t> section;
    std::optional<int> port;
    std::string bind = "127.0.0.1";

    auto* transform = app.add_subcommand("transform", "Print the transform and its statistics");
    add_input_options(transform, input);
    add_ordering_options(transform, ord);
    transform->add_option("--format", format)->check(CLI::IsMember({"text", "json", "csv"}));

    auto* stats = app.add_subcommand("stats", "Compare run statistics across orderings");
    stats->add_option("text", input.text, "Literal input text (otherwise --file or stdin)");
    stats->add_option("-f,--file", input.file, "Read the text from a file ('-' for stdin)");
    add_ordering_options(stats, ord);
    stats->add_flag("--permutations", permutations, "Evaluate every permutation of the alphabet (at most 8 bytes)");
    stats->add_option("--format", format)->check(CLI::IsMember({"text", "json", "csv"}));
    stats->add_option("--session", session_out, "Also save the evaluated orderings as a .bwtx session");
    stats->add_flag("--cache", cache, "Embed each transform's last column in the saved session");

    auto* window = app.add_subcommand("window", "Print a window of the rotation matrix");
    add_input_options(window, input);
    add_ordering_options(window, ord);
    window->add_option("--window", window_arg, "Window as RxC@row,col (default 64x64@0,0)");
    window->add_option("--format", format)->check(CLI::IsMember({"text", "json"}));

    auto* analyze = app.add_subcommand("analyze", "Run-breaker, potential-run, section and pair analysis as JSON");
    add_input_options(analyze, input);
    add_ordering_options(analyze, ord);
    analyze->add_option("--kind", kind, "run_breakers | potential_runs | sections | pairs")->required();
    analyze->add_option("--max-gap", max_gap, "Gap budget for potential runs");
    analyze->add_option("--section", section, "Section index for pairs");
    analyze->add_option("--format", format)->check(CLI::IsMember({"text", "json"}));

    auto* serve = app.add_subcommand("serve", "Run the HTTP API");
    serve->add_option("--port", port, "Port (default $BWTX_PORT or 8374; 0 picks a free port)");
    serve->add_option("--bind", bind, "Bind address");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (serve->parsed()) return cmd_serve(port, bind);

        const auto tables = bwtx::preset_tables_from_env();
        const LoadedInput in = load_input(input);
        if (transform->parsed()) return cmd_transform(in, single_ordering(ord, in, tables), format);
        if (window->parsed()) {
            const bwtx::WindowSpec spec = window_arg.empty() ? bwtx::WindowSpec{} : parse_window(window_arg);
            return cmd_window(in, single_ordering(ord, in, tables), spec, format);
        }
        if (analyze->parsed()) return cmd_analyze(in, single_ordering(ord, in, tables), kind, max_gap, section);
        if (stats->parsed()) {
            std::vector<AlphabetOrdering> orderings = resolve_orderings(ord, in, tables);
            if (permutations) {
                auto perms = all_permutations(*in.text);
                orderings.insert(orderings.end(), perms.begin(), perms.end());
            }
            if (orderings.empty()) {
                for (auto p : bwtx::kAllPresets) {
                    if (p == bwtx::Preset::chapin_tate && !tables.chapin_tate) continue;
                    orderings.push_back(bwtx::preset_ordering(p, *in.text, tables));
                }
            }
            return cmd_stats(in, std::move(orderings), format, session_out, cache);
        }
    } catch (const CLI::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const RuntimeFailure& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitRuntime;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return e.code() == ErrorCode::WriteFailure ? kExitRuntime : kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitRuntime;
    }
    return kExitUsage;
}
