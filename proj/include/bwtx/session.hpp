// Copyright 2026 The bwtx Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <zlib.h>

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <iterator>
#include <memory>
#include <nlohmann/json.hpp>
#include <set>
#include <string>
#include <vector>

#include "bwtx/base64.hpp"
#include "bwtx/error.hpp"
#include "bwtx/matrix_view.hpp"
#include "bwtx/ordering.hpp"
#include "bwtx/transform.hpp"

namespace bwtx {

inline constexpr int kSessionVersion = 1;

enum class CachePolicy { none, cache_L };

struct SessionTransform {
    std::string id;
    std::string name;
    AlphabetOrdering ordering;
    std::vector<index_t> highlights;  // ascending, unique
    std::shared_ptr<const Transform> built;
};

/// Everything needed to restore an exploration: the text, the transforms in
/// display order (left to right) and their highlighted rows.
struct Session {
    std::shared_ptr<const TextBuffer> text;
    std::vector<SessionTransform> transforms;
    index_t window_rows = kDefaultWindowRows;
    index_t window_cols = kDefaultWindowCols;
    CachePolicy cache_policy = CachePolicy::none;
};

/// Equality of persisted state; built transforms and the cache policy are not compared.
inline bool same_state(const Session& a, const Session& b) {
    if (!a.text || !b.text || !(*a.text == *b.text)) return false;
    if (a.window_rows != b.window_rows || a.window_cols != b.window_cols) return false;
    if (a.transforms.size() != b.transforms.size()) return false;
    for (std::size_t i = 0; i < a.transforms.size(); ++i) {
        const auto& x = a.transforms[i];
        const auto& y = b.transforms[i];
        if (x.id != y.id || x.name != y.name || !(x.ordering == y.ordering) || x.highlights != y.highlights) return false;
    }
    return true;
}

namespace detail {

inline Bytes deflate_bytes(std::string_view doc) {
    uLongf size = compressBound(static_cast<uLong>(doc.size()));
    Bytes out(size);
    const int rc = compress2(out.data(), &size, reinterpret_cast<const Bytef*>(doc.data()),
                             static_cast<uLong>(doc.size()), Z_BEST_COMPRESSION);
    if (rc != Z_OK) throw Error(ErrorCode::WriteFailure, "compression failed (zlib " + std::to_string(rc) + ")");
    out.resize(size);
    return out;
}

inline std::string inflate_bytes(ByteView stream, std::size_t limit) {
    z_stream zs{};
    if (inflateInit(&zs) != Z_OK) throw Error(ErrorCode::CorruptFile, "cannot initialise decompressor");
    zs.next_in = const_cast<Bytef*>(stream.data());
    zs.avail_in = static_cast<uInt>(stream.size());
    std::string out;
    char buf[1 << 16];
    int rc = Z_OK;
    do {
        zs.next_out = reinterpret_cast<Bytef*>(buf);
        zs.avail_out = sizeof(buf);
        rc = inflate(&zs, Z_NO_FLUSH);
        if (rc != Z_OK && rc != Z_STREAM_END) break;
        out.append(buf, sizeof(buf) - zs.avail_out);
        if (out.size() > limit) rc = Z_MEM_ERROR;
    } while (rc == Z_OK && (zs.avail_in > 0 || zs.avail_out == 0));
    const bool trailing = zs.avail_in != 0;
    inflateEnd(&zs);
    if (rc != Z_STREAM_END || trailing) throw Error(ErrorCode::CorruptFile, "not a complete compressed session document");
    return out;
}

}  // namespace detail

/// Canonical (sorted-key) JSON document of a session, before compression.
/// With cache set, each transform's last column is embedded, building it if needed.
inline std::string session_document(const Session& s, bool cache) {
    using nlohmann::json;
    if (!s.text) throw Error(ErrorCode::WriteFailure, "session has no text");
    json doc;
    doc["version"] = kSessionVersion;
    doc["text"] = base64::encode(s.text->data());
    doc["end_marker"] = s.text->end_marker();
    doc["window"] = {{"rows", s.window_rows}, {"cols", s.window_cols}};
    doc["transforms"] = json::array();
    for (const auto& t : s.transforms) {
        json entry;
        entry["id"] = t.id;
        entry["name"] = t.name;
        entry["order"] = t.ordering.order();
        entry["highlights"] = t.highlights;
        if (cache) {
            std::shared_ptr<const Transform> built = t.built;
            if (!built || !(built->ordering() == t.ordering)) {
                built = std::make_shared<const Transform>(build_transform(s.text, t.ordering));
            }
            entry["cached_L"] = base64::encode(built->last_column());
        }
        doc["transforms"].push_back(std::move(entry));
    }
    return doc.dump();
}

inline Bytes save_session(const Session& s, bool cache) { return detail::deflate_bytes(session_document(s, cache)); }

inline void save_session_file(const std::string& path, const Session& s, bool cache) {
    const Bytes data = save_session(s, cache);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out.write(reinterpret_cast<const char*>(data.data()), static_cast<std::streamsize>(data.size()));
    if (!out) throw Error(ErrorCode::WriteFailure, "cannot write " + path);
}

struct LoadOptions {
    std::size_t max_document_bytes = std::size_t{1} << 31;
};

struct LoadedSession {
    Session session;
    /// One entry per cached column that failed validation (code CacheInvalid);
    /// those transforms were rebuilt.
    std::vector<std::string> warnings;
    std::size_t from_cache = 0;
    std::size_t rebuilt = 0;
};

/// Restores a session and builds every transform, trusting valid cached columns.
inline LoadedSession load_session(ByteView stream, const LoadOptions& options = {}) {
    using nlohmann::json;
    const std::string text = detail::inflate_bytes(stream, options.max_document_bytes);
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception& e) {
        throw Error(ErrorCode::CorruptFile, std::string("session document is not JSON: ") + e.what());
    }
    auto corrupt = [](const std::string& what) { return Error(ErrorCode::CorruptFile, what); };
    if (!doc.is_object() || !doc.contains("version") || !doc["version"].is_number_integer()) {
        throw corrupt("session document has no version");
    }
    if (doc["version"].get<std::int64_t>() != kSessionVersion) {
        throw Error(ErrorCode::VersionUnsupported, "session version " + doc["version"].dump() + " is not supported");
    }

    LoadedSession result;
    Session& s = result.session;
    try {
        const int marker = doc.at("end_marker").get<int>();
        if (marker < 0 || marker > 255) throw corrupt("end marker out of range");
        s.text = std::make_shared<const TextBuffer>(base64::decode(doc.at("text").get<std::string>()),
                                                    static_cast<std::uint8_t>(marker));
        s.window_rows = doc.at("window").at("rows").get<index_t>();
        s.window_cols = doc.at("window").at("cols").get<index_t>();
        if (s.window_rows == 0 || s.window_cols == 0) throw corrupt("window dimensions must be positive");

        const std::size_t m = s.text->augmented_size();
        std::set<std::string> ids;
        for (const auto& entry : doc.at("transforms")) {
            Bytes order;
            for (int b : entry.at("order").get<std::vector<int>>()) {
                if (b < 0 || b > 255) throw corrupt("ordering byte out of range");
                order.push_back(static_cast<std::uint8_t>(b));
            }
            const std::string name = entry.at("name").get<std::string>();
            SessionTransform t{entry.at("id").get<std::string>(), name, AlphabetOrdering(name, std::move(order), *s.text),
                               {}, nullptr};
            if (!ids.insert(t.id).second) throw corrupt("duplicate transform id '" + t.id + "'");
            t.highlights = entry.at("highlights").get<std::vector<index_t>>();
            std::sort(t.highlights.begin(), t.highlights.end());
            t.highlights.erase(std::unique(t.highlights.begin(), t.highlights.end()), t.highlights.end());
            if (!t.highlights.empty() && t.highlights.back() >= m) throw corrupt("highlighted row out of range");

            if (entry.contains("cached_L")) {
                s.cache_policy = CachePolicy::cache_L;
                try {
                    Bytes column;
                    try {
                        column = base64::decode(entry.at("cached_L").get<std::string>());
                    } catch (const Error& e) {
                        throw Error(ErrorCode::CacheInvalid, e.detail());
                    }
                    t.built = std::make_shared<const Transform>(transform_from_last_column(s.text, t.ordering, std::move(column)));
                    ++result.from_cache;
                } catch (const Error& e) {
                    if (e.code() != ErrorCode::CacheInvalid) throw;
                    result.warnings.push_back("CacheInvalid: transform '" + t.id + "': " + e.detail() + "; rebuilt");
                }
            }
            if (!t.built) {
                t.built = std::make_shared<const Transform>(build_transform(s.text, t.ordering));
                ++result.rebuilt;
            }
            s.transforms.push_back(std::move(t));
        }
    } catch (const json::exception& e) {
        throw corrupt(std::string("malformed session document: ") + e.what());
    } catch (const Error& e) {
        if (e.code() == ErrorCode::CorruptFile) throw;
        throw corrupt(e.what());
    }
    return result;
}

inline LoadedSession load_session_file(const std::string& path, const LoadOptions& options = {}) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::CorruptFile, "cannot read " + path);
    const Bytes data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return load_session(data, options);
}

}  // namespace bwtx
