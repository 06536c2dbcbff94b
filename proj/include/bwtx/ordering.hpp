// Copyright 2026 The bwtx Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iterator>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "bwtx/error.hpp"
#include "bwtx/text.hpp"

namespace bwtx {

/// Total order over the bytes of a text. The end marker always has rank 0 and
/// order[i] has rank i + 1.
class AlphabetOrdering {
public:
    static constexpr std::uint16_t kAbsent = 0xffff;

    AlphabetOrdering(std::string name, Bytes order, const TextBuffer& text)
        : name_(std::move(name)), order_(std::move(order)), end_marker_(text.end_marker()) {
        rank_.fill(kAbsent);
        rank_[end_marker_] = 0;
        for (std::size_t i = 0; i < order_.size(); ++i) {
            const std::uint8_t b = order_[i];
            if (b == end_marker_ || !text.contains(b)) {
                throw Error(ErrorCode::UnknownCharacter, "'" + escape_byte(b) + "' does not occur in the text");
            }
            if (rank_[b] != kAbsent) {
                throw Error(ErrorCode::DuplicateCharacter, "'" + escape_byte(b) + "' is listed more than once");
            }
            rank_[b] = static_cast<std::uint16_t>(i + 1);
        }
        std::string missing;
        for (std::uint8_t b : text.alphabet()) {
            if (rank_[b] == kAbsent) missing += (missing.empty() ? "" : ",") + escape_byte(b);
        }
        if (!missing.empty()) throw Error(ErrorCode::MissingCharacters, "ordering does not list: " + missing);
    }

    /// Ordering over an explicit byte list, checked for duplicates and the end
    /// marker only. Coverage of a text is checked when a transform is built.
    static AlphabetOrdering from_order(std::string name, Bytes order, std::uint8_t end_marker) {
        AlphabetOrdering o;
        o.name_ = std::move(name);
        o.order_ = std::move(order);
        o.end_marker_ = end_marker;
        o.rank_.fill(kAbsent);
        o.rank_[end_marker] = 0;
        for (std::size_t i = 0; i < o.order_.size(); ++i) {
            const std::uint8_t b = o.order_[i];
            if (b == end_marker) throw Error(ErrorCode::UnknownCharacter, "the end marker cannot be reordered");
            if (o.rank_[b] != kAbsent) {
                throw Error(ErrorCode::DuplicateCharacter, "'" + escape_byte(b) + "' is listed more than once");
            }
            o.rank_[b] = static_cast<std::uint16_t>(i + 1);
        }
        return o;
    }

    const std::string& name() const noexcept { return name_; }
    void set_name(std::string name) { name_ = std::move(name); }
    const Bytes& order() const noexcept { return order_; }
    std::uint8_t end_marker() const noexcept { return end_marker_; }
    std::size_t sigma() const noexcept { return order_.size(); }

    std::uint16_t rank(std::uint8_t b) const noexcept { return rank_[b]; }
    bool contains(std::uint8_t b) const noexcept { return rank_[b] != kAbsent && b != end_marker_; }
    bool less(std::uint8_t a, std::uint8_t b) const noexcept { return rank_[a] < rank_[b]; }

    /// "c<a<b<d" with non-printables escaped.
    std::string describe() const {
        std::string out;
        for (std::size_t i = 0; i < order_.size(); ++i) {
            if (i) out += '<';
            out += escape_byte(order_[i]);
        }
        return out;
    }

    /// Same order, same marker; names are labels only.
    friend bool operator==(const AlphabetOrdering& a, const AlphabetOrdering& b) {
        return a.end_marker_ == b.end_marker_ && a.order_ == b.order_;
    }

private:
    AlphabetOrdering() = default;

    std::string name_;
    Bytes order_;
    std::uint8_t end_marker_ = '$';
    std::array<std::uint16_t, 256> rank_{};
};

enum class Preset { ascii, reverse_ascii, least_frequent, most_frequent, chapin_tate, order_of_appearance, vowels_first };

inline constexpr std::array<Preset, 7> kAllPresets = {
    Preset::ascii,        Preset::reverse_ascii,        Preset::least_frequent, Preset::most_frequent,
    Preset::chapin_tate,  Preset::order_of_appearance,  Preset::vowels_first,
};

constexpr std::string_view to_string(Preset p) noexcept {
    switch (p) {
        case Preset::ascii: return "ascii";
        case Preset::reverse_ascii: return "reverse_ascii";
        case Preset::least_frequent: return "least_frequent";
        case Preset::most_frequent: return "most_frequent";
        case Preset::chapin_tate: return "chapin_tate";
        case Preset::order_of_appearance: return "order_of_appearance";
        case Preset::vowels_first: return "vowels_first";
    }
    return "";
}

inline std::optional<Preset> find_preset(std::string_view name) {
    std::string norm(name);
    std::replace(norm.begin(), norm.end(), '-', '_');
    for (Preset p : kAllPresets) {
        if (to_string(p) == norm) return p;
    }
    return std::nullopt;
}

inline Preset parse_preset(std::string_view name) {
    if (auto p = find_preset(name)) return *p;
    throw Error(ErrorCode::UnknownPreset, "unknown preset '" + std::string(name) + "'");
}

/// Data tables some presets depend on. The Chapin-Tate table is not bundled;
/// callers supply it (bytes least-first) or the preset reports PresetUnavailable.
struct PresetTables {
    std::optional<Bytes> chapin_tate;
};

/// Reads the Chapin-Tate table from the file named by BWTX_CHAPIN_TATE_TABLE, if set.
inline PresetTables preset_tables_from_env() {
    PresetTables tables;
    if (const char* path = std::getenv("BWTX_CHAPIN_TATE_TABLE"); path && *path) {
        std::ifstream in(path, std::ios::binary);
        if (in) tables.chapin_tate = Bytes(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
    }
    return tables;
}

inline AlphabetOrdering preset_ordering(Preset preset, const TextBuffer& text, const PresetTables& tables = {}) {
    const auto& counts = text.counts();
    Bytes alphabet = text.alphabet();
    Bytes order;
    switch (preset) {
        case Preset::ascii:
            order = alphabet;
            break;
        case Preset::reverse_ascii:
            order.assign(alphabet.rbegin(), alphabet.rend());
            break;
        case Preset::least_frequent:
            order = alphabet;
            std::stable_sort(order.begin(), order.end(),
                             [&](std::uint8_t a, std::uint8_t b) { return counts[a] < counts[b]; });
            break;
        case Preset::most_frequent:
            order = alphabet;
            std::stable_sort(order.begin(), order.end(),
                             [&](std::uint8_t a, std::uint8_t b) { return counts[a] > counts[b]; });
            break;
        case Preset::order_of_appearance: {
            std::array<bool, 256> seen{};
            for (std::uint8_t b : text.data()) {
                if (!seen[b]) {
                    seen[b] = true;
                    order.push_back(b);
                    if (order.size() == alphabet.size()) break;
                }
            }
            break;
        }
        case Preset::vowels_first: {
            static constexpr std::string_view kVowels = "aeiouAEIOU";
            std::array<bool, 256> taken{};
            for (char v : kVowels) {
                const auto b = static_cast<std::uint8_t>(v);
                if (text.contains(b)) {
                    order.push_back(b);
                    taken[b] = true;
                }
            }
            for (std::uint8_t b : alphabet) {
                if (!taken[b]) order.push_back(b);
            }
            break;
        }
        case Preset::chapin_tate: {
            if (!tables.chapin_tate) {
                throw Error(ErrorCode::PresetUnavailable, "no Chapin-Tate ordering table is configured");
            }
            std::array<bool, 256> taken{};
            for (std::uint8_t b : *tables.chapin_tate) {
                if (text.contains(b) && !taken[b]) {
                    order.push_back(b);
                    taken[b] = true;
                }
            }
            for (std::uint8_t b : alphabet) {
                if (!taken[b]) order.push_back(b);
            }
            break;
        }
    }
    return AlphabetOrdering(std::string(to_string(preset)), std::move(order), text);
}

namespace detail {

inline int hex_value(char c) {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
}

}  // namespace detail

/// Parses "c,a,b,d" (least first). Each item is a single byte or a \xNN escape;
/// a literal comma is written \x2c.
inline Bytes parse_ordering_bytes(std::string_view spec) {
    if (spec.empty()) throw Error(ErrorCode::MalformedSpec, "ordering list is empty");
    Bytes out;
    std::size_t pos = 0;
    while (true) {
        const std::size_t comma = spec.find(',', pos);
        const std::string_view item = spec.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos);
        if (item.size() == 1) {
            out.push_back(static_cast<std::uint8_t>(item[0]));
        } else if (item.size() == 4 && item[0] == '\\' && (item[1] == 'x' || item[1] == 'X') &&
                   detail::hex_value(item[2]) >= 0 && detail::hex_value(item[3]) >= 0) {
            out.push_back(static_cast<std::uint8_t>(detail::hex_value(item[2]) * 16 + detail::hex_value(item[3])));
        } else {
            throw Error(ErrorCode::MalformedSpec, "ordering item '" + std::string(item) + "' is not a single byte");
        }
        if (comma == std::string_view::npos) break;
        pos = comma + 1;
    }
    return out;
}

inline AlphabetOrdering parse_ordering(std::string_view spec, const TextBuffer& text) {
    Bytes order = parse_ordering_bytes(spec);
    return AlphabetOrdering("custom", std::move(order), text);
}

/// Inverse of parse_ordering_bytes.
inline std::string format_ordering(ByteView order) {
    std::string out;
    for (std::size_t i = 0; i < order.size(); ++i) {
        if (i) out += ',';
        const std::uint8_t b = order[i];
        if (b == ',') {
            out += "\\x2c";
        } else {
            out += escape_byte(b);
        }
    }
    return out;
}

/// A preset name or a custom comma list.
inline AlphabetOrdering resolve_ordering(std::string_view spec, const TextBuffer& text,
                                         const PresetTables& tables = {}) {
    if (auto preset = find_preset(spec)) return preset_ordering(*preset, text, tables);
    return parse_ordering(spec, text);
}

}  // namespace bwtx
