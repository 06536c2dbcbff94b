// Copyright 2026 The bwtx Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <openssl/evp.h>

#include <string>
#include <string_view>

#include "bwtx/error.hpp"
#include "bwtx/text.hpp"

namespace bwtx::base64 {

/// Standard alphabet with padding.
inline std::string encode(ByteView bytes) {
    std::string out(4 * ((bytes.size() + 2) / 3), '\0');
    if (bytes.empty()) return out;
    const int written = EVP_EncodeBlock(reinterpret_cast<unsigned char*>(out.data()), bytes.data(),
                                        static_cast<int>(bytes.size()));
    out.resize(static_cast<std::size_t>(written));
    return out;
}

/// Throws MalformedSpec on anything that is not canonical padded base64.
inline Bytes decode(std::string_view text) {
    if (text.size() % 4 != 0) throw Error(ErrorCode::MalformedSpec, "base64 length is not a multiple of 4");
    if (text.empty()) return {};
    Bytes out(3 * (text.size() / 4));
    const int written = EVP_DecodeBlock(out.data(), reinterpret_cast<const unsigned char*>(text.data()),
                                        static_cast<int>(text.size()));
    if (written < 0) throw Error(ErrorCode::MalformedSpec, "invalid base64");
    std::size_t padding = 0;
    if (text.back() == '=') ++padding;
    if (text.size() >= 2 && text[text.size() - 2] == '=') ++padding;
    out.resize(static_cast<std::size_t>(written) - padding);
    return out;
}

}  // namespace bwtx::base64
