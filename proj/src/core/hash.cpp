// chain2: a miniature Ethereum-style execution model and security lab
// Copyright 2026 The chain2 Authors.
// SPDX-License-Identifier: Apache-2.0

#include <chain2/hash.hpp>

#include <openssl/sha.h>

namespace chain2
{
Hash32 hash(BytesView data)
{
    Hash32 h;
    SHA256(data.data(), data.size(), h.bytes.data());
    return h;
}

uint32_t selector(std::string_view signature)
{
    const auto h = hash(signature);
    return (uint32_t{h.bytes[0]} << 24) | (uint32_t{h.bytes[1]} << 16) | (uint32_t{h.bytes[2]} << 8) |
           uint32_t{h.bytes[3]};
}

}  // namespace chain2
