// chain2: a miniature Ethereum-style execution model and security lab
// Copyright 2026 The chain2 Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "types.hpp"

#include <string_view>

namespace chain2
{
/// The repository hash (SHA-256). Used for state commitment, block hashes,
/// ABI selectors and address derivation alike.
Hash32 hash(BytesView data);

inline Hash32 hash(std::string_view text)
{
    return hash(BytesView{reinterpret_cast<const uint8_t*>(text.data()), text.size()});
}

/// First 4 bytes of hash(signature), as a big-endian integer.
uint32_t selector(std::string_view signature);

}  // namespace chain2
