// chain2: a miniature Ethereum-style execution model and security lab
// Copyright 2026 The chain2 Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "types.hpp"

#include <optional>
#include <span>
#include <vector>

namespace chain2::merkle
{
/// One level of an inclusion proof.
struct ProofStep
{
    Hash32 sibling;
    bool sibling_is_left = false;

    bool operator==(const ProofStep&) const = default;
};

using Proof = std::vector<ProofStep>;

/// Root of the marker tree for zero leaves: hash(0x00).
Hash32 empty_root();

/// Binary tree where every parent is hash(left || right) and an odd level
/// duplicates its last node. A single leaf is its own root.
Hash32 root(std::span<const Hash32> leaves);

/// Sibling path for leaves[index]; nullopt when the index is out of range.
std::optional<Proof> prove(std::span<const Hash32> leaves, size_t index);

/// Folds the proof over the leaf and compares against the expected root.
bool verify(const Hash32& leaf, const Proof& proof, const Hash32& expected_root);

}  // namespace chain2::merkle
