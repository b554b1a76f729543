// chain2: a miniature Ethereum-style execution model and security lab
// Copyright 2026 The chain2 Authors.
// SPDX-License-Identifier: Apache-2.0

#include <chain2/hash.hpp>
#include <chain2/merkle.hpp>

namespace chain2::merkle
{
namespace
{
Hash32 hash_pair(const Hash32& left, const Hash32& right)
{
    std::array<uint8_t, 64> buf{};
    std::copy(left.bytes.begin(), left.bytes.end(), buf.begin());
    std::copy(right.bytes.begin(), right.bytes.end(), buf.begin() + 32);
    return hash(BytesView{buf});
}

std::vector<Hash32> next_level(const std::vector<Hash32>& level)
{
    std::vector<Hash32> up;
    up.reserve((level.size() + 1) / 2);
    for (size_t i = 0; i < level.size(); i += 2)
    {
        const auto& right = i + 1 < level.size() ? level[i + 1] : level[i];
        up.push_back(hash_pair(level[i], right));
    }
    return up;
}
}  // namespace

Hash32 empty_root()
{
    static const Hash32 r = [] {
        const uint8_t marker = 0x00;
        return hash(BytesView{&marker, 1});
    }();
    return r;
}

Hash32 root(std::span<const Hash32> leaves)
{
    if (leaves.empty())
        return empty_root();
    std::vector<Hash32> level(leaves.begin(), leaves.end());
    while (level.size() > 1)
        level = next_level(level);
    return level.front();
}

std::optional<Proof> prove(std::span<const Hash32> leaves, size_t index)
{
    if (index >= leaves.size())
        return std::nullopt;
    Proof proof;
    std::vector<Hash32> level(leaves.begin(), leaves.end());
    while (level.size() > 1)
    {
        const bool is_right = index % 2 == 1;
        const size_t sibling = is_right ? index - 1 : std::min(index + 1, level.size() - 1);
        proof.push_back({level[sibling], is_right});
        level = next_level(level);
        index /= 2;
    }
    return proof;
}

bool verify(const Hash32& leaf, const Proof& proof, const Hash32& expected_root)
{
    Hash32 acc = leaf;
    for (const auto& step : proof)
        acc = step.sibling_is_left ? hash_pair(step.sibling, acc) : hash_pair(acc, step.sibling);
    return acc == expected_root;
}

}  // namespace chain2::merkle
