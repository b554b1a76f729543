// chain2: a miniature Ethereum-style execution model and security lab
// Copyright 2026 The chain2 Authors.
// SPDX-License-Identifier: Apache-2.0

#include <chain2/hash.hpp>
#include <chain2/state.hpp>

#include <iterator>

namespace chain2
{
namespace
{
struct Leaves
{
    std::vector<Address> addresses;
    std::vector<Hash32> hashes;
};

Leaves account_leaves(const WorldState& state)
{
    Leaves out;
    for (const auto& [addr, acct] : state.accounts)
    {
        if (acct.is_empty())
            continue;
        out.addresses.push_back(addr);
        out.hashes.push_back(account_leaf(addr, acct));
    }
    return out;
}
}  // namespace

void WorldState::prune_empty()
{
    std::erase_if(accounts, [](const auto& kv) { return kv.second.is_empty(); });
}

Hash32 storage_root(const Account& account)
{
    std::vector<Hash32> leaves;
    leaves.reserve(account.storage.size());
    for (const auto& [key, value] : account.storage)
    {
        if (value.is_zero())
            continue;
        std::array<uint8_t, 64> buf{};
        const auto k = key.to_be_bytes();
        const auto v = value.to_be_bytes();
        std::copy(k.begin(), k.end(), buf.begin());
        std::copy(v.begin(), v.end(), buf.begin() + 32);
        leaves.push_back(hash(BytesView{buf}));
    }
    return merkle::root(leaves);
}

Hash32 account_leaf(const Address& address, const Account& account)
{
    Bytes buf;
    buf.reserve(20 + 8 + 32 + 32 + 32);
    append(buf, address.view());
    append_be64(buf, account.nonce);
    const auto balance = account.balance.to_be_bytes();
    append(buf, balance);
    append(buf, storage_root(account).view());
    append(buf, hash(account.code).view());
    return hash(buf);
}

StateCommitment state_root(const WorldState& state)
{
    return merkle::root(account_leaves(state).hashes);
}

std::optional<merkle::Proof> prove_account(const WorldState& state, const Address& address)
{
    const auto leaves = account_leaves(state);
    const auto it = std::lower_bound(leaves.addresses.begin(), leaves.addresses.end(), address);
    if (it == leaves.addresses.end() || *it != address)
        return std::nullopt;
    return merkle::prove(leaves.hashes, static_cast<size_t>(std::distance(leaves.addresses.begin(), it)));
}

bool verify_membership(const StateCommitment& root, const Address& address, const Account& account,
    const merkle::Proof& proof)
{
    return merkle::verify(account_leaf(address, account), proof, root);
}

}  // namespace chain2
