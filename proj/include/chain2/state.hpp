// chain2: a miniature Ethereum-style execution model and security lab
// Copyright 2026 The chain2 Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "merkle.hpp"
#include "types.hpp"
#include "word256.hpp"

#include <cstdint>
#include <map>
#include <optional>

namespace chain2
{
struct Account
{
    uint64_t nonce = 0;
    Word256 balance;
    /// Zero-valued slots are never stored.
    std::map<Word256, Word256> storage;
    /// Empty for externally owned accounts.
    Bytes code;

    bool operator==(const Account&) const = default;

    bool is_contract() const noexcept { return !code.empty(); }
    bool is_empty() const noexcept { return nonce == 0 && balance.is_zero() && storage.empty() && code.empty(); }

    Word256 load(const Word256& key) const
    {
        const auto it = storage.find(key);
        return it == storage.end() ? Word256{} : it->second;
    }

    /// Writing zero erases the slot.
    void store(const Word256& key, const Word256& value)
    {
        if (value.is_zero())
            storage.erase(key);
        else
            storage[key] = value;
    }
};

/// Address -> account mapping. A missing address behaves as an empty account.
class WorldState
{
public:
    std::map<Address, Account> accounts;

    bool operator==(const WorldState&) const = default;

    const Account& get(const Address& a) const
    {
        static const Account empty;
        const auto it = accounts.find(a);
        return it == accounts.end() ? empty : it->second;
    }

    Account& at(const Address& a) { return accounts[a]; }
    bool contains(const Address& a) const { return accounts.contains(a); }

    /// Drops entries that are indistinguishable from absent accounts.
    void prune_empty();
};

using StateCommitment = Hash32;

Hash32 storage_root(const Account& account);

/// hash(address || nonce_be8 || balance_be32 || storage_root || hash(code)).
Hash32 account_leaf(const Address& address, const Account& account);

/// Binary Merkle root over account leaves sorted by address. Empty accounts
/// are skipped so that an explicit empty account commits like an absent one.
StateCommitment state_root(const WorldState& state);

/// Inclusion proof for a non-empty account; nullopt otherwise.
std::optional<merkle::Proof> prove_account(const WorldState& state, const Address& address);

bool verify_membership(const StateCommitment& root, const Address& address, const Account& account,
    const merkle::Proof& proof);

}  // namespace chain2
