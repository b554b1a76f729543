// chain2: a miniature Ethereum-style execution model and security lab
// Copyright 2026 The chain2 Authors.
// SPDX-License-Identifier: Apache-2.0

#include <chain2/vm.hpp>

namespace chain2::vm
{
Account& Journal::touch(WorldState& state, const Address& a, int depth)
{
    if (!state.contains(a))
        entries_.push_back({Kind::created, depth, a, {}, {}, 0, {}});
    return state.at(a);
}

void Journal::set_storage(WorldState& state, const Address& a, const Word256& key, const Word256& value, int depth)
{
    auto& acct = touch(state, a, depth);
    entries_.push_back({Kind::storage, depth, a, key, acct.load(key), 0, {}});
    acct.store(key, value);
}

void Journal::set_balance(WorldState& state, const Address& a, const Word256& value, int depth)
{
    auto& acct = touch(state, a, depth);
    entries_.push_back({Kind::balance, depth, a, {}, acct.balance, 0, {}});
    acct.balance = value;
}

void Journal::set_nonce(WorldState& state, const Address& a, uint64_t value, int depth)
{
    auto& acct = touch(state, a, depth);
    entries_.push_back({Kind::nonce, depth, a, {}, {}, acct.nonce, {}});
    acct.nonce = value;
}

void Journal::set_code(WorldState& state, const Address& a, Bytes code, int depth)
{
    auto& acct = touch(state, a, depth);
    entries_.push_back({Kind::code, depth, a, {}, {}, 0, std::move(acct.code)});
    acct.code = std::move(code);
}

void Journal::revert(const Checkpoint& cp, WorldState& state, std::vector<Log>& logs)
{
    while (entries_.size() > cp.entries)
    {
        auto& e = entries_.back();
        switch (e.kind)
        {
        case Kind::created:
            state.accounts.erase(e.address);
            break;
        case Kind::storage:
            state.at(e.address).store(e.key, e.old_word);
            break;
        case Kind::balance:
            state.at(e.address).balance = e.old_word;
            break;
        case Kind::nonce:
            state.at(e.address).nonce = e.old_nonce;
            break;
        case Kind::code:
            state.at(e.address).code = std::move(e.old_code);
            break;
        }
        entries_.pop_back();
    }
    if (logs.size() > cp.logs)
        logs.resize(cp.logs);
}

}  // namespace chain2::vm
