// chain2: a miniature Ethereum-style execution model and security lab
// Copyright 2026 The chain2 Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "chain.hpp"
#include "types.hpp"
#include "word256.hpp"

#include <span>
#include <string_view>
#include <vector>

namespace chain2
{
namespace calldata
{
/// selector(signature) as 4 big-endian bytes followed by one 32-byte word per argument.
Bytes encode_call(std::string_view signature, std::span<const Word256> args = {});

/// The index-th 32-byte word of `data`; throws ParseError when data is too short.
Word256 decode_word(BytesView data, size_t index = 0);

}  // namespace calldata

namespace token
{
inline constexpr std::string_view kTransferEvent = "Transfer(address,address,uint256)";
inline constexpr int64_t kDefaultGas = 300'000;

Word256 transfer_topic();

/// H(0x01 || holder)
Word256 balance_slot(const Address& holder);

/// H(0x02 || owner || spender)
Word256 allowance_slot(const Address& owner, const Address& spender);

struct Holder
{
    Address address;
    Word256 balance;
};

/// Thin client over a deployed token: builds ABI calls, submits them as
/// transactions on the chain, and decodes results.
class Client
{
public:
    Client(chain::Chain& chain, const Address& contract) : chain_{chain}, contract_{contract} {}

    /// Deploys `source` (an .mvm contract text) with `supply` as constructor argument.
    static chain::Receipt deploy(chain::Chain& chain, const Address& from, std::string_view source,
        const Word256& supply, int64_t gas = kDefaultGas);

    const Address& address() const noexcept { return contract_; }

    Word256 total_supply() const;
    Word256 balance_of(const Address& holder) const;
    Word256 allowance(const Address& owner, const Address& spender) const;

    chain::Receipt transfer(const Address& from, const Address& to, const Word256& amount);
    chain::Receipt approve(const Address& owner, const Address& spender, const Word256& amount);
    chain::Receipt transfer_from(const Address& spender, const Address& from, const Address& to,
        const Word256& amount);

    /// Every address seen in this contract's Transfer logs that currently
    /// holds a nonzero balance, largest balance first.
    std::vector<Holder> holders() const;

    /// Transfer logs emitted by this contract across the whole chain.
    std::vector<vm::Log> transfer_logs() const;

private:
    Word256 view_word(std::string_view signature, std::span<const Word256> args) const;
    chain::Receipt send(const Address& from, std::string_view signature, std::span<const Word256> args);

    chain::Chain& chain_;
    Address contract_;
};

}  // namespace token
}  // namespace chain2
