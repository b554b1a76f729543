// chain2: a miniature Ethereum-style execution model and security lab
// Copyright 2026 The chain2 Authors.
// SPDX-License-Identifier: Apache-2.0

#include <chain2/asm.hpp>
#include <chain2/hash.hpp>
#include <chain2/token.hpp>

#include <algorithm>
#include <set>

namespace chain2
{
namespace calldata
{
Bytes encode_call(std::string_view signature, std::span<const Word256> args)
{
    const auto sel = selector(signature);
    Bytes out{static_cast<uint8_t>(sel >> 24), static_cast<uint8_t>(sel >> 16), static_cast<uint8_t>(sel >> 8),
        static_cast<uint8_t>(sel)};
    for (const auto& a : args)
    {
        const auto w = a.to_be_bytes();
        out.insert(out.end(), w.begin(), w.end());
    }
    return out;
}

Word256 decode_word(BytesView data, size_t index)
{
    if (data.size() < 32 * (index + 1))
        throw ParseError("return data holds fewer than " + std::to_string(index + 1) + " words");
    return Word256::from_be_bytes(data.subspan(32 * index, 32));
}

}  // namespace calldata

namespace token
{
Word256 transfer_topic()
{
    return Word256::from_hash(hash(kTransferEvent));
}

Word256 balance_slot(const Address& holder)
{
    Bytes buf{0x01};
    append(buf, holder.view());
    return Word256::from_hash(hash(buf));
}

Word256 allowance_slot(const Address& owner, const Address& spender)
{
    Bytes buf{0x02};
    append(buf, owner.view());
    append(buf, spender.view());
    return Word256::from_hash(hash(buf));
}

chain::Receipt Client::deploy(chain::Chain& chain, const Address& from, std::string_view source,
    const Word256& supply, int64_t gas)
{
    const Word256 args[] = {supply};
    chain::Transaction tx;
    tx.nonce = chain.next_nonce(from);
    tx.gas_price = Word256{1};
    tx.gas_limit = gas;
    tx.payload = assembly::build_init_code(assembly::parse_contract(source), args);
    tx.sender = from;
    return chain.transact(std::move(tx));
}

Word256 Client::view_word(std::string_view signature, std::span<const Word256> args) const
{
    const auto out = chain_.view(Address{}, contract_, calldata::encode_call(signature, args));
    if (!out.ok())
        throw std::runtime_error(std::string(signature) + " failed: " + std::string(vm::to_string(out.status)));
    return calldata::decode_word(out.return_data);
}

chain::Receipt Client::send(const Address& from, std::string_view signature, std::span<const Word256> args)
{
    chain::Transaction tx;
    tx.nonce = chain_.next_nonce(from);
    tx.gas_price = Word256{1};
    tx.gas_limit = kDefaultGas;
    tx.to = contract_;
    tx.payload = calldata::encode_call(signature, args);
    tx.sender = from;
    return chain_.transact(std::move(tx));
}

Word256 Client::total_supply() const
{
    return view_word("totalSupply()", {});
}

Word256 Client::balance_of(const Address& holder) const
{
    const Word256 args[] = {Word256::from_address(holder)};
    return view_word("balanceOf(address)", args);
}

Word256 Client::allowance(const Address& owner, const Address& spender) const
{
    const Word256 args[] = {Word256::from_address(owner), Word256::from_address(spender)};
    return view_word("allowance(address,address)", args);
}

chain::Receipt Client::transfer(const Address& from, const Address& to, const Word256& amount)
{
    const Word256 args[] = {Word256::from_address(to), amount};
    return send(from, "transfer(address,uint256)", args);
}

chain::Receipt Client::approve(const Address& owner, const Address& spender, const Word256& amount)
{
    const Word256 args[] = {Word256::from_address(spender), amount};
    return send(owner, "approve(address,uint256)", args);
}

chain::Receipt Client::transfer_from(const Address& spender, const Address& from, const Address& to,
    const Word256& amount)
{
    const Word256 args[] = {Word256::from_address(from), Word256::from_address(to), amount};
    return send(spender, "transferFrom(address,address,uint256)", args);
}

std::vector<vm::Log> Client::transfer_logs() const
{
    const auto topic = transfer_topic();
    std::vector<vm::Log> out;
    for (const auto& b : chain_.blocks())
        for (const auto& r : b.receipts)
            for (const auto& log : r.logs)
                if (log.address == contract_ && log.topics.size() == 3 && log.topics[0] == topic)
                    out.push_back(log);
    return out;
}

std::vector<Holder> Client::holders() const
{
    std::set<Address> seen;
    for (const auto& log : transfer_logs())
        for (size_t i = 1; i < 3; ++i)
            if (const auto a = log.topics[i].to_address(); !a.is_zero())
                seen.insert(a);

    std::vector<Holder> out;
    for (const auto& a : seen)
        if (auto bal = balance_of(a); !bal.is_zero())
            out.push_back({a, bal});
    std::stable_sort(out.begin(), out.end(), [](const auto& x, const auto& y) { return x.balance > y.balance; });
    return out;
}

}  // namespace token
}  // namespace chain2
