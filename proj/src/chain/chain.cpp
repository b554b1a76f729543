// chain2: a miniature Ethereum-style execution model and security lab
// Copyright 2026 The chain2 Authors.
// SPDX-License-Identifier: Apache-2.0

#include <chain2/chain.hpp>
#include <chain2/hash.hpp>
#include <chain2/merkle.hpp>

#include <algorithm>
#include <bit>
#include <random>

namespace chain2::chain
{
namespace
{
void append_word(Bytes& out, const Word256& w)
{
    const auto b = w.to_be_bytes();
    out.insert(out.end(), b.begin(), b.end());
}

void mine_header(Block& b, bool deterministic)
{
    uint64_t nonce = 0;
    if (!deterministic)
        nonce = std::random_device{}() | (uint64_t{std::random_device{}()} << 32);
    for (;; ++nonce)
    {
        b.nonce = nonce;
        b.hash = header_hash(b);
        if (leading_zero_bits(b.hash) >= b.difficulty_bits)
            return;
    }
}

Block genesis_block(const WorldState& genesis, const ChainConfig& config)
{
    Block b;
    b.timestamp = config.genesis_timestamp;
    b.state_root = state_root(genesis);
    b.tx_root = transactions_root({});
    b.difficulty_bits = config.difficulty_bits;
    b.miner = config.miner;
    mine_header(b, true);
    return b;
}
}  // namespace

Bytes Transaction::encode() const
{
    Bytes out;
    append_be64(out, nonce);
    append_word(out, gas_price);
    append_be64(out, static_cast<uint64_t>(gas_limit));
    append(out, to.view());
    append_word(out, value);
    append(out, sender.view());
    append(out, payload);
    return out;
}

Hash32 Transaction::hash() const
{
    return chain2::hash(encode());
}

Address derive_address(const Address& sender, uint64_t nonce)
{
    Bytes buf;
    append(buf, sender.view());
    append_be64(buf, nonce);
    const auto h = hash(buf);
    return Address::from_view(h.view().subspan(12));
}

Receipt apply_transaction(WorldState& state, const Transaction& tx, const vm::BlockContext& ctx, const Address& miner)
{
    const auto& sender = state.get(tx.sender);
    if (sender.is_contract())
        throw TxRejected("sender is a contract account");
    if (tx.nonce != sender.nonce)
        throw TxRejected("bad nonce: expected " + std::to_string(sender.nonce) + ", got " + std::to_string(tx.nonce));
    if (tx.gas_limit < kIntrinsicGas)
        throw TxRejected("gas limit below intrinsic gas");
    const auto max_fee = checked_mul(Word256{static_cast<uint64_t>(tx.gas_limit)}, tx.gas_price);
    const auto upfront = max_fee ? checked_add(*max_fee, tx.value) : std::nullopt;
    if (!upfront || *upfront > sender.balance)
        throw TxRejected("insufficient balance for value + gasLimit * gasPrice");

    Receipt receipt;
    receipt.tx_hash = tx.hash();
    {
        auto& s = state.at(tx.sender);
        s.balance -= *max_fee;
        ++s.nonce;
    }
    const WorldState checkpoint = state;

    vm::Frame frame;
    frame.caller = tx.sender;
    frame.call_value = tx.value;
    frame.gas_remaining = tx.gas_limit - kIntrinsicGas;

    vm::ExecOutcome out;
    if (tx.is_creation())
    {
        const auto addr = derive_address(tx.sender, tx.nonce);
        if (state.get(addr).is_contract() || state.get(addr).nonce != 0)
        {
            out.status = vm::Status::fault;
            out.fault_reason = "address collision";
            out.gas_used = frame.gas_remaining;
        }
        else
        {
            state.at(tx.sender).balance -= tx.value;
            auto& created = state.at(addr);
            created.balance += tx.value;
            created.nonce = 1;
            frame.kind = vm::CallKind::create;
            frame.code_address = addr;
            frame.storage_address = addr;
            frame.code = tx.payload;
            out = vm::execute(state, std::move(frame), ctx);
            if (out.ok())
            {
                state.at(addr).code = out.return_data;
                receipt.contract_address = addr;
            }
        }
    }
    else
    {
        state.at(tx.sender).balance -= tx.value;
        state.at(tx.to).balance += tx.value;
        frame.code_address = tx.to;
        frame.storage_address = tx.to;
        frame.call_data = tx.payload;
        frame.code = state.get(tx.to).code;
        if (frame.code.empty())
        {
            out.gas_left = frame.gas_remaining;
        }
        else
            out = vm::execute(state, std::move(frame), ctx);
    }

    if (!out.ok())
        state = checkpoint;

    receipt.status = out.status;
    receipt.gas_used = kIntrinsicGas + out.gas_used;
    receipt.logs = std::move(out.logs);
    receipt.return_data = std::move(out.return_data);
    receipt.trace = std::move(out.trace);

    const auto fee = Word256{static_cast<uint64_t>(receipt.gas_used)} * tx.gas_price;
    state.at(tx.sender).balance += *max_fee - fee;
    if (!fee.is_zero())
        state.at(miner).balance += fee;
    state.prune_empty();
    return receipt;
}

Bytes header_bytes(const Block& b)
{
    Bytes out;
    append_be64(out, b.number);
    append_be64(out, b.timestamp);
    append(out, b.parent_hash.view());
    append(out, b.state_root.view());
    append(out, b.tx_root.view());
    append_be64(out, b.difficulty_bits);
    append(out, b.miner.view());
    append_be64(out, b.nonce);
    return out;
}

Hash32 header_hash(const Block& b)
{
    return hash(header_bytes(b));
}

unsigned leading_zero_bits(const Hash32& h) noexcept
{
    unsigned n = 0;
    for (auto byte : h.bytes)
    {
        if (byte != 0)
            return n + static_cast<unsigned>(std::countl_zero(byte));
        n += 8;
    }
    return n;
}

Hash32 transactions_root(const std::vector<Transaction>& txs)
{
    std::vector<Hash32> leaves;
    leaves.reserve(txs.size());
    for (const auto& tx : txs)
        leaves.push_back(tx.hash());
    return merkle::root(leaves);
}

bool Mempool::add(Transaction tx)
{
    return pending_.try_emplace({tx.sender, tx.nonce}, std::move(tx)).second;
}

void Mempool::erase(const Transaction& tx)
{
    pending_.erase({tx.sender, tx.nonce});
}

std::optional<uint64_t> Mempool::highest_nonce(const Address& sender) const
{
    std::optional<uint64_t> best;
    for (const auto& [key, tx] : pending_)
        if (key.first == sender)
            best = std::max(best.value_or(0), key.second);
    return best;
}

std::vector<Transaction> Mempool::ordered() const
{
    std::vector<Transaction> txs;
    txs.reserve(pending_.size());
    for (const auto& [key, tx] : pending_)
        txs.push_back(tx);
    // The map already iterates by (sender, nonce), so a stable sort on price keeps the tie order.
    std::stable_sort(txs.begin(), txs.end(), [](const auto& a, const auto& b) { return a.gas_price > b.gas_price; });
    return txs;
}

vm::BlockContext context_after(const Block& parent, uint64_t genesis_timestamp,
    const std::map<uint64_t, Hash32>& recent_hashes)
{
    vm::BlockContext ctx;
    ctx.number = parent.number + 1;
    ctx.timestamp = genesis_timestamp + kBlockInterval * ctx.number;
    ctx.parent_hash = parent.hash;
    ctx.recent_hashes = recent_hashes;
    return ctx;
}

Block build_block(Mempool& mempool, WorldState& state, const Block& parent, const ChainConfig& config,
    const std::map<uint64_t, Hash32>& recent_hashes)
{
    const auto ctx = context_after(parent, config.genesis_timestamp, recent_hashes);
    Block b;
    b.number = ctx.number;
    b.timestamp = ctx.timestamp;
    b.parent_hash = parent.hash;
    b.difficulty_bits = config.difficulty_bits;
    b.miner = config.miner;

    for (const auto& tx : mempool.ordered())
    {
        try
        {
            b.receipts.push_back(apply_transaction(state, tx, ctx, config.miner));
            b.transactions.push_back(tx);
            mempool.erase(tx);
        }
        catch (const TxRejected&)
        {
            if (tx.nonce <= state.get(tx.sender).nonce)
                mempool.erase(tx);
        }
    }
    if (!config.block_reward.is_zero())
        state.at(config.miner).balance += config.block_reward;

    b.state_root = state_root(state);
    b.tx_root = transactions_root(b.transactions);
    mine_header(b, config.deterministic);
    return b;
}

Chain::Chain(ChainConfig config, WorldState genesis)
  : config_{std::move(config)}, genesis_{std::move(genesis)}, state_{genesis_}
{
    genesis_.prune_empty();
    state_ = genesis_;
    blocks_.push_back(genesis_block(genesis_, config_));
}

std::map<uint64_t, Hash32> Chain::recent_hashes() const
{
    std::map<uint64_t, Hash32> out;
    const auto first = blocks_.size() > vm::kBlockHashWindow ? blocks_.size() - vm::kBlockHashWindow : 0;
    for (size_t i = first; i < blocks_.size(); ++i)
        out[blocks_[i].number] = blocks_[i].hash;
    return out;
}

vm::BlockContext Chain::next_context() const
{
    return context_after(head(), config_.genesis_timestamp, recent_hashes());
}

uint64_t Chain::next_nonce(const Address& sender) const
{
    const auto account_nonce = state_.get(sender).nonce;
    const auto queued = mempool_.highest_nonce(sender);
    return queued && *queued >= account_nonce ? *queued + 1 : account_nonce;
}

void Chain::submit(Transaction tx)
{
    if (!mempool_.add(std::move(tx)))
        throw TxRejected("a transaction with this sender and nonce is already pending");
}

const Block& Chain::mine()
{
    blocks_.push_back(build_block(mempool_, state_, head(), config_, recent_hashes()));
    return blocks_.back();
}

Receipt Chain::transact(Transaction tx)
{
    const auto h = tx.hash();
    submit(std::move(tx));
    const auto& b = mine();
    for (const auto& r : b.receipts)
        if (r.tx_hash == h)
            return r;
    throw TxRejected("transaction was not included");
}

vm::ExecOutcome Chain::view(const Address& from, const Address& to, Bytes call_data) const
{
    WorldState scratch = state_;
    vm::Frame f;
    f.code_address = to;
    f.storage_address = to;
    f.caller = from;
    f.call_data = std::move(call_data);
    f.code = scratch.get(to).code;
    f.gas_remaining = 10'000'000;
    return vm::execute(scratch, std::move(f), next_context());
}

std::optional<Receipt> Chain::receipt(const Hash32& tx_hash) const
{
    for (const auto& b : blocks_)
        for (const auto& r : b.receipts)
            if (r.tx_hash == tx_hash)
                return r;
    return std::nullopt;
}

}  // namespace chain2::chain
