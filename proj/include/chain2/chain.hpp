// chain2: a miniature Ethereum-style execution model and security lab
// Copyright 2026 The chain2 Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "state.hpp"
#include "types.hpp"
#include "vm.hpp"
#include "word256.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace chain2::chain
{
inline constexpr int64_t kIntrinsicGas = 21000;
inline constexpr uint64_t kBlockInterval = 12;

struct Transaction
{
    uint64_t nonce = 0;
    Word256 gas_price;
    int64_t gas_limit = 0;
    Address to;  ///< zero address means contract creation
    Word256 value;
    Bytes payload;  ///< init code for creation, call data otherwise
    Address sender;

    bool is_creation() const noexcept { return to.is_zero(); }

    /// Canonical serialization; the transaction hash is H of these bytes.
    Bytes encode() const;
    Hash32 hash() const;

    bool operator==(const Transaction&) const = default;
};

struct Receipt
{
    Hash32 tx_hash;
    vm::Status status = vm::Status::success;
    /// Intrinsic gas included.
    int64_t gas_used = 0;
    std::optional<Address> contract_address;
    std::vector<vm::Log> logs;
    Bytes return_data;
    /// Execution trace; kept in memory only, never persisted.
    vm::Trace trace;

    bool ok() const noexcept { return status == vm::Status::success; }
};

/// Raised when a transaction fails validation; the state is left untouched.
class TxRejected : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

/// Last 20 bytes of H(sender || nonce_be8).
Address derive_address(const Address& sender, uint64_t nonce);

/// Validates and executes one transaction. Throws TxRejected for a bad nonce,
/// insufficient balance for value + gasLimit * gasPrice, gasLimit below the
/// intrinsic gas, or a sender that is a contract.
Receipt apply_transaction(WorldState& state, const Transaction& tx, const vm::BlockContext& ctx, const Address& miner);

struct Block
{
    uint64_t number = 0;
    uint64_t timestamp = 0;
    Hash32 parent_hash;
    Hash32 state_root;
    Hash32 tx_root;
    unsigned difficulty_bits = 0;
    uint64_t nonce = 0;
    Address miner;
    Hash32 hash;
    std::vector<Transaction> transactions;
    std::vector<Receipt> receipts;
};

/// number_be8 || timestamp_be8 || parentHash || stateRoot || txRoot ||
/// difficulty_be8 || miner || nonce_be8.
Bytes header_bytes(const Block& b);
Hash32 header_hash(const Block& b);
unsigned leading_zero_bits(const Hash32& h) noexcept;
Hash32 transactions_root(const std::vector<Transaction>& txs);

/// Pending transactions, at most one per (sender, nonce).
class Mempool
{
public:
    /// False when the (sender, nonce) slot is already taken.
    bool add(Transaction tx);
    void erase(const Transaction& tx);
    bool empty() const noexcept { return pending_.empty(); }
    size_t size() const noexcept { return pending_.size(); }
    std::optional<uint64_t> highest_nonce(const Address& sender) const;

    /// gasPrice descending; ties by lower sender, then lower nonce.
    std::vector<Transaction> ordered() const;

private:
    std::map<std::pair<Address, uint64_t>, Transaction> pending_;
};

struct ChainConfig
{
    unsigned difficulty_bits = 8;
    /// Sequential nonce search from 0; otherwise the search starts at a random nonce.
    bool deterministic = true;
    Word256 block_reward;
    uint64_t genesis_timestamp = 1'700'000'000;
    Address miner = Address::from_id(0xfee);
};

/// Header fields for the block after `parent`, with the given recent-hash window.
vm::BlockContext context_after(const Block& parent, uint64_t genesis_timestamp,
    const std::map<uint64_t, Hash32>& recent_hashes);

/// Orders the mempool, executes each transaction against `state` and mines
/// the header. Rejected transactions are skipped: future nonces stay pending,
/// everything else is dropped.
Block build_block(Mempool& mempool, WorldState& state, const Block& parent, const ChainConfig& config,
    const std::map<uint64_t, Hash32>& recent_hashes);

/// Single-writer chain: genesis state, mined blocks, and the pending pool.
class Chain
{
public:
    explicit Chain(ChainConfig config, WorldState genesis = {});

    const ChainConfig& config() const noexcept { return config_; }
    const WorldState& genesis_state() const noexcept { return genesis_; }
    const WorldState& state() const noexcept { return state_; }
    const std::vector<Block>& blocks() const noexcept { return blocks_; }
    const Block& head() const noexcept { return blocks_.back(); }
    Mempool& mempool() noexcept { return mempool_; }
    const Mempool& mempool() const noexcept { return mempool_; }

    /// Context the next mined block will execute under.
    vm::BlockContext next_context() const;

    /// Account nonce plus any queued transactions from the sender.
    uint64_t next_nonce(const Address& sender) const;

    /// Queues a transaction; throws TxRejected when its (sender, nonce) slot is taken.
    void submit(Transaction tx);

    const Block& mine();

    /// Submit, mine one block, and return the receipt. Throws TxRejected when
    /// the block did not include the transaction.
    Receipt transact(Transaction tx);

    /// Executes a call against a scratch copy of the state; nothing persists.
    vm::ExecOutcome view(const Address& from, const Address& to, Bytes call_data) const;

    std::optional<Receipt> receipt(const Hash32& tx_hash) const;

    /// Chain document: version, config, genesis, blocks with receipts, mempool.
    std::string to_json() const;

    /// Parses a chain document and re-executes every block from genesis,
    /// checking receipts, state roots, and header hashes. Throws ParseError on
    /// malformed input and std::runtime_error on any replay mismatch.
    static Chain from_json(std::string_view text);

private:
    std::map<uint64_t, Hash32> recent_hashes() const;

    ChainConfig config_;
    WorldState genesis_;
    WorldState state_;
    std::vector<Block> blocks_;
    Mempool mempool_;
};

}  // namespace chain2::chain
