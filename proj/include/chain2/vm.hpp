// chain2: a miniature Ethereum-style execution model and security lab
// Copyright 2026 The chain2 Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "opcodes.hpp"
#include "state.hpp"
#include "types.hpp"
#include "word256.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace chain2::vm
{
inline constexpr size_t kMaxStackSize = 1024;
inline constexpr int kMaxCallDepth = 1024;
inline constexpr size_t kBlockHashWindow = 256;

namespace gas
{
inline constexpr int64_t base = 3;
inline constexpr int64_t sload = 200;
inline constexpr int64_t sstore_set = 5000;     ///< zero -> nonzero
inline constexpr int64_t sstore_update = 2000;  ///< every other write
/// SSTORE fails unless strictly more than this much gas remains, so a
/// frame seeded with the transfer stipend can never write storage.
inline constexpr int64_t sstore_sentry = 2300;
inline constexpr int64_t call = 700;
/// Minimum gas a parent keeps back when forwarding to a child.
inline constexpr int64_t call_reserve = 700;
inline constexpr int64_t transfer = 700;
inline constexpr int64_t transfer_stipend = 2300;
inline constexpr int64_t log = 375;
inline constexpr int64_t log_byte = 8;
inline constexpr int64_t memory_word = 3;
inline constexpr int64_t sha256 = 30;
inline constexpr int64_t sha256_word = 6;
inline constexpr int64_t copy_word = 3;
}  // namespace gas

struct BlockContext
{
    uint64_t number = 0;
    uint64_t timestamp = 0;
    Hash32 parent_hash;
    /// Block number -> hash for the most recent blocks (at most 256).
    std::map<uint64_t, Hash32> recent_hashes;

    /// Hash of block n when n is one of the previous 256 blocks, else zero.
    Word256 blockhash(const Word256& n) const;
};

enum class CallKind : uint8_t
{
    call,
    delegatecall,
    transfer,
    create,
};

/// One call context.
struct Frame
{
    CallKind kind = CallKind::call;
    Address code_address;     ///< whose code runs
    Address storage_address;  ///< whose storage SLOAD/SSTORE touch
    Address caller;
    Word256 call_value;
    Bytes call_data;
    Bytes code;
    std::vector<Word256> stack;
    Bytes memory;
    int64_t gas_remaining = 0;
    int depth = 0;
};

enum class Status : uint8_t
{
    success,
    revert,
    out_of_gas,
    fault,
};

std::string_view to_string(Status s) noexcept;

struct Log
{
    Address address;
    std::vector<Word256> topics;
    Bytes data;

    bool operator==(const Log&) const = default;
};

enum TraceFlag : uint8_t
{
    flag_wrapped_arithmetic = 1 << 0,
    flag_external_call = 1 << 1,
    flag_storage_write = 1 << 2,
    flag_blockhash_read = 1 << 3,
};

/// State observed just before an instruction executes, plus flags describing
/// what the instruction did.
struct TraceEvent
{
    Opcode op = Opcode::STOP;
    int depth = 0;
    Address storage_address;
    /// Up to four words, top of stack first.
    std::vector<Word256> stack_top;
    int64_t gas = 0;
    uint8_t flags = 0;

    bool has(TraceFlag f) const noexcept { return (flags & f) != 0; }
    bool operator==(const TraceEvent&) const = default;
};

using Trace = std::vector<TraceEvent>;

struct ExecOutcome
{
    Status status = Status::success;
    std::string fault_reason;
    Bytes return_data;
    int64_t gas_used = 0;
    int64_t gas_left = 0;
    /// Empty unless status is success.
    std::vector<Log> logs;
    Trace trace;

    bool ok() const noexcept { return status == Status::success; }
};

/// Undo log of state writes. Reverting to a checkpoint restores every logged
/// value in reverse order and drops logs emitted after the checkpoint.
class Journal
{
public:
    struct Checkpoint
    {
        size_t entries = 0;
        size_t logs = 0;
    };

    Checkpoint checkpoint(const std::vector<Log>& logs) const noexcept { return {entries_.size(), logs.size()}; }
    void revert(const Checkpoint& cp, WorldState& state, std::vector<Log>& logs);

    void set_storage(WorldState& state, const Address& a, const Word256& key, const Word256& value, int depth);
    void set_balance(WorldState& state, const Address& a, const Word256& value, int depth);
    void set_nonce(WorldState& state, const Address& a, uint64_t value, int depth);
    void set_code(WorldState& state, const Address& a, Bytes code, int depth);

    size_t size() const noexcept { return entries_.size(); }

private:
    enum class Kind : uint8_t
    {
        created,
        storage,
        balance,
        nonce,
        code,
    };

    struct Entry
    {
        Kind kind;
        int depth;
        Address address;
        Word256 key;
        Word256 old_word;
        uint64_t old_nonce = 0;
        Bytes old_code;
    };

    Account& touch(WorldState& state, const Address& a, int depth);

    std::vector<Entry> entries_;
};

/// Runs `frame` to completion against `state`. On any non-success status every
/// write made by the frame and its children is rolled back; consumed gas stands.
/// Value movement into the frame is the caller's business.
ExecOutcome execute(WorldState& state, Frame frame, const BlockContext& ctx);

/// Trace export as JSON Lines: one object per event with fields
/// op, depth, storage_addr, stack_top, gas, flags.
std::string trace_to_jsonl(const Trace& trace);

/// Parses trace JSON Lines; a malformed line throws ParseError naming its line number.
Trace trace_from_jsonl(std::string_view text);

}  // namespace chain2::vm
