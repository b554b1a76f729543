// chain2: a miniature Ethereum-style execution model and security lab
// Copyright 2026 The chain2 Authors.
// SPDX-License-Identifier: Apache-2.0

#include <chain2/hash.hpp>
#include <chain2/vm.hpp>

#include <algorithm>
#include <limits>

namespace chain2::vm
{
namespace
{
/// Memory beyond this many bytes is treated as unaffordable.
constexpr uint64_t kMemoryLimit = uint64_t{1} << 24;

struct FrameResult
{
    Status status = Status::success;
    std::string reason;
    Bytes output;
    int64_t gas_left = 0;
};

std::vector<bool> jumpdest_map(BytesView code)
{
    std::vector<bool> map(code.size(), false);
    for (size_t pc = 0; pc < code.size(); ++pc)
    {
        const auto op = static_cast<Opcode>(code[pc]);
        if (op == Opcode::JUMPDEST)
            map[pc] = true;
        else if (op == Opcode::PUSH)
            pc += kPushImmediateSize;
    }
    return map;
}

uint64_t num_words(uint64_t bytes) noexcept
{
    return (bytes + 31) / 32;
}

int64_t clamp_gas(const Word256& w) noexcept
{
    if (!w.fits_u64() || w.low64() > static_cast<uint64_t>(std::numeric_limits<int64_t>::max()))
        return std::numeric_limits<int64_t>::max();
    return static_cast<int64_t>(w.low64());
}

/// Static part of an instruction's cost; dynamic parts are charged in the handler.
int64_t static_cost(Opcode op) noexcept
{
    switch (op)
    {
    case Opcode::SSTORE:
        return 0;
    case Opcode::SLOAD:
        return gas::sload;
    case Opcode::CALL:
    case Opcode::DELEGATECALL:
        return gas::call;
    case Opcode::TRANSFER:
        return gas::transfer + gas::transfer_stipend;
    case Opcode::LOG2:
    case Opcode::LOG3:
        return gas::log;
    case Opcode::SHA256:
        return gas::sha256;
    default:
        return gas::base;
    }
}

class Executor
{
public:
    Executor(WorldState& state, const BlockContext& ctx) noexcept : state_{state}, ctx_{ctx} {}

    FrameResult run(Frame& f);

    FrameResult call_child(const Frame& parent, CallKind kind, const Address& target, const Word256& value,
        int64_t gas, Bytes input);

    Journal journal;
    std::vector<Log> logs;
    Trace trace;

private:
    WorldState& state_;
    const BlockContext& ctx_;
};

class Machine
{
public:
    Machine(Executor& ex, WorldState& state, const BlockContext& ctx, Frame& f)
      : ex_{ex}, state_{state}, ctx_{ctx}, f_{f}, jumpdests_{jumpdest_map(f.code)}
    {}

    FrameResult run();

private:
    Word256 pop()
    {
        auto v = f_.stack.back();
        f_.stack.pop_back();
        return v;
    }

    void push(const Word256& v) { f_.stack.push_back(v); }

    bool charge(int64_t cost) noexcept
    {
        if (cost > f_.gas_remaining)
        {
            f_.gas_remaining = 0;
            return false;
        }
        f_.gas_remaining -= cost;
        return true;
    }

    /// Charges memory expansion for [offset, offset + size).
    bool touch_memory(const Word256& offset, const Word256& size)
    {
        if (size.is_zero())
            return true;
        if (!offset.fits_u64() || !size.fits_u64() || offset.low64() > kMemoryLimit || size.low64() > kMemoryLimit)
        {
            f_.gas_remaining = 0;
            return false;
        }
        const auto new_words = num_words(offset.low64() + size.low64());
        const auto cur_words = f_.memory.size() / 32;
        if (new_words <= cur_words)
            return true;
        if (!charge(static_cast<int64_t>(new_words - cur_words) * gas::memory_word))
            return false;
        f_.memory.resize(new_words * 32, 0);
        return true;
    }

    Bytes read_memory(const Word256& offset, const Word256& size) const
    {
        if (size.is_zero())
            return {};
        const auto begin = f_.memory.begin() + static_cast<std::ptrdiff_t>(offset.low64());
        return {begin, begin + static_cast<std::ptrdiff_t>(size.low64())};
    }

    bool valid_jump(const Word256& dest) const noexcept
    {
        return dest.fits_u64() && dest.low64() < jumpdests_.size() && jumpdests_[dest.low64()];
    }

    FrameResult finish(Status status, std::string reason = {}, Bytes output = {}) const
    {
        const bool keeps_gas = status == Status::success || status == Status::revert;
        return {status, std::move(reason), std::move(output), keeps_gas ? f_.gas_remaining : 0};
    }

    void flag(size_t event, TraceFlag fl) { ex_.trace[event].flags |= fl; }

    Executor& ex_;
    WorldState& state_;
    const BlockContext& ctx_;
    Frame& f_;
    std::vector<bool> jumpdests_;
};

FrameResult Machine::run()
{
    size_t pc = 0;
    const auto& code = f_.code;
    while (true)
    {
        if (pc >= code.size())
            return finish(Status::success);

        const uint8_t byte = code[pc];
        if (!is_defined(byte))
            return finish(Status::fault, "invalid opcode");
        const auto op = static_cast<Opcode>(byte);
        const auto& meta = opcode_table()[byte];

        TraceEvent ev;
        ev.op = op;
        ev.depth = f_.depth;
        ev.storage_address = f_.storage_address;
        ev.gas = f_.gas_remaining;
        for (size_t i = 0; i < 4 && i < f_.stack.size(); ++i)
            ev.stack_top.push_back(f_.stack[f_.stack.size() - 1 - i]);
        ex_.trace.push_back(std::move(ev));
        const size_t event = ex_.trace.size() - 1;

        if (f_.stack.size() < meta.pops)
            return finish(Status::fault, "stack underflow");
        if (f_.stack.size() - meta.pops + meta.pushes > kMaxStackSize)
            return finish(Status::fault, "stack overflow");
        if (!charge(static_cost(op)))
            return finish(Status::out_of_gas);

        size_t next_pc = pc + 1;
        switch (op)
        {
        case Opcode::STOP:
            return finish(Status::success);

        case Opcode::ADD:
        {
            const auto a = pop(), b = pop();
            if (!checked_add(a, b))
                flag(event, flag_wrapped_arithmetic);
            push(a + b);
            break;
        }
        case Opcode::SUB:
        {
            const auto a = pop(), b = pop();
            if (b > a)
                flag(event, flag_wrapped_arithmetic);
            push(a - b);
            break;
        }
        case Opcode::MUL:
        {
            const auto a = pop(), b = pop();
            if (!checked_mul(a, b))
                flag(event, flag_wrapped_arithmetic);
            push(a * b);
            break;
        }
        case Opcode::DIV:
        {
            const auto a = pop(), b = pop();
            push(a / b);
            break;
        }
        case Opcode::MOD:
        {
            const auto a = pop(), b = pop();
            push(a % b);
            break;
        }
        case Opcode::CADD:
        case Opcode::CSUB:
        case Opcode::CMUL:
        {
            const auto a = pop(), b = pop();
            const auto r = op == Opcode::CADD ? checked_add(a, b) :
                           op == Opcode::CSUB ? checked_sub(a, b) :
                                                checked_mul(a, b);
            if (!r)
                return finish(Status::revert, "checked arithmetic overflow");
            push(*r);
            break;
        }

        case Opcode::LT:
        {
            const auto a = pop(), b = pop();
            push(Word256{a < b ? 1u : 0u});
            break;
        }
        case Opcode::GT:
        {
            const auto a = pop(), b = pop();
            push(Word256{a > b ? 1u : 0u});
            break;
        }
        case Opcode::EQ:
        {
            const auto a = pop(), b = pop();
            push(Word256{a == b ? 1u : 0u});
            break;
        }
        case Opcode::ISZERO:
            push(Word256{pop().is_zero() ? 1u : 0u});
            break;
        case Opcode::AND:
        {
            const auto a = pop(), b = pop();
            push(a & b);
            break;
        }
        case Opcode::OR:
        {
            const auto a = pop(), b = pop();
            push(a | b);
            break;
        }
        case Opcode::NOT:
            push(~pop());
            break;

        case Opcode::SHA256:
        {
            const auto offset = pop(), size = pop();
            if (!touch_memory(offset, size))
                return finish(Status::out_of_gas);
            if (!charge(static_cast<int64_t>(num_words(size.low64())) * gas::sha256_word))
                return finish(Status::out_of_gas);
            push(Word256::from_hash(hash(read_memory(offset, size))));
            break;
        }

        case Opcode::ADDRESS:
            push(Word256::from_address(f_.storage_address));
            break;
        case Opcode::BALANCE:
            push(state_.get(pop().to_address()).balance);
            break;
        case Opcode::CALLER:
            push(Word256::from_address(f_.caller));
            break;
        case Opcode::CALLVALUE:
            push(f_.call_value);
            break;
        case Opcode::CALLDATALOAD:
        {
            const auto offset = pop();
            std::array<uint8_t, 32> word{};
            if (offset.fits_u64() && offset.low64() < f_.call_data.size())
            {
                const auto start = offset.low64();
                const auto n = std::min<size_t>(32, f_.call_data.size() - start);
                std::copy_n(f_.call_data.begin() + static_cast<std::ptrdiff_t>(start), n, word.begin());
            }
            push(Word256::from_be_bytes(word));
            break;
        }
        case Opcode::CALLDATASIZE:
            push(Word256{f_.call_data.size()});
            break;
        case Opcode::CALLDATACOPY:
        {
            const auto dest = pop(), offset = pop(), size = pop();
            if (!touch_memory(dest, size))
                return finish(Status::out_of_gas);
            if (!charge(static_cast<int64_t>(num_words(size.low64())) * gas::copy_word))
                return finish(Status::out_of_gas);
            for (uint64_t i = 0; i < size.low64(); ++i)
            {
                uint8_t b = 0;
                if (offset.fits_u64() && offset.low64() + i < f_.call_data.size())
                    b = f_.call_data[offset.low64() + i];
                f_.memory[dest.low64() + i] = b;
            }
            break;
        }

        case Opcode::BLOCKHASH:
            push(ctx_.blockhash(pop()));
            flag(event, flag_blockhash_read);
            break;
        case Opcode::TIMESTAMP:
            push(Word256{ctx_.timestamp});
            break;
        case Opcode::NUMBER:
            push(Word256{ctx_.number});
            break;
        case Opcode::SELFBALANCE:
            push(state_.get(f_.storage_address).balance);
            break;
        case Opcode::GASLEFT:
            push(Word256{static_cast<uint64_t>(f_.gas_remaining)});
            break;

        case Opcode::POP:
            pop();
            break;
        case Opcode::MLOAD:
        {
            const auto offset = pop();
            if (!touch_memory(offset, Word256{32}))
                return finish(Status::out_of_gas);
            push(Word256::from_be_bytes(read_memory(offset, Word256{32})));
            break;
        }
        case Opcode::MSTORE:
        {
            const auto offset = pop(), value = pop();
            if (!touch_memory(offset, Word256{32}))
                return finish(Status::out_of_gas);
            const auto bytes = value.to_be_bytes();
            std::copy(bytes.begin(), bytes.end(), f_.memory.begin() + static_cast<std::ptrdiff_t>(offset.low64()));
            break;
        }
        case Opcode::SLOAD:
            push(state_.get(f_.storage_address).load(pop()));
            break;
        case Opcode::SSTORE:
        {
            const auto key = pop(), value = pop();
            if (f_.gas_remaining <= gas::sstore_sentry)
            {
                f_.gas_remaining = 0;
                return finish(Status::out_of_gas);
            }
            const auto current = state_.get(f_.storage_address).load(key);
            const auto cost = current.is_zero() && !value.is_zero() ? gas::sstore_set : gas::sstore_update;
            if (!charge(cost))
                return finish(Status::out_of_gas);
            ex_.journal.set_storage(state_, f_.storage_address, key, value, f_.depth);
            flag(event, flag_storage_write);
            break;
        }

        case Opcode::JUMP:
        {
            const auto dest = pop();
            if (!valid_jump(dest))
                return finish(Status::fault, "invalid jump destination");
            next_pc = dest.low64();
            break;
        }
        case Opcode::JUMPI:
        {
            const auto dest = pop(), cond = pop();
            if (!cond.is_zero())
            {
                if (!valid_jump(dest))
                    return finish(Status::fault, "invalid jump destination");
                next_pc = dest.low64();
            }
            break;
        }
        case Opcode::JUMPDEST:
            break;

        case Opcode::PUSH:
        {
            std::array<uint8_t, kPushImmediateSize> imm{};
            const auto avail = std::min<size_t>(kPushImmediateSize, code.size() - pc - 1);
            std::copy_n(code.begin() + static_cast<std::ptrdiff_t>(pc + 1), avail, imm.begin());
            push(Word256::from_be_bytes(imm));
            next_pc = pc + 1 + kPushImmediateSize;
            break;
        }

        case Opcode::LOG2:
        case Opcode::LOG3:
        {
            const auto offset = pop(), size = pop();
            const size_t n_topics = op == Opcode::LOG2 ? 2 : 3;
            std::vector<Word256> topics;
            for (size_t i = 0; i < n_topics; ++i)
                topics.push_back(pop());
            if (!touch_memory(offset, size))
                return finish(Status::out_of_gas);
            if (!charge(static_cast<int64_t>(size.low64()) * gas::log_byte))
                return finish(Status::out_of_gas);
            ex_.logs.push_back({f_.storage_address, std::move(topics), read_memory(offset, size)});
            break;
        }

        case Opcode::CALL:
        case Opcode::DELEGATECALL:
        {
            const auto gas_arg = pop();
            const auto target = pop().to_address();
            const auto value = op == Opcode::CALL ? pop() : Word256{};
            const auto in_offset = pop(), in_size = pop(), out_offset = pop(), out_size = pop();
            if (!touch_memory(in_offset, in_size) || !touch_memory(out_offset, out_size))
                return finish(Status::out_of_gas);
            flag(event, flag_external_call);

            if (f_.depth >= kMaxCallDepth || value > state_.get(f_.storage_address).balance)
            {
                push(Word256{});
                break;
            }
            const auto child_gas = std::min(clamp_gas(gas_arg), std::max<int64_t>(f_.gas_remaining - gas::call_reserve, 0));
            f_.gas_remaining -= child_gas;
            auto res = ex_.call_child(f_, op == Opcode::CALL ? CallKind::call : CallKind::delegatecall, target, value,
                child_gas, read_memory(in_offset, in_size));
            f_.gas_remaining += res.gas_left;
            const auto n = std::min<uint64_t>(out_size.low64(), res.output.size());
            std::copy_n(res.output.begin(), n, f_.memory.begin() + static_cast<std::ptrdiff_t>(out_offset.low64()));
            push(Word256{res.status == Status::success ? 1u : 0u});
            break;
        }
        case Opcode::TRANSFER:
        {
            const auto target = pop().to_address();
            const auto value = pop();
            flag(event, flag_external_call);
            if (f_.depth >= kMaxCallDepth || value > state_.get(f_.storage_address).balance)
            {
                f_.gas_remaining += gas::transfer_stipend;
                push(Word256{});
                break;
            }
            auto res = ex_.call_child(f_, CallKind::transfer, target, value, gas::transfer_stipend, {});
            f_.gas_remaining += res.gas_left;
            push(Word256{res.status == Status::success ? 1u : 0u});
            break;
        }

        case Opcode::RETURN:
        case Opcode::REVERT:
        {
            const auto offset = pop(), size = pop();
            if (!touch_memory(offset, size))
                return finish(Status::out_of_gas);
            auto output = read_memory(offset, size);
            return finish(op == Opcode::RETURN ? Status::success : Status::revert, {}, std::move(output));
        }

        default:
            if (is_dup(op))
            {
                const size_t n = static_cast<size_t>(op) - static_cast<size_t>(Opcode::DUP1) + 1;
                push(f_.stack[f_.stack.size() - n]);
            }
            else if (is_swap(op))
            {
                const size_t n = static_cast<size_t>(op) - static_cast<size_t>(Opcode::SWAP1) + 1;
                std::swap(f_.stack.back(), f_.stack[f_.stack.size() - 1 - n]);
            }
            else
                return finish(Status::fault, "invalid opcode");
            break;
        }
        pc = next_pc;
    }
}

FrameResult Executor::run(Frame& f)
{
    return Machine{*this, state_, ctx_, f}.run();
}

FrameResult Executor::call_child(const Frame& parent, CallKind kind, const Address& target, const Word256& value,
    int64_t gas, Bytes input)
{
    const auto cp = journal.checkpoint(logs);
    const int depth = parent.depth + 1;
    if (kind != CallKind::delegatecall && !value.is_zero())
    {
        journal.set_balance(state_, parent.storage_address, state_.get(parent.storage_address).balance - value, depth);
        journal.set_balance(state_, target, state_.get(target).balance + value, depth);
    }

    Frame child;
    child.kind = kind;
    child.code_address = target;
    child.code = state_.get(target).code;
    child.call_data = std::move(input);
    child.gas_remaining = gas;
    child.depth = depth;
    if (kind == CallKind::delegatecall)
    {
        child.storage_address = parent.storage_address;
        child.caller = parent.caller;
        child.call_value = parent.call_value;
    }
    else
    {
        child.storage_address = target;
        child.caller = parent.storage_address;
        child.call_value = value;
    }

    FrameResult res;
    if (child.code.empty())
        res.gas_left = gas;
    else
        res = run(child);
    if (res.status != Status::success)
        journal.revert(cp, state_, logs);
    return res;
}
}  // namespace

std::string_view to_string(Status s) noexcept
{
    switch (s)
    {
    case Status::success:
        return "success";
    case Status::revert:
        return "revert";
    case Status::out_of_gas:
        return "out-of-gas";
    case Status::fault:
        return "fault";
    }
    return "unknown";
}

Word256 BlockContext::blockhash(const Word256& n) const
{
    if (!n.fits_u64() || n.low64() >= number || number - n.low64() > kBlockHashWindow)
        return {};
    const auto it = recent_hashes.find(n.low64());
    return it == recent_hashes.end() ? Word256{} : Word256::from_hash(it->second);
}

ExecOutcome execute(WorldState& state, Frame frame, const BlockContext& ctx)
{
    Executor ex{state, ctx};
    const auto cp = ex.journal.checkpoint(ex.logs);
    const auto initial_gas = frame.gas_remaining;
    auto res = ex.run(frame);
    if (res.status != Status::success)
        ex.journal.revert(cp, state, ex.logs);

    ExecOutcome out;
    out.status = res.status;
    out.fault_reason = std::move(res.reason);
    out.return_data = std::move(res.output);
    out.gas_left = res.gas_left;
    out.gas_used = initial_gas - res.gas_left;
    if (out.ok())
        out.logs = std::move(ex.logs);
    out.trace = std::move(ex.trace);
    return out;
}

}  // namespace chain2::vm
