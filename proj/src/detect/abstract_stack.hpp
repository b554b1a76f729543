// chain2: a miniature Ethereum-style execution model and security lab
// Copyright 2026 The chain2 Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <chain2/detect.hpp>

#include <optional>
#include <string>
#include <vector>

namespace chain2::detect::internal
{
/// Data-flow rules only look this many instructions past the source.
inline constexpr size_t kWindow = 8;

enum class TaintKind : uint8_t
{
    calldata,
    blockhash,
    timestamp,
    wrapped,
};

struct Taint
{
    TaintKind kind;
    /// Position within the block of the instruction that produced it.
    size_t step;
    size_t offset;
    Opcode op;
};

/// Abstract stack slot. Values that entered the block from predecessors are unknown.
struct Value
{
    std::optional<Word256> constant;
    std::vector<Taint> taints;
    bool selector_match = false;

    /// Taints produced no more than kWindow instructions before `step`.
    template <typename Pred>
    const Taint* live(size_t step, Pred&& pred) const
    {
        for (const auto& t : taints)
            if (step - t.step <= kWindow && pred(t))
                return &t;
        return nullptr;
    }

    const Taint* live(size_t step, TaintKind kind) const
    {
        return live(step, [kind](const Taint& t) { return t.kind == kind; });
    }
};

struct Step
{
    size_t insn;  ///< index into Cfg::instructions
    size_t step;  ///< position within the block
    const assembly::Decoded& decoded;
    /// Popped operands, top of stack first.
    const std::vector<Value>& args;
};

/// Zero-padded 0x-prefixed byte offset.
std::string hex_offset(size_t offset);

/// Result of a value-producing instruction.
Value apply(const assembly::Decoded& d, size_t step, const std::vector<Value>& args);

/// Runs one block on an abstract stack, calling `on_step` for every instruction.
template <typename F>
void simulate(const std::vector<assembly::Decoded>& insns, const BasicBlock& block, F&& on_step)
{
    std::vector<Value> stack;  // back is the top
    auto ensure = [&stack](size_t n) {
        if (stack.size() < n)
            stack.insert(stack.begin(), n - stack.size(), Value{});
    };
    std::vector<Value> args;
    for (size_t i = block.first_insn, step = 0; i <= block.last_insn; ++i, ++step)
    {
        const auto& d = insns[i];
        args.clear();
        if (d.data)
            continue;
        if (d.op == Opcode::PUSH)
            stack.push_back(Value{d.immediate, {}, false});
        else if (is_dup(d.op))
        {
            const size_t n = static_cast<size_t>(d.op) - static_cast<size_t>(Opcode::DUP1) + 1;
            ensure(n);
            stack.push_back(stack[stack.size() - n]);
        }
        else if (is_swap(d.op))
        {
            const size_t n = static_cast<size_t>(d.op) - static_cast<size_t>(Opcode::SWAP1) + 1;
            ensure(n + 1);
            std::swap(stack.back(), stack[stack.size() - 1 - n]);
        }
        else
        {
            const auto& inf = info(d.op);
            ensure(inf.pops);
            for (unsigned k = 0; k < inf.pops; ++k)
            {
                args.push_back(std::move(stack.back()));
                stack.pop_back();
            }
            if (inf.pushes)
                stack.push_back(apply(d, step, args));
        }
        on_step(Step{i, step, d, args});
    }
}

}  // namespace chain2::detect::internal
