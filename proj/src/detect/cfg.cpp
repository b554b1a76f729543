// chain2: a miniature Ethereum-style execution model and security lab
// Copyright 2026 The chain2 Authors.
// SPDX-License-Identifier: Apache-2.0

#include "abstract_stack.hpp"

#include <algorithm>
#include <cstdio>

namespace chain2::detect
{
namespace internal
{
namespace
{
std::optional<Word256> fold(Opcode op, const std::vector<Value>& args)
{
    for (const auto& a : args)
        if (!a.constant)
            return std::nullopt;
    const auto a = args.size() > 0 ? *args[0].constant : Word256{};
    const auto b = args.size() > 1 ? *args[1].constant : Word256{};
    switch (op)
    {
    case Opcode::ADD:
        return a + b;
    case Opcode::SUB:
        return a - b;
    case Opcode::MUL:
        return a * b;
    case Opcode::DIV:
        return a / b;
    case Opcode::MOD:
        return a % b;
    case Opcode::LT:
        return Word256{a < b ? 1u : 0u};
    case Opcode::GT:
        return Word256{a > b ? 1u : 0u};
    case Opcode::EQ:
        return Word256{a == b ? 1u : 0u};
    case Opcode::ISZERO:
        return Word256{a.is_zero() ? 1u : 0u};
    case Opcode::AND:
        return a & b;
    case Opcode::OR:
        return a | b;
    case Opcode::NOT:
        return ~a;
    default:
        return std::nullopt;
    }
}

bool propagates(Opcode op) noexcept
{
    switch (op)
    {
    case Opcode::ADD:
    case Opcode::SUB:
    case Opcode::MUL:
    case Opcode::DIV:
    case Opcode::MOD:
    case Opcode::CADD:
    case Opcode::CSUB:
    case Opcode::CMUL:
    case Opcode::LT:
    case Opcode::GT:
    case Opcode::EQ:
    case Opcode::ISZERO:
    case Opcode::AND:
    case Opcode::OR:
    case Opcode::NOT:
        return true;
    default:
        return false;
    }
}
}  // namespace

std::string hex_offset(size_t offset)
{
    char buf[24];
    std::snprintf(buf, sizeof buf, "0x%04zx", offset);
    return buf;
}

Value apply(const assembly::Decoded& d, size_t step, const std::vector<Value>& args)
{
    Value out;
    out.constant = fold(d.op, args);
    if (propagates(d.op))
        for (const auto& a : args)
            out.taints.insert(out.taints.end(), a.taints.begin(), a.taints.end());

    const auto source = [&](TaintKind k) { out.taints.push_back({k, step, d.offset, d.op}); };
    switch (d.op)
    {
    case Opcode::CALLDATALOAD:
        source(TaintKind::calldata);
        break;
    case Opcode::BLOCKHASH:
        source(TaintKind::blockhash);
        break;
    case Opcode::TIMESTAMP:
        source(TaintKind::timestamp);
        break;
    case Opcode::ADD:
    case Opcode::SUB:
    case Opcode::MUL:
        if (!out.constant)
            source(TaintKind::wrapped);
        break;
    case Opcode::EQ:
    {
        const auto selector_like = [](const Value& v) { return v.constant && v.constant->bit_length() <= 32; };
        out.selector_match = (selector_like(args[0]) && !args[1].constant) || (selector_like(args[1]) && !args[0].constant);
        break;
    }
    default:
        break;
    }
    return out;
}
}  // namespace internal

namespace
{
using internal::hex_offset;

size_t insn_size(const assembly::Decoded& d) noexcept
{
    if (d.data)
        return d.data->size();
    return d.op == Opcode::PUSH ? 1 + kPushImmediateSize : 1;
}

bool ends_block(Opcode op) noexcept
{
    return is_terminator(op) || op == Opcode::JUMPI;
}
}  // namespace

std::optional<size_t> Cfg::block_at(size_t offset) const
{
    const auto it = std::upper_bound(
        blocks.begin(), blocks.end(), offset, [](size_t off, const BasicBlock& b) { return off < b.begin; });
    if (it == blocks.begin())
        return std::nullopt;
    const auto& b = *std::prev(it);
    if (offset >= b.end)
        return std::nullopt;
    return static_cast<size_t>(std::prev(it) - blocks.begin());
}

std::vector<size_t> Cfg::successors(size_t block) const
{
    std::vector<size_t> out;
    for (const auto& e : edges)
        if (e.from == block)
            out.push_back(e.to);
    return out;
}

Cfg build_cfg(BytesView code)
{
    Cfg cfg;
    cfg.instructions = assembly::decode(code);
    const auto& insns = cfg.instructions;

    std::optional<BasicBlock> open;
    const auto close = [&] {
        if (open)
            cfg.blocks.push_back(*open);
        open.reset();
    };
    for (size_t i = 0; i < insns.size(); ++i)
    {
        const auto& d = insns[i];
        if (d.data)
        {
            close();
            cfg.warnings.push_back(
                "undecodable bytes at " + hex_offset(d.offset) + " (" + std::to_string(d.data->size()) + " bytes) ignored");
            continue;
        }
        if (d.op == Opcode::JUMPDEST)
            close();
        if (!open)
            open = BasicBlock{d.offset, d.offset, i, i};
        open->last_insn = i;
        open->end = d.offset + insn_size(d);
        if (ends_block(d.op))
            close();
    }
    close();

    for (size_t b = 0; b < cfg.blocks.size(); ++b)
    {
        const auto& block = cfg.blocks[b];
        const auto last = insns[block.last_insn].op;
        internal::simulate(insns, block, [&](const internal::Step& s) {
            if (s.decoded.op != Opcode::JUMP && s.decoded.op != Opcode::JUMPI)
                return;
            const auto& target = s.args[0];
            std::optional<size_t> to;
            if (target.constant && target.constant->fits_u64())
                to = cfg.block_at(static_cast<size_t>(target.constant->low64()));
            if (!to || cfg.blocks[*to].begin != target.constant->low64() ||
                insns[cfg.blocks[*to].first_insn].op != Opcode::JUMPDEST)
            {
                cfg.warnings.push_back("unresolved jump at " + hex_offset(s.decoded.offset));
                return;
            }
            const bool conditional = s.decoded.op == Opcode::JUMPI;
            cfg.edges.push_back({b, *to, conditional ? EdgeKind::conditional : EdgeKind::jump,
                conditional && s.args[1].selector_match});
        });
        const bool falls_through = !is_terminator(last);
        if (falls_through && b + 1 < cfg.blocks.size() && cfg.blocks[b + 1].begin == block.end)
            cfg.edges.push_back({b, b + 1, EdgeKind::fallthrough, false});
    }
    return cfg;
}

}  // namespace chain2::detect
