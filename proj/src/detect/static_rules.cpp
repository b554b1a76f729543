// chain2: a miniature Ethereum-style execution model and security lab
// Copyright 2026 The chain2 Authors.
// SPDX-License-Identifier: Apache-2.0

#include "abstract_stack.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>

namespace chain2::detect
{
namespace
{
using internal::hex_offset;
using internal::TaintKind;

std::string op_name(Opcode op)
{
    return std::string(info(op).name);
}

std::optional<Opcode> checked_twin(Opcode op) noexcept
{
    switch (op)
    {
    case Opcode::ADD:
        return Opcode::CADD;
    case Opcode::SUB:
        return Opcode::CSUB;
    case Opcode::MUL:
        return Opcode::CMUL;
    default:
        return std::nullopt;
    }
}

/// Blocks reachable from `start` through edges accepted by `follow`, `start` included.
template <typename Follow>
std::set<size_t> reachable(const Cfg& cfg, std::vector<size_t> start, Follow&& follow)
{
    std::set<size_t> seen;
    std::deque<size_t> work(start.begin(), start.end());
    while (!work.empty())
    {
        const auto b = work.front();
        work.pop_front();
        if (!seen.insert(b).second)
            continue;
        for (const auto& e : cfg.edges)
            if (e.from == b && follow(e))
                work.push_back(e.to);
    }
    return seen;
}

struct CallSite
{
    size_t block;
    size_t insn;
    size_t offset;
};
}  // namespace

StaticResult analyze_static(BytesView code)
{
    StaticResult out;
    const auto cfg = build_cfg(code);
    out.warnings = cfg.warnings;
    const auto& insns = cfg.instructions;

    std::set<Opcode> present;
    for (const auto& d : insns)
        if (!d.data)
            present.insert(d.op);

    // Keyed by source offset so each offending instruction is reported once.
    std::map<size_t, Finding> overflow, randomness, delegate;
    std::vector<CallSite> calls;
    std::map<size_t, std::vector<size_t>> sstores;  // block -> SSTORE instruction indices

    const auto sink = [&](const internal::Step& s, const internal::Value& v, std::string_view role) {
        if (const auto* t = v.live(s.step, TaintKind::wrapped))
        {
            const auto twin = checked_twin(t->op);
            if (twin && present.contains(*twin))
                return;
            auto& f = overflow[t->offset];
            if (!f.rule.empty())
                return;
            f = {VulnClass::overflow, Mode::static_analysis, "R2", t->offset, Severity::high,
                {"wrapping " + op_name(t->op) + " at " + hex_offset(t->offset) + " on non-constant operands",
                    "result reaches " + op_name(s.decoded.op) + " " + std::string(role) + " at " +
                        hex_offset(s.decoded.offset) + " within " + std::to_string(s.step - t->step) + " instructions",
                    "contract has no " + op_name(*twin) + " twin"},
                std::nullopt, {}};
        }
    };

    for (size_t b = 0; b < cfg.blocks.size(); ++b)
    {
        internal::simulate(insns, cfg.blocks[b], [&](const internal::Step& s) {
            switch (s.decoded.op)
            {
            case Opcode::LT:
            case Opcode::GT:
            case Opcode::EQ:
                for (const auto& a : s.args)
                    sink(s, a, "operand");
                break;
            case Opcode::SSTORE:
                sink(s, s.args[0], "key");
                sink(s, s.args[1], "value");
                sstores[b].push_back(s.insn);
                break;
            case Opcode::JUMPI:
            {
                const auto& cond = s.args[1];
                sink(s, cond, "condition");
                const auto* t = cond.live(s.step, [](const internal::Taint& t) {
                    return t.kind == TaintKind::blockhash || t.kind == TaintKind::timestamp;
                });
                if (t && !randomness.contains(t->offset))
                {
                    const bool hash = t->kind == TaintKind::blockhash;
                    randomness[t->offset] = {VulnClass::weak_randomness, Mode::static_analysis, "R4", t->offset,
                        hash ? Severity::high : Severity::medium,
                        {op_name(t->op) + " at " + hex_offset(t->offset) + " is miner-influenced block data",
                            "result decides JUMPI at " + hex_offset(s.decoded.offset) + " within " +
                                std::to_string(s.step - t->step) + " instructions"},
                        std::nullopt, {}};
                }
                break;
            }
            case Opcode::DELEGATECALL:
                if (const auto* t = s.args[1].live(s.step, TaintKind::calldata))
                    delegate[s.decoded.offset] = {VulnClass::delegatecall_exposure, Mode::static_analysis, "R3",
                        s.decoded.offset, Severity::high,
                        {"DELEGATECALL at " + hex_offset(s.decoded.offset) + " targets an address read by CALLDATALOAD at " +
                            hex_offset(t->offset)},
                        std::nullopt, {}};
                break;
            case Opcode::CALL:
                if (!s.args[0].constant)
                    calls.push_back({b, s.insn, s.decoded.offset});
                break;
            default:
                break;
            }
        });
    }

    // R1: an SSTORE after a CALL that forwards non-constant gas.
    for (const auto& c : calls)
    {
        std::optional<size_t> store;
        for (const auto i : sstores[c.block])
            if (i > c.insn)
            {
                store = i;
                break;
            }
        if (!store)
            for (const auto b : reachable(cfg, cfg.successors(c.block), [](const Edge&) { return true; }))
                if (!sstores[b].empty())
                {
                    store = sstores[b].front();
                    break;
                }
        if (store)
            out.findings.push_back({VulnClass::reentrancy, Mode::static_analysis, "R1", c.offset, Severity::high,
                {"CALL at " + hex_offset(c.offset) + " forwards non-constant gas",
                    "SSTORE at " + hex_offset(insns[*store].offset) + " runs after the call returns"},
                std::nullopt, {}});
    }

    // R3: a DELEGATECALL the fallback path can reach.
    if (!cfg.blocks.empty())
    {
        const auto fallback = reachable(cfg, {0}, [](const Edge& e) { return !e.selector_guard; });
        for (const auto b : fallback)
            for (size_t i = cfg.blocks[b].first_insn; i <= cfg.blocks[b].last_insn; ++i)
                if (!insns[i].data && insns[i].op == Opcode::DELEGATECALL)
                {
                    auto& f = delegate[insns[i].offset];
                    if (f.rule.empty())
                        f = {VulnClass::delegatecall_exposure, Mode::static_analysis, "R3", insns[i].offset, Severity::high,
                            {}, std::nullopt, {}};
                    f.evidence.push_back("DELEGATECALL at " + hex_offset(insns[i].offset) +
                                         " is reachable without matching any function selector");
                }
    }

    for (auto* group : {&overflow, &delegate, &randomness})
        for (auto& [_, f] : *group)
            out.findings.push_back(std::move(f));
    std::stable_sort(out.findings.begin(), out.findings.end(),
        [](const Finding& a, const Finding& b) { return a.location < b.location; });
    return out;
}

}  // namespace chain2::detect
