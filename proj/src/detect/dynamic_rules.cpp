// chain2: a miniature Ethereum-style execution model and security lab
// Copyright 2026 The chain2 Authors.
// SPDX-License-Identifier: Apache-2.0

#include <chain2/detect.hpp>

#include <json.hpp>

#include <algorithm>
#include <map>
#include <set>

namespace chain2::detect
{
namespace
{
using vm::TraceEvent;

/// One call context recovered from depth changes in the trace.
struct FrameInfo
{
    std::optional<size_t> parent;
    int depth = 0;
    Address storage;
    /// Unknown for the outermost frame (the transaction sender is not traced).
    std::optional<Address> caller;
    size_t first_event = 0;
};

struct Frames
{
    std::vector<FrameInfo> frames;
    std::vector<size_t> frame_of;  ///< per event
};

Frames recover_frames(const vm::Trace& trace)
{
    Frames out;
    out.frame_of.resize(trace.size());
    std::vector<size_t> active;
    for (size_t i = 0; i < trace.size(); ++i)
    {
        const auto& e = trace[i];
        while (!active.empty() && out.frames[active.back()].depth > e.depth)
            active.pop_back();
        const bool entered = active.empty() || (i > 0 && e.depth > trace[i - 1].depth) ||
                             out.frames[active.back()].depth < e.depth;
        if (entered)
        {
            FrameInfo f{std::nullopt, e.depth, e.storage_address, std::nullopt, i};
            if (!active.empty())
            {
                const auto& parent = out.frames[active.back()];
                f.parent = active.back();
                f.caller = trace[i - 1].op == Opcode::DELEGATECALL ? parent.caller : std::optional{parent.storage};
            }
            out.frames.push_back(f);
            active.push_back(out.frames.size() - 1);
        }
        out.frame_of[i] = active.back();
    }
    return out;
}

Word256 arg(const TraceEvent& e, size_t i)
{
    return i < e.stack_top.size() ? e.stack_top[i] : Word256{};
}

/// Value leaving the frame at this event, if any.
Word256 value_sent(const TraceEvent& e)
{
    if (e.op == Opcode::CALL)
        return arg(e, 2);
    if (e.op == Opcode::TRANSFER)
        return arg(e, 1);
    return {};
}

std::optional<Address> value_recipient(const TraceEvent& e)
{
    if (e.op == Opcode::CALL)
        return arg(e, 1).to_address();
    if (e.op == Opcode::TRANSFER)
        return arg(e, 0).to_address();
    return std::nullopt;
}

/// Whether the call at `i` reported success, read from the next event of the same frame.
bool call_succeeded(const vm::Trace& trace, const Frames& fr, size_t i)
{
    for (size_t k = i + 1; k < trace.size(); ++k)
        if (fr.frame_of[k] == fr.frame_of[i])
            return !arg(trace[k], 0).is_zero();
    return false;
}

std::string at(size_t index)
{
    return "event " + std::to_string(index);
}

std::string op_name(Opcode op)
{
    return std::string(info(op).name);
}

void reentrancy(const vm::Trace& trace, const Frames& fr, std::vector<Finding>& out)
{
    std::set<Address> reported;
    for (size_t i = 0; i < trace.size(); ++i)
    {
        const auto& e = trace[i];
        const bool effect = (e.op == Opcode::SSTORE && e.has(vm::flag_storage_write)) || !value_sent(e).is_zero();
        if (!effect)
            continue;
        const auto& inner = fr.frames[fr.frame_of[i]];
        if (reported.contains(inner.storage))
            continue;
        bool crossed = false;
        for (auto cur = inner.parent; cur; cur = fr.frames[*cur].parent)
        {
            const auto& outer = fr.frames[*cur];
            if (outer.storage != inner.storage)
            {
                crossed = true;
                continue;
            }
            if (!crossed)
                continue;
            reported.insert(inner.storage);
            out.push_back({VulnClass::reentrancy, Mode::dynamic_analysis, "D1", i, Severity::high,
                {"frame of " + inner.storage.hex() + " entered at " + at(outer.first_event) + " is still active",
                    "the same storage context is re-entered at " + at(inner.first_event) + " through another contract",
                    "the inner frame runs " + op_name(e.op) + " at " + at(i)},
                inner.storage, {outer.first_event, inner.first_event, i}});
            break;
        }
    }
}

void overflow(const vm::Trace& trace, const Frames& fr, std::vector<Finding>& out)
{
    std::map<size_t, size_t> first_wrap;  // frame -> event
    std::set<size_t> reported;
    for (size_t i = 0; i < trace.size(); ++i)
    {
        const auto& e = trace[i];
        const auto frame = fr.frame_of[i];
        if (e.has(vm::flag_wrapped_arithmetic))
            first_wrap.try_emplace(frame, i);
        const auto w = first_wrap.find(frame);
        if (w == first_wrap.end() || reported.contains(frame))
            continue;
        const bool write = e.op == Opcode::SSTORE && e.has(vm::flag_storage_write);
        const bool pay = !value_sent(e).is_zero() && call_succeeded(trace, fr, i);
        if (!write && !pay)
            continue;
        reported.insert(frame);
        out.push_back({VulnClass::overflow, Mode::dynamic_analysis, "D2", w->second, Severity::high,
            {op_name(trace[w->second].op) + " at " + at(w->second) + " wrapped modulo 2^256",
                std::string(write ? "the frame then writes storage" : "the frame then sends value") + " at " + at(i)},
            fr.frames[frame].storage, {w->second, i}});
    }
}

void delegate_hijack(const vm::Trace& trace, const Frames& fr, std::vector<Finding>& out)
{
    for (size_t j = 0; j + 1 < trace.size(); ++j)
    {
        const auto& call = trace[j];
        if (call.op != Opcode::DELEGATECALL || trace[j + 1].depth != call.depth + 1)
            continue;
        const auto parent = fr.frame_of[j];
        const auto child = fr.frame_of[j + 1];
        std::map<Word256, size_t> read;  // slot -> SLOAD event
        for (size_t k = fr.frames[parent].first_event; k < j; ++k)
            if (fr.frame_of[k] == parent && trace[k].op == Opcode::SLOAD)
                read.try_emplace(arg(trace[k], 0), k);
        for (size_t k = j + 1; k < trace.size() && trace[k].depth > call.depth; ++k)
        {
            const auto& e = trace[k];
            if (fr.frame_of[k] != child || e.op != Opcode::SSTORE || !e.has(vm::flag_storage_write))
                continue;
            const auto r = read.find(arg(e, 0));
            if (r == read.end())
                continue;
            out.push_back({VulnClass::delegatecall_exposure, Mode::dynamic_analysis, "D3", j, Severity::high,
                {"caller reads slot " + r->first.hex() + " at " + at(r->second),
                    "DELEGATECALL at " + at(j) + " runs foreign code on the caller's storage",
                    "the callee overwrites slot " + r->first.hex() + " at " + at(k)},
                fr.frames[parent].storage, {r->second, j, k}});
            break;
        }
    }
}

void randomness(const vm::Trace& trace, const Frames& fr, std::vector<Finding>& out)
{
    struct Progress
    {
        std::optional<size_t> source;
        std::optional<size_t> branch;
        bool done = false;
    };
    std::map<size_t, Progress> state;
    for (size_t i = 0; i < trace.size(); ++i)
    {
        const auto& e = trace[i];
        const auto frame = fr.frame_of[i];
        const auto& ctx = fr.frames[frame];
        if (ctx.depth == 0 || !ctx.caller)
            continue;
        auto& p = state[frame];
        if (p.done)
            continue;
        if (!p.source && (e.has(vm::flag_blockhash_read) || e.op == Opcode::TIMESTAMP))
            p.source = i;
        else if (p.source && !p.branch && e.op == Opcode::JUMPI)
            p.branch = i;
        else if (p.branch && !value_sent(e).is_zero() && value_recipient(e) == ctx.caller)
        {
            p.done = true;
            const bool hash = trace[*p.source].op == Opcode::BLOCKHASH;
            out.push_back({VulnClass::weak_randomness, Mode::dynamic_analysis, "D4", *p.source,
                hash ? Severity::high : Severity::medium,
                {op_name(trace[*p.source].op) + " read at " + at(*p.source),
                    "conditional jump at " + at(*p.branch),
                    "value " + value_sent(e).decimal() + " paid to the caller " + ctx.caller->hex() + " at " + at(i)},
                ctx.storage, {*p.source, *p.branch, i}});
        }
    }
}
}  // namespace

std::vector<Finding> analyze_dynamic(const vm::Trace& trace)
{
    const auto frames = recover_frames(trace);
    std::vector<Finding> out;
    reentrancy(trace, frames, out);
    overflow(trace, frames, out);
    delegate_hijack(trace, frames, out);
    randomness(trace, frames, out);
    std::stable_sort(out.begin(), out.end(), [](const Finding& a, const Finding& b) { return a.location < b.location; });
    return out;
}

std::string_view to_string(VulnClass c) noexcept
{
    switch (c)
    {
    case VulnClass::reentrancy:
        return "reentrancy";
    case VulnClass::overflow:
        return "overflow";
    case VulnClass::delegatecall_exposure:
        return "delegatecall-exposure";
    case VulnClass::weak_randomness:
        return "weak-randomness";
    }
    return "unknown";
}

std::string_view to_string(Mode m) noexcept
{
    return m == Mode::static_analysis ? "static" : "dynamic";
}

std::string_view to_string(Severity s) noexcept
{
    return s == Severity::high ? "high" : "medium";
}

std::string to_json(const std::vector<Finding>& findings)
{
    using json = nlohmann::ordered_json;
    auto doc = json::array();
    for (const auto& f : findings)
    {
        json j;
        j["schema"] = "v1";
        j["class"] = to_string(f.vuln_class);
        j["mode"] = to_string(f.mode);
        j["rule"] = f.rule;
        j["location"] = f.location;
        j["severity"] = to_string(f.severity);
        j["evidence"] = f.evidence;
        j["address"] = f.address ? json(f.address->hex()) : json(nullptr);
        j["trace_indices"] = f.trace_indices;
        doc.push_back(std::move(j));
    }
    return doc.dump(2);
}

bool has_high_severity(const std::vector<Finding>& findings) noexcept
{
    return std::any_of(findings.begin(), findings.end(), [](const Finding& f) { return f.severity == Severity::high; });
}

}  // namespace chain2::detect
