// chain2: a miniature Ethereum-style execution model and security lab
// Copyright 2026 The chain2 Authors.
// SPDX-License-Identifier: Apache-2.0

#include <chain2/vm.hpp>

#include <json.hpp>

#include <algorithm>
#include <array>
#include <sstream>
#include <utility>

namespace chain2::vm
{
namespace
{
using ordered_json = nlohmann::ordered_json;

constexpr std::array<std::pair<TraceFlag, std::string_view>, 4> kFlagNames{{
    {flag_wrapped_arithmetic, "wrapped_arithmetic"},
    {flag_external_call, "external_call"},
    {flag_storage_write, "storage_write"},
    {flag_blockhash_read, "blockhash_read"},
}};

TraceEvent event_from_json(const nlohmann::json& j)
{
    TraceEvent ev;
    const auto mnemonic = j.at("op").get<std::string>();
    const auto op = opcode_from_name(mnemonic);
    if (!op)
        throw ParseError("unknown op '" + mnemonic + "'");
    ev.op = *op;
    ev.depth = j.at("depth").get<int>();
    ev.storage_address = Address::from_hex(j.at("storage_addr").get<std::string>());
    for (const auto& w : j.at("stack_top"))
        ev.stack_top.push_back(Word256::parse(w.get<std::string>()));
    if (ev.stack_top.size() > 4)
        throw ParseError("stack_top holds more than 4 words");
    ev.gas = j.at("gas").get<int64_t>();
    for (const auto& f : j.at("flags"))
    {
        const auto name = f.get<std::string>();
        const auto it = std::find_if(kFlagNames.begin(), kFlagNames.end(), [&](const auto& p) { return p.second == name; });
        if (it == kFlagNames.end())
            throw ParseError("unknown flag '" + name + "'");
        ev.flags |= it->first;
    }
    return ev;
}
}  // namespace

std::string trace_to_jsonl(const Trace& trace)
{
    std::string out;
    for (const auto& ev : trace)
    {
        ordered_json j;
        j["op"] = std::string(info(ev.op).name);
        j["depth"] = ev.depth;
        j["storage_addr"] = ev.storage_address.hex();
        auto& stack = j["stack_top"] = ordered_json::array();
        for (const auto& w : ev.stack_top)
            stack.push_back(w.hex());
        j["gas"] = ev.gas;
        auto& flags = j["flags"] = ordered_json::array();
        for (const auto& [bit, name] : kFlagNames)
            if (ev.has(bit))
                flags.push_back(name);
        out += j.dump();
        out += '\n';
    }
    return out;
}

Trace trace_from_jsonl(std::string_view text)
{
    Trace trace;
    std::istringstream in{std::string(text)};
    std::string line;
    int line_no = 0;
    while (std::getline(in, line))
    {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos)
            continue;
        try
        {
            trace.push_back(event_from_json(nlohmann::json::parse(line)));
        }
        catch (const std::exception& e)
        {
            throw ParseError("trace line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    return trace;
}

}  // namespace chain2::vm
