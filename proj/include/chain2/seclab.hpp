// chain2: a miniature Ethereum-style execution model and security lab
// Copyright 2026 The chain2 Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "chain.hpp"
#include "types.hpp"
#include "vm.hpp"
#include "word256.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

/// Scripted attack reproductions. Every scenario runs on its own fresh chain
/// and ends in a report of named assertions.
namespace chain2::seclab
{
struct Assertion
{
    std::string name;
    bool passed = false;
    std::string expected;
    std::string actual;
};

struct BalanceEntry
{
    std::string label;
    Address address;
    Word256 balance;
};

/// One transaction trace kept by a scenario.
struct TraceRecord
{
    std::string label;
    /// The contract under test; dynamic findings about other contracts
    /// (the attacker's own re-entered fallback, say) are not attributed to it.
    Address subject;
    vm::Trace trace;
    /// Set when the trace was exported as JSON Lines.
    std::optional<std::filesystem::path> path;
};

struct Report
{
    std::string name;
    std::vector<Assertion> assertions;
    std::vector<BalanceEntry> final_balances;
    std::vector<TraceRecord> traces;
    std::vector<std::string> notes;

    bool passed() const noexcept;
    /// {schema, name, passed, assertions, final_balances, trace_refs, notes}
    std::string to_json() const;
};

struct Options
{
    /// Where to export attack traces; nothing is written when unset.
    std::optional<std::filesystem::path> trace_dir;
    /// Re-entry budget of the re-entrancy attacker, at most 100.
    uint64_t count = 50;
};

Report reentrancy(const Options& opts = {}, bool fixed = false);
Report delegatecall(const Options& opts = {}, bool fixed = false);
Report overflow(const Options& opts = {}, bool fixed = false);
Report randomness(const Options& opts = {}, bool fixed = false);

/// reentrancy, delegatecall, overflow, randomness, and each with a -fixed suffix.
std::vector<std::string> scenario_names();

/// Runs a scenario by name; throws std::invalid_argument for an unknown one.
Report run(std::string_view name, const Options& opts = {});

}  // namespace chain2::seclab
