// chain2: a miniature Ethereum-style execution model and security lab
// Copyright 2026 The chain2 Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "asm.hpp"
#include "types.hpp"
#include "vm.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace chain2::detect
{
enum class VulnClass : uint8_t
{
    reentrancy,
    overflow,
    delegatecall_exposure,
    weak_randomness,
};

enum class Mode : uint8_t
{
    static_analysis,
    dynamic_analysis,
};

enum class Severity : uint8_t
{
    medium,
    high,
};

std::string_view to_string(VulnClass c) noexcept;
std::string_view to_string(Mode m) noexcept;
std::string_view to_string(Severity s) noexcept;

struct Finding
{
    VulnClass vuln_class = VulnClass::reentrancy;
    Mode mode = Mode::static_analysis;
    /// R1-R4 for static findings, D1-D4 for dynamic ones.
    std::string rule;
    /// Byte offset (static) or trace index (dynamic).
    uint64_t location = 0;
    Severity severity = Severity::high;
    std::vector<std::string> evidence;
    /// Storage context the dynamic finding concerns; unset for static ones.
    std::optional<Address> address;
    /// Non-empty for every dynamic finding.
    std::vector<size_t> trace_indices;
};

/// A maximal straight-line run of instructions.
struct BasicBlock
{
    /// Byte offset of the first instruction.
    size_t begin = 0;
    /// One past the last instruction byte.
    size_t end = 0;
    /// Indices into the decoded instruction list.
    size_t first_insn = 0;
    size_t last_insn = 0;
};

enum class EdgeKind : uint8_t
{
    fallthrough,
    jump,
    conditional,
};

struct Edge
{
    size_t from = 0;  ///< block index
    size_t to = 0;    ///< block index
    EdgeKind kind = EdgeKind::fallthrough;
    /// Taken branch of a JUMPI guarded by an EQ against a 4-byte constant,
    /// i.e. a function-selector match.
    bool selector_guard = false;
};

struct Cfg
{
    std::vector<assembly::Decoded> instructions;
    std::vector<BasicBlock> blocks;
    std::vector<Edge> edges;
    /// Undecodable byte runs and unresolved jumps.
    std::vector<std::string> warnings;

    /// Block holding the byte offset, if any.
    std::optional<size_t> block_at(size_t offset) const;
    std::vector<size_t> successors(size_t block) const;
};

/// Linear sweep: a block starts at offset 0, at every JUMPDEST and after every
/// JUMP, JUMPI, STOP, RETURN and REVERT. Jump targets come from constant
/// values on an abstract stack; a target that is not a JUMPDEST gets no edge.
Cfg build_cfg(BytesView code);

struct StaticResult
{
    std::vector<Finding> findings;
    std::vector<std::string> warnings;
};

/// Rules R1-R4 on one bytecode unit. Pure: depends on the code only.
StaticResult analyze_static(BytesView code);

/// Rules D1-D4 on one transaction trace.
std::vector<Finding> analyze_dynamic(const vm::Trace& trace);

/// Findings serialized as a JSON array, each element tagged with schema "v1".
std::string to_json(const std::vector<Finding>& findings);

bool has_high_severity(const std::vector<Finding>& findings) noexcept;

}  // namespace chain2::detect
