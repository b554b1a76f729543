// chain2: a miniature Ethereum-style execution model and security lab
// Copyright 2026 The chain2 Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string_view>

namespace chain2
{
/// Instruction set. Numbering follows the EVM wherever an equivalent exists.
/// Custom or repurposed slots:
///   0x0A-0x0C  CADD/CSUB/CMUL: checked arithmetic, revert the frame on overflow
///   0x20       SHA256: hash of a memory range (the repository hash)
///   0xF0       TRANSFER: value send forwarding a fixed 2300 gas stipend
/// There is a single PUSH (0x7F) that always carries a 32-byte immediate.
enum class Opcode : uint8_t
{
    STOP = 0x00,
    ADD = 0x01,
    MUL = 0x02,
    SUB = 0x03,
    DIV = 0x04,
    MOD = 0x06,
    CADD = 0x0A,
    CSUB = 0x0B,
    CMUL = 0x0C,
    LT = 0x10,
    GT = 0x11,
    EQ = 0x14,
    ISZERO = 0x15,
    AND = 0x16,
    OR = 0x17,
    NOT = 0x19,
    SHA256 = 0x20,
    ADDRESS = 0x30,
    BALANCE = 0x31,
    CALLER = 0x33,
    CALLVALUE = 0x34,
    CALLDATALOAD = 0x35,
    CALLDATASIZE = 0x36,
    CALLDATACOPY = 0x37,
    BLOCKHASH = 0x40,
    TIMESTAMP = 0x42,
    NUMBER = 0x43,
    SELFBALANCE = 0x47,
    POP = 0x50,
    MLOAD = 0x51,
    MSTORE = 0x52,
    SLOAD = 0x54,
    SSTORE = 0x55,
    JUMP = 0x56,
    JUMPI = 0x57,
    GASLEFT = 0x5A,
    JUMPDEST = 0x5B,
    PUSH = 0x7F,
    DUP1 = 0x80,
    DUP16 = 0x8F,
    SWAP1 = 0x90,
    SWAP16 = 0x9F,
    LOG2 = 0xA2,
    LOG3 = 0xA3,
    TRANSFER = 0xF0,
    CALL = 0xF1,
    RETURN = 0xF3,
    DELEGATECALL = 0xF4,
    REVERT = 0xFD,
};

inline constexpr size_t kPushImmediateSize = 32;

struct OpcodeInfo
{
    std::string_view name;  ///< Empty for undefined bytes.
    uint8_t pops = 0;
    uint8_t pushes = 0;
};

/// Indexed by opcode byte.
const std::array<OpcodeInfo, 256>& opcode_table() noexcept;

inline const OpcodeInfo& info(Opcode op) noexcept
{
    return opcode_table()[static_cast<uint8_t>(op)];
}

inline bool is_defined(uint8_t byte) noexcept
{
    return !opcode_table()[byte].name.empty();
}

std::optional<Opcode> opcode_from_name(std::string_view mnemonic) noexcept;

constexpr bool is_dup(Opcode op) noexcept
{
    return op >= Opcode::DUP1 && op <= Opcode::DUP16;
}

constexpr bool is_swap(Opcode op) noexcept
{
    return op >= Opcode::SWAP1 && op <= Opcode::SWAP16;
}

/// Ends a basic block with no fallthrough successor.
constexpr bool is_terminator(Opcode op) noexcept
{
    return op == Opcode::STOP || op == Opcode::JUMP || op == Opcode::RETURN || op == Opcode::REVERT;
}

}  // namespace chain2
