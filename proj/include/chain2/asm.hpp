// chain2: a miniature Ethereum-style execution model and security lab
// Copyright 2026 The chain2 Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "opcodes.hpp"
#include "types.hpp"
#include "word256.hpp"

#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace chain2::assembly
{
using Bytecode = Bytes;

class AsmError : public std::runtime_error
{
public:
    AsmError(int line, const std::string& message)
      : std::runtime_error("line " + std::to_string(line) + ": " + message), line_{line}
    {}

    int line() const noexcept { return line_; }

private:
    int line_;
};

struct Instruction
{
    Opcode op = Opcode::STOP;
    /// PUSH only.
    std::optional<Word256> immediate;
    /// PUSH whose immediate is the byte offset of this label.
    std::optional<std::string> label_ref;
    /// Set for raw DATA directives; `op` is then meaningless.
    std::optional<Bytes> data;
    int line = 0;

    size_t size() const noexcept
    {
        if (data)
            return data->size();
        return op == Opcode::PUSH ? 1 + kPushImmediateSize : 1;
    }
};

struct Program
{
    std::vector<Instruction> instructions;
    /// Label name -> index into instructions.
    std::map<std::string, size_t> labels;

    /// Appends another program, offsetting its labels. Duplicate labels throw.
    void append(const Program& other);
};

/// Source grammar, one statement per line:
///   [label:] [MNEMONIC [operand]]   # comment
/// Operands: PUSH <decimal|0xhex>, PUSHL <label>, PUSHSEL <signature>, DATA <0xhex>.
Program parse(std::string_view source);

/// Resolves labels and emits bytes.
Bytecode encode(const Program& program);

inline Bytecode assemble(std::string_view source)
{
    return encode(parse(source));
}

/// One decoded instruction of raw bytecode. A truncated PUSH or an undefined
/// byte run is reported as data.
struct Decoded
{
    size_t offset = 0;
    Opcode op = Opcode::STOP;
    std::optional<Word256> immediate;
    std::optional<Bytes> data;
};

std::vector<Decoded> decode(BytesView code);

/// Renders bytecode as source. JUMPDESTs get labels and PUSHes of their offsets
/// become PUSHL; undecodable bytes become DATA directives.
std::string disassemble(BytesView code);

/// A contract file: optional `.constructor` section followed by `.runtime`.
/// Files without directives are runtime-only.
struct ContractSource
{
    Program constructor;
    Program runtime;
};

ContractSource parse_contract(std::string_view source);

/// Creation payload: pushes `args` (first argument on top), runs the
/// constructor body, then writes the runtime code into memory and returns it.
Bytecode build_init_code(const ContractSource& contract, std::span<const Word256> args = {});

}  // namespace chain2::assembly
