// chain2: a miniature Ethereum-style execution model and security lab
// Copyright 2026 The chain2 Authors.
// SPDX-License-Identifier: Apache-2.0

#include <chain2/opcodes.hpp>

#include <string>
#include <unordered_map>

namespace chain2
{
namespace
{
std::array<OpcodeInfo, 256> build_table()
{
    std::array<OpcodeInfo, 256> t{};
    auto def = [&t](Opcode op, std::string_view name, uint8_t pops, uint8_t pushes) {
        t[static_cast<uint8_t>(op)] = {name, pops, pushes};
    };
    def(Opcode::STOP, "STOP", 0, 0);
    def(Opcode::ADD, "ADD", 2, 1);
    def(Opcode::MUL, "MUL", 2, 1);
    def(Opcode::SUB, "SUB", 2, 1);
    def(Opcode::DIV, "DIV", 2, 1);
    def(Opcode::MOD, "MOD", 2, 1);
    def(Opcode::CADD, "CADD", 2, 1);
    def(Opcode::CSUB, "CSUB", 2, 1);
    def(Opcode::CMUL, "CMUL", 2, 1);
    def(Opcode::LT, "LT", 2, 1);
    def(Opcode::GT, "GT", 2, 1);
    def(Opcode::EQ, "EQ", 2, 1);
    def(Opcode::ISZERO, "ISZERO", 1, 1);
    def(Opcode::AND, "AND", 2, 1);
    def(Opcode::OR, "OR", 2, 1);
    def(Opcode::NOT, "NOT", 1, 1);
    def(Opcode::SHA256, "SHA256", 2, 1);
    def(Opcode::ADDRESS, "ADDRESS", 0, 1);
    def(Opcode::BALANCE, "BALANCE", 1, 1);
    def(Opcode::CALLER, "CALLER", 0, 1);
    def(Opcode::CALLVALUE, "CALLVALUE", 0, 1);
    def(Opcode::CALLDATALOAD, "CALLDATALOAD", 1, 1);
    def(Opcode::CALLDATASIZE, "CALLDATASIZE", 0, 1);
    def(Opcode::CALLDATACOPY, "CALLDATACOPY", 3, 0);
    def(Opcode::BLOCKHASH, "BLOCKHASH", 1, 1);
    def(Opcode::TIMESTAMP, "TIMESTAMP", 0, 1);
    def(Opcode::NUMBER, "NUMBER", 0, 1);
    def(Opcode::SELFBALANCE, "SELFBALANCE", 0, 1);
    def(Opcode::POP, "POP", 1, 0);
    def(Opcode::MLOAD, "MLOAD", 1, 1);
    def(Opcode::MSTORE, "MSTORE", 2, 0);
    def(Opcode::SLOAD, "SLOAD", 1, 1);
    def(Opcode::SSTORE, "SSTORE", 2, 0);
    def(Opcode::JUMP, "JUMP", 1, 0);
    def(Opcode::JUMPI, "JUMPI", 2, 0);
    def(Opcode::GASLEFT, "GASLEFT", 0, 1);
    def(Opcode::JUMPDEST, "JUMPDEST", 0, 0);
    def(Opcode::PUSH, "PUSH", 0, 1);

    static const std::array<std::string, 16> dup_names = [] {
        std::array<std::string, 16> n;
        for (size_t i = 0; i < 16; ++i)
            n[i] = "DUP" + std::to_string(i + 1);
        return n;
    }();
    static const std::array<std::string, 16> swap_names = [] {
        std::array<std::string, 16> n;
        for (size_t i = 0; i < 16; ++i)
            n[i] = "SWAP" + std::to_string(i + 1);
        return n;
    }();
    for (uint8_t i = 0; i < 16; ++i)
    {
        t[0x80 + i] = {dup_names[i], static_cast<uint8_t>(i + 1), static_cast<uint8_t>(i + 2)};
        t[0x90 + i] = {swap_names[i], static_cast<uint8_t>(i + 2), static_cast<uint8_t>(i + 2)};
    }

    def(Opcode::LOG2, "LOG2", 4, 0);
    def(Opcode::LOG3, "LOG3", 5, 0);
    def(Opcode::TRANSFER, "TRANSFER", 2, 1);
    def(Opcode::CALL, "CALL", 7, 1);
    def(Opcode::RETURN, "RETURN", 2, 0);
    def(Opcode::DELEGATECALL, "DELEGATECALL", 6, 1);
    def(Opcode::REVERT, "REVERT", 2, 0);
    return t;
}
}  // namespace

const std::array<OpcodeInfo, 256>& opcode_table() noexcept
{
    static const auto table = build_table();
    return table;
}

std::optional<Opcode> opcode_from_name(std::string_view mnemonic) noexcept
{
    static const auto index = [] {
        std::unordered_map<std::string_view, Opcode> m;
        const auto& t = opcode_table();
        for (size_t i = 0; i < t.size(); ++i)
            if (!t[i].name.empty())
                m.emplace(t[i].name, static_cast<Opcode>(i));
        return m;
    }();
    const auto it = index.find(mnemonic);
    if (it == index.end())
        return std::nullopt;
    return it->second;
}

}  // namespace chain2
