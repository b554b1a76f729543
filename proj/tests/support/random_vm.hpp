// chain2: a miniature Ethereum-style execution model and security lab
// Copyright 2026 The chain2 Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

// Random state-touching programs and a small world of helper contracts used
// by the VM property tests. Test-only.

#include <chain2/asm.hpp>
#include <chain2/vm.hpp>

#include <random>
#include <sstream>
#include <string>

namespace chain2::test
{
inline const Address kProgramAddress = Address::from_id(0xc0de);
inline const Address kWriterAddress = Address::from_id(0xa1);
inline const Address kReverterAddress = Address::from_id(0xa2);
inline const Address kEoaAddress = Address::from_id(0xe0a);

/// Program account plus a storage-writing helper, a helper that writes then
/// reverts, and a funded EOA.
inline WorldState random_world()
{
    WorldState s;
    auto& prog = s.at(kProgramAddress);
    prog.balance = Word256{1'000'000};
    prog.store(Word256{1}, Word256{11});
    prog.store(Word256{2}, Word256{22});
    auto& writer = s.at(kWriterAddress);
    writer.code = assembly::assemble("CALLVALUE\nPUSH 0x77\nSSTORE\nPUSH 1\nPUSH 0x78\nSSTORE\nSTOP");
    auto& reverter = s.at(kReverterAddress);
    reverter.code = assembly::assemble("PUSH 5\nPUSH 5\nSSTORE\nPUSH 0\nPUSH 0\nREVERT");
    s.at(kEoaAddress).balance = Word256{10};
    return s;
}

enum class Ending
{
    any,
    failing,
};

/// Straight-line program of stack-balanced snippets: storage reads and
/// writes, arithmetic, memory, logs, CALL / DELEGATECALL / TRANSFER into the
/// helper world, and occasionally a raw random opcode.
inline std::string random_vm_source(std::mt19937_64& rng, Ending ending = Ending::any)
{
    const Address targets[] = {kWriterAddress, kReverterAddress, kEoaAddress, kProgramAddress};
    auto target = [&] { return Word256::from_address(targets[rng() % 4]).hex(); };
    const char* arith[] = {"ADD", "SUB", "MUL", "DIV", "MOD", "CADD", "CSUB", "CMUL", "LT", "GT", "EQ", "AND", "OR"};

    std::ostringstream os;
    const auto n = rng() % 24 + 1;
    for (uint64_t i = 0; i < n; ++i)
    {
        switch (rng() % 10)
        {
        case 0:
        case 1:
            os << "PUSH " << rng() % 4 << "\nPUSH " << rng() % 6 << "\nSSTORE\n";
            break;
        case 2:
            os << "PUSH " << rng() % 6 << "\nSLOAD\nPOP\n";
            break;
        case 3:
            os << "PUSH " << (rng() % 3 == 0 ? Word256::max().hex() : std::to_string(rng() % 100)) << "\nPUSH "
               << rng() % 100 << "\n"
               << arith[rng() % std::size(arith)] << "\nPOP\n";
            break;
        case 4:
            os << "PUSH " << rng() << "\nPUSH " << rng() % 128 << "\nMSTORE\n";
            break;
        case 5:
            os << "PUSH 1\nPUSH 2\nPUSH " << rng() % 40 << "\nPUSH 0\nLOG2\n";
            break;
        case 6:
            os << "PUSH 0\nPUSH 0\nPUSH 0\nPUSH 0\nPUSH " << rng() % 3 << "\nPUSH " << target() << "\nPUSH "
               << rng() % 60000 << "\nCALL\nPOP\n";
            break;
        case 7:
            os << "PUSH 0\nPUSH 0\nPUSH 0\nPUSH 0\nPUSH " << target() << "\nGASLEFT\nDELEGATECALL\nPOP\n";
            break;
        case 8:
            os << "PUSH " << rng() % 3 << "\nPUSH " << target() << "\nTRANSFER\nPOP\n";
            break;
        default:
        {
            const auto byte = static_cast<uint8_t>(rng());
            if (is_defined(byte) && static_cast<Opcode>(byte) != Opcode::PUSH)
                os << opcode_table()[byte].name << "\n";
            break;
        }
        }
    }
    const auto end = rng() % 3;
    if (ending == Ending::failing)
        os << (end == 0 ? "PUSH 0\nPUSH 0\nREVERT\n" : end == 1 ? "DATA 0xfe\n" : "PUSH 0\nJUMP\n");
    else if (end == 0)
        os << "STOP\n";
    return os.str();
}

inline vm::Frame program_frame(const Bytes& code, int64_t gas)
{
    vm::Frame f;
    f.code_address = kProgramAddress;
    f.storage_address = kProgramAddress;
    f.caller = kEoaAddress;
    f.code = code;
    f.gas_remaining = gas;
    return f;
}

}  // namespace chain2::test
