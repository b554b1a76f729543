// chain2: a miniature Ethereum-style execution model and security lab
// Copyright 2026 The chain2 Authors.
// SPDX-License-Identifier: Apache-2.0

#include "../support/random_program.hpp"

#include <chain2/asm.hpp>
#include <chain2/hash.hpp>

#include <gtest/gtest.h>

using namespace chain2;
using namespace chain2::assembly;

namespace
{
Bytes push_bytes(uint8_t low)
{
    Bytes b(33, 0);
    b[0] = 0x7f;
    b[32] = low;
    return b;
}
}  // namespace

TEST(assemble, four_line_program)
{
    Bytes expected = push_bytes(1);
    append(expected, push_bytes(2));
    expected.push_back(0x01);
    expected.push_back(0x00);
    EXPECT_EQ(assemble("PUSH 1\nPUSH 2\nADD\nSTOP"), expected);
}

TEST(assemble, empty_and_comment_only)
{
    EXPECT_TRUE(assemble("").empty());
    EXPECT_TRUE(assemble("# nothing\n\n   # here\n").empty());
}

TEST(assemble, labels_resolve_to_byte_offsets)
{
    const auto code = assemble("PUSHL end\nJUMP\nend: JUMPDEST\nSTOP");
    ASSERT_EQ(code.size(), 33u + 1 + 1 + 1);
    EXPECT_EQ(code[32], 34);  // PUSH (33) + JUMP (1)
    EXPECT_EQ(code[34], 0x5b);
}

TEST(assemble, pushsel_pushes_selector)
{
    const auto code = assemble("PUSHSEL transfer(address,uint256)");
    EXPECT_EQ(Word256::from_be_bytes(BytesView{code}.subspan(1)), Word256{0x3b88ef57u});
}

TEST(assemble, errors_carry_line_numbers)
{
    auto line_of = [](std::string_view src) {
        try
        {
            assemble(src);
        }
        catch (const AsmError& e)
        {
            return e.line();
        }
        return -1;
    };
    EXPECT_EQ(line_of("STOP\nFROB"), 2);
    EXPECT_EQ(line_of("PUSHL nowhere\nJUMPI"), 1);
    EXPECT_EQ(line_of("PUSH 1\nPUSH 0x1" + std::string(64, '0')), 2);
    EXPECT_EQ(line_of("a: JUMPDEST\n\na: JUMPDEST"), 3);
    EXPECT_EQ(line_of("PUSHL a\na: STOP"), 1);  // label must mark a JUMPDEST
    EXPECT_EQ(line_of("ADD 5"), 1);
    EXPECT_EQ(line_of("PUSH"), 1);
}

TEST(disassemble, round_trip_of_fixture_program)
{
    const auto code = assemble("PUSH 1\nPUSH 2\nADD\nSTOP");
    const auto text = disassemble(code);
    EXPECT_EQ(text, "PUSH 0x1\nPUSH 0x2\nADD\nSTOP\n");
    EXPECT_EQ(assemble(text), code);
}

TEST(disassemble, labels_are_regenerated)
{
    const auto code = assemble("PUSHL target\nJUMP\ntarget: JUMPDEST\nSTOP");
    const auto text = disassemble(code);
    EXPECT_EQ(text, "PUSHL L34\nJUMP\nL34:\nJUMPDEST\nSTOP\n");
    EXPECT_EQ(assemble(text), code);
}

TEST(disassemble, truncated_push_becomes_data)
{
    EXPECT_EQ(disassemble(Bytes{}), "");
    const Bytes code{0x7f, 1, 2, 3, 4, 5};
    EXPECT_EQ(disassemble(code), "DATA 0x7f0102030405\n");
    EXPECT_EQ(assemble(disassemble(code)), code);

    const Bytes undefined{0x00, 0xee, 0xef, 0x01};
    EXPECT_EQ(disassemble(undefined), "STOP\nDATA 0xeeef\nADD\n");
}

TEST(disassemble, random_round_trip)
{
    std::mt19937_64 rng{42};
    for (int i = 0; i < 300; ++i)
    {
        const auto src = test::random_program_source(rng);
        const auto code = assemble(src);
        ASSERT_EQ(assemble(disassemble(code)), code) << src;
    }
}

TEST(contract_source, sections_and_init_code)
{
    const auto src = ".constructor\nPOP\n.runtime\nPUSH 7\nSTOP\n";
    const auto c = parse_contract(src);
    EXPECT_EQ(c.constructor.instructions.size(), 1u);
    EXPECT_EQ(encode(c.runtime), assemble("PUSH 7\nSTOP"));

    const auto plain = parse_contract("STOP");
    EXPECT_TRUE(plain.constructor.instructions.empty());

    EXPECT_THROW(parse_contract(".runtime\nSTOP\n.constructor\nSTOP"), AsmError);
    EXPECT_THROW(parse_contract(".constructor\nSTOP"), AsmError);
    try
    {
        parse_contract(".constructor\nSTOP\n.runtime\nSTOP\nBOGUS\n");
        FAIL();
    }
    catch (const AsmError& e)
    {
        EXPECT_EQ(e.line(), 5);
    }
}
