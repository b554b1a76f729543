// chain2: a miniature Ethereum-style execution model and security lab
// Copyright 2026 The chain2 Authors.
// SPDX-License-Identifier: Apache-2.0

#include "../support/random_vm.hpp"

#include <chain2/asm.hpp>
#include <chain2/hash.hpp>
#include <chain2/vm.hpp>

#include <gtest/gtest.h>

using namespace chain2;
using namespace chain2::vm;
using assembly::assemble;

namespace
{
const Address kSelf = Address::from_id(0x5e1f);
const Address kOther = Address::from_id(0x07e4);
const Address kUser = Address::from_id(0x0005);

ExecOutcome run(WorldState& s, std::string_view src, int64_t gas, Bytes call_data = {}, const Address& self = kSelf)
{
    auto& acct = s.at(self);
    acct.code = assemble(src);
    Frame f;
    f.code_address = self;
    f.storage_address = self;
    f.caller = kUser;
    f.call_data = std::move(call_data);
    f.code = acct.code;
    f.gas_remaining = gas;
    return execute(s, std::move(f), BlockContext{});
}

std::string push_addr(const Address& a)
{
    return "PUSH " + Word256::from_address(a).hex() + "\n";
}

/// Events of the first child frame at `depth`.
std::vector<TraceEvent> frame_events(const Trace& t, int depth)
{
    std::vector<TraceEvent> out;
    for (const auto& ev : t)
        if (ev.depth == depth)
            out.push_back(ev);
    return out;
}
}  // namespace

TEST(execute, add_program_gas_and_trace)
{
    WorldState s;
    const auto out = run(s, "PUSH 1\nPUSH 2\nADD\nSTOP", 100);
    ASSERT_TRUE(out.ok());
    EXPECT_EQ(out.gas_used, 4 * gas::base);
    EXPECT_EQ(out.gas_left, 100 - 12);
    ASSERT_EQ(out.trace.size(), 4u);
    EXPECT_EQ(out.trace[3].op, Opcode::STOP);
    EXPECT_EQ(out.trace[3].stack_top, std::vector<Word256>{Word256{3}});
}

TEST(execute, revert_discards_storage)
{
    WorldState s;
    const auto out = run(s, "PUSH 9\nPUSH 1\nSSTORE\nPUSH 0\nPUSH 0\nREVERT", 100000);
    EXPECT_EQ(out.status, Status::revert);
    EXPECT_TRUE(s.get(kSelf).storage.empty());
    EXPECT_GT(out.gas_left, 0);
}

TEST(execute, stack_overflow_on_push_1025)
{
    std::string src;
    for (int i = 0; i < 1024; ++i)
        src += "PUSH 1\n";
    WorldState s;
    EXPECT_TRUE(run(s, src, 1'000'000).ok());

    const auto out = run(s, src + "PUSH 1\n", 1'000'000);
    EXPECT_EQ(out.status, Status::fault);
    EXPECT_EQ(out.fault_reason, "stack overflow");
    EXPECT_EQ(out.trace.size(), 1025u);
    EXPECT_EQ(out.gas_left, 0);
}

TEST(execute, faults_and_out_of_gas_consume_everything)
{
    WorldState s;
    auto out = run(s, "ADD", 100);
    EXPECT_EQ(out.status, Status::fault);
    EXPECT_EQ(out.fault_reason, "stack underflow");
    EXPECT_EQ(out.gas_used, 100);

    out = run(s, "PUSH 3\nJUMP\nSTOP", 100);
    EXPECT_EQ(out.fault_reason, "invalid jump destination");

    out = run(s, "DATA 0xfe", 100);
    EXPECT_EQ(out.fault_reason, "invalid opcode");

    out = run(s, "PUSH 1\nPUSH 1\nSSTORE", 5000);
    EXPECT_EQ(out.status, Status::out_of_gas);
    EXPECT_EQ(out.gas_left, 0);
    EXPECT_TRUE(s.get(kSelf).storage.empty());
}

TEST(execute, arithmetic_conventions)
{
    WorldState s;
    auto out = run(s, "PUSH 0\nPUSH 7\nDIV\nPUSH 0\nMSTORE\nPUSH 32\nPUSH 0\nRETURN", 1000);
    ASSERT_TRUE(out.ok());
    EXPECT_EQ(Word256::from_be_bytes(out.return_data), Word256{});

    out = run(s, "PUSH 1\nPUSH " + Word256::max().hex() + "\nCADD", 1000);
    EXPECT_EQ(out.status, Status::revert);

    out = run(s, "PUSH 1\nPUSH 0\nSUB\nSTOP", 1000);
    EXPECT_TRUE(out.trace[2].has(flag_wrapped_arithmetic));
    out = run(s, "PUSH 0\nPUSH 1\nSUB\nSTOP", 1000);
    EXPECT_FALSE(out.trace[2].has(flag_wrapped_arithmetic));
}

TEST(execute, calldataload_past_end_reads_zero)
{
    WorldState s;
    const auto out = run(s, "PUSH 2\nCALLDATALOAD\nPUSH 0\nMSTORE\nPUSH 32\nPUSH 0\nRETURN", 1000, Bytes{0xaa, 0xbb, 0xcc});
    ASSERT_TRUE(out.ok());
    Bytes expected(32, 0);
    expected[0] = 0xcc;
    EXPECT_EQ(out.return_data, expected);
}

TEST(call, child_gas_is_capped_at_remaining_minus_reserve)
{
    WorldState s;
    s.at(kOther).code = assemble("STOP");
    const auto big = "PUSH 0\nPUSH 0\nMSTORE\nPUSH 0\nPUSH 0\nPUSH 0\nPUSH 0\nPUSH 0\n" + push_addr(kOther) +
                     "PUSH 1000000000\nCALL\nSTOP";
    auto out = run(s, big, 50'000);
    ASSERT_TRUE(out.ok());
    const auto call_it = std::find_if(out.trace.begin(), out.trace.end(), [](auto& e) { return e.op == Opcode::CALL; });
    ASSERT_NE(call_it, out.trace.end());
    const auto& child_first = *(call_it + 1);
    EXPECT_EQ(child_first.depth, 1);
    EXPECT_EQ(child_first.gas, call_it->gas - gas::call - gas::call_reserve);

    const auto small = "PUSH 0\nPUSH 0\nPUSH 0\nPUSH 0\nPUSH 0\n" + push_addr(kOther) + "PUSH 5000\nCALL\nSTOP";
    out = run(s, small, 50'000);
    EXPECT_EQ(frame_events(out.trace, 1).front().gas, 5000);
}

TEST(call, value_to_empty_code_is_a_pure_transfer)
{
    WorldState s;
    s.at(kSelf).balance = Word256{10};
    const auto src = "PUSH 0\nPUSH 0\nPUSH 0\nPUSH 0\nPUSH 5\n" + push_addr(kOther) +
                     "GASLEFT\nCALL\nPUSH 0\nMSTORE\nPUSH 32\nPUSH 0\nRETURN";
    const auto out = run(s, src, 100'000);
    ASSERT_TRUE(out.ok());
    EXPECT_EQ(Word256::from_be_bytes(out.return_data), Word256{1});
    EXPECT_EQ(s.get(kSelf).balance, Word256{5});
    EXPECT_EQ(s.get(kOther).balance, Word256{5});
}

TEST(call, insufficient_balance_fails_softly)
{
    WorldState s;
    const auto src = "PUSH 0\nPUSH 0\nPUSH 0\nPUSH 0\nPUSH 5\n" + push_addr(kOther) +
                     "GASLEFT\nCALL\nPUSH 0\nMSTORE\nPUSH 32\nPUSH 0\nRETURN";
    const auto out = run(s, src, 100'000);
    ASSERT_TRUE(out.ok());
    EXPECT_EQ(Word256::from_be_bytes(out.return_data), Word256{});
    EXPECT_FALSE(s.contains(kOther));
}

TEST(call, failed_child_rolls_back_value_and_writes)
{
    WorldState s;
    s.at(kSelf).balance = Word256{10};
    s.at(kOther).code = assemble("PUSH 1\nPUSH 1\nSSTORE\nPUSH 0\nPUSH 0\nREVERT");
    const auto src = "PUSH 0\nPUSH 0\nPUSH 0\nPUSH 0\nPUSH 4\n" + push_addr(kOther) + "GASLEFT\nCALL\nPUSH 7\nSSTORE\nSTOP";
    const auto out = run(s, src, 100'000);
    ASSERT_TRUE(out.ok());
    EXPECT_EQ(s.get(kSelf).load(Word256{7}), Word256{});  // status word 0 stored
    EXPECT_EQ(s.get(kSelf).balance, Word256{10});
    EXPECT_TRUE(s.get(kOther).storage.empty());
}

TEST(call, child_storage_address_is_code_address)
{
    WorldState s;
    s.at(kOther).code = assemble("PUSH 1\nPUSH 1\nSSTORE\nSTOP");
    const auto src = "PUSH 0\nPUSH 0\nPUSH 0\nPUSH 0\nPUSH 0\n" + push_addr(kOther) + "GASLEFT\nCALL\nSTOP";
    const auto out = run(s, src, 100'000);
    ASSERT_TRUE(out.ok());
    for (const auto& ev : frame_events(out.trace, 1))
        EXPECT_EQ(ev.storage_address, kOther);
    EXPECT_EQ(s.get(kOther).load(Word256{1}), Word256{1});
    EXPECT_TRUE(s.get(kSelf).storage.empty());
}

TEST(delegatecall, runs_in_callers_context)
{
    WorldState s;
    // Callee writes CALLER into slot 0, like an ownership takeover.
    s.at(kOther).code = assemble("CALLER\nPUSH 0\nSSTORE\nCALLVALUE\nPUSH 1\nSSTORE\nSTOP");
    s.at(kSelf).store(Word256{0}, Word256{0xdead});
    const auto src = "PUSH 0\nPUSH 0\nPUSH 0\nPUSH 0\n" + push_addr(kOther) + "GASLEFT\nDELEGATECALL\nSTOP";

    auto& acct = s.at(kSelf);
    acct.code = assemble(src);
    Frame f;
    f.code_address = kSelf;
    f.storage_address = kSelf;
    f.caller = kUser;
    f.call_value = Word256{3};
    f.code = acct.code;
    f.gas_remaining = 100'000;
    const auto out = execute(s, f, {});
    ASSERT_TRUE(out.ok());

    EXPECT_EQ(s.get(kSelf).load(Word256{0}), Word256::from_address(kUser));
    EXPECT_EQ(s.get(kSelf).load(Word256{1}), Word256{3});
    EXPECT_TRUE(s.get(kOther).storage.empty());
    const auto child = frame_events(out.trace, 1);
    ASSERT_FALSE(child.empty());
    for (const auto& ev : child)
        EXPECT_EQ(ev.storage_address, kSelf);
    EXPECT_TRUE(std::any_of(child.begin(), child.end(), [](auto& e) { return e.has(flag_storage_write); }));
}

TEST(delegatecall, empty_code_is_a_no_op)
{
    WorldState s;
    const auto src = "PUSH 0\nPUSH 0\nPUSH 0\nPUSH 0\n" + push_addr(kOther) +
                     "GASLEFT\nDELEGATECALL\nPUSH 0\nMSTORE\nPUSH 32\nPUSH 0\nRETURN";
    const auto before = state_root(s);
    const auto out = run(s, src, 100'000);
    ASSERT_TRUE(out.ok());
    EXPECT_EQ(Word256::from_be_bytes(out.return_data), Word256{1});
    s.at(kSelf).code.clear();
    EXPECT_EQ(state_root(s), before);
}

class transfer_stipend : public ::testing::Test
{
protected:
    Word256 send(std::string_view fallback, const Address& to = kOther)
    {
        if (!fallback.empty())
            s.at(to).code = assemble(fallback);
        s.at(kSelf).balance = Word256{10};
        const auto src = "PUSH 4\n" + push_addr(to) + "TRANSFER\nPUSH 0\nMSTORE\nPUSH 32\nPUSH 0\nRETURN";
        out = run(s, src, 100'000);
        EXPECT_TRUE(out.ok());
        return Word256::from_be_bytes(out.return_data);
    }

    WorldState s;
    ExecOutcome out;
};

TEST_F(transfer_stipend, stop_fallback_succeeds)
{
    EXPECT_EQ(send("STOP"), Word256{1});
    EXPECT_EQ(s.get(kOther).balance, Word256{4});
    EXPECT_EQ(frame_events(out.trace, 1).front().gas, gas::transfer_stipend);
}

TEST_F(transfer_stipend, storage_writing_fallback_fails_and_value_returns)
{
    EXPECT_EQ(send("PUSH 1\nPUSH 0\nSSTORE\nSTOP"), Word256{});
    EXPECT_EQ(s.get(kSelf).balance, Word256{10});
    EXPECT_EQ(s.get(kOther).balance, Word256{});
    EXPECT_TRUE(s.get(kOther).storage.empty());
}

TEST_F(transfer_stipend, eoa_receives_value)
{
    EXPECT_EQ(send(""), Word256{1});
    EXPECT_EQ(s.get(kOther).balance, Word256{4});
}

TEST_F(transfer_stipend, unused_stipend_is_refunded)
{
    send("STOP");
    const auto it = std::find_if(out.trace.begin(), out.trace.end(), [](auto& e) { return e.op == Opcode::TRANSFER; });
    const auto after = *std::find_if(it + 1, out.trace.end(), [](auto& e) { return e.depth == 0; });
    // TRANSFER itself costs the base 700 once the child's 3-gas STOP is settled.
    EXPECT_EQ(it->gas - after.gas, gas::transfer + gas::base);
}

namespace
{
const std::string kDispatcher = R"(
    CALLDATASIZE
    ISZERO
    PUSHL fallback
    JUMPI
    PUSH 0
    CALLDATALOAD
    PUSH 0x100000000000000000000000000000000000000000000000000000000
    SWAP1
    DIV
    DUP1
    PUSHSEL poke()
    EQ
    PUSHL poke
    JUMPI
    PUSHL fallback
    JUMP
poke:
    JUMPDEST
    PUSH 2
    PUSH 0
    SSTORE
    STOP
fallback:
    JUMPDEST
    PUSH 1
    PUSH 0
    SSTORE
    STOP
)";

Bytes selector_bytes(std::string_view sig)
{
    const auto sel = selector(sig);
    return {static_cast<uint8_t>(sel >> 24), static_cast<uint8_t>(sel >> 16), static_cast<uint8_t>(sel >> 8),
        static_cast<uint8_t>(sel)};
}
}  // namespace

TEST(dispatch, empty_call_data_reaches_fallback)
{
    WorldState s;
    ASSERT_TRUE(run(s, kDispatcher, 100'000).ok());
    EXPECT_EQ(s.get(kSelf).load(Word256{0}), Word256{1});
}

TEST(dispatch, unknown_selector_reaches_fallback)
{
    WorldState s;
    ASSERT_TRUE(run(s, kDispatcher, 100'000, selector_bytes("nothing()")).ok());
    EXPECT_EQ(s.get(kSelf).load(Word256{0}), Word256{1});
}

TEST(dispatch, matching_selector_runs_function)
{
    WorldState s;
    ASSERT_TRUE(run(s, kDispatcher, 100'000, selector_bytes("poke()")).ok());
    EXPECT_EQ(s.get(kSelf).load(Word256{0}), Word256{2});
}

TEST(blockhash, window)
{
    BlockContext ctx;
    ctx.number = 400;
    for (uint64_t n = 100; n < 400; ++n)
        ctx.recent_hashes[n] = hash(std::to_string(n));
    EXPECT_EQ(ctx.blockhash(Word256{399}), Word256::from_hash(hash(std::string_view{"399"})));
    EXPECT_EQ(ctx.blockhash(Word256{400}), Word256{});
    EXPECT_EQ(ctx.blockhash(Word256{144}), Word256::from_hash(hash(std::string_view{"144"})));
    EXPECT_EQ(ctx.blockhash(Word256{143}), Word256{});
    EXPECT_EQ(ctx.blockhash(Word256{100}), Word256{});
    EXPECT_EQ(ctx.blockhash(Word256::max()), Word256{});
}

TEST(properties, gas_strictly_decreases_within_a_frame)
{
    std::mt19937_64 rng{11};
    for (int i = 0; i < 200; ++i)
    {
        auto s = test::random_world();
        const auto out = execute(s, test::program_frame(assemble(test::random_vm_source(rng)), 200'000), {});
        // Last gas seen per depth; entering a shallower depth closes deeper frames.
        std::vector<int64_t> last(kMaxCallDepth + 1, -1);
        int prev_depth = 0;
        for (const auto& ev : out.trace)
        {
            if (ev.depth < prev_depth)
                std::fill(last.begin() + ev.depth + 1, last.end(), -1);
            if (ev.depth > prev_depth)
                last[static_cast<size_t>(ev.depth)] = -1;
            if (last[static_cast<size_t>(ev.depth)] >= 0)
            {
                ASSERT_LT(ev.gas, last[static_cast<size_t>(ev.depth)]);
            }
            last[static_cast<size_t>(ev.depth)] = ev.gas;
            prev_depth = ev.depth;
        }
    }
}

TEST(properties, determinism)
{
    std::mt19937_64 rng{12};
    for (int i = 0; i < 100; ++i)
    {
        const auto code = assemble(test::random_vm_source(rng));
        auto s1 = test::random_world(), s2 = test::random_world();
        const auto a = execute(s1, test::program_frame(code, 100'000), {});
        const auto b = execute(s2, test::program_frame(code, 100'000), {});
        ASSERT_EQ(trace_to_jsonl(a.trace), trace_to_jsonl(b.trace));
        ASSERT_EQ(a.gas_used, b.gas_used);
        ASSERT_EQ(state_root(s1), state_root(s2));
    }
}

TEST(properties, stipend_never_writes_storage)
{
    std::mt19937_64 rng{13};
    for (int i = 0; i < 300; ++i)
    {
        auto s = test::random_world();
        const auto out = execute(s, test::program_frame(assemble(test::random_vm_source(rng)), gas::transfer_stipend), {});
        for (const auto& ev : out.trace)
            ASSERT_FALSE(ev.has(flag_storage_write));
    }
}

TEST(properties, failure_restores_state_root)
{
    std::mt19937_64 rng{14};
    int failures = 0;
    for (int i = 0; i < 300; ++i)
    {
        auto s = test::random_world();
        const auto before = state_root(s);
        const auto out = execute(
            s, test::program_frame(assemble(test::random_vm_source(rng, test::Ending::failing)), 300'000), {});
        if (out.ok())
            continue;
        ++failures;
        ASSERT_EQ(state_root(s), before);
        ASSERT_TRUE(out.logs.empty());
    }
    EXPECT_GT(failures, 250);
}

TEST(trace_jsonl, round_trip)
{
    WorldState s;
    s.at(kOther).code = assemble("PUSH 1\nPUSH 0\nSUB\nPUSH 0\nSSTORE\nSTOP");
    const auto out = run(s, "PUSH 0\nPUSH 0\nPUSH 0\nPUSH 0\nPUSH 0\n" + push_addr(kOther) + "GASLEFT\nCALL\nPUSH 9\nBLOCKHASH\nSTOP", 100'000);
    ASSERT_TRUE(out.ok());
    const auto text = trace_to_jsonl(out.trace);
    EXPECT_EQ(trace_from_jsonl(text), out.trace);
    EXPECT_NE(text.find(R"("flags":["wrapped_arithmetic"])"), std::string::npos);
    EXPECT_NE(text.find(R"("flags":["storage_write"])"), std::string::npos);
    EXPECT_NE(text.find(R"("flags":["external_call"])"), std::string::npos);
    EXPECT_NE(text.find(R"("flags":["blockhash_read"])"), std::string::npos);
    EXPECT_EQ(text.substr(0, 8), R"({"op":"P)");
}

TEST(trace_jsonl, malformed_lines_name_their_line)
{
    const std::string good =
        R"({"op":"STOP","depth":0,"storage_addr":"0x0000000000000000000000000000000000000001","stack_top":[],"gas":5,"flags":[]})";
    EXPECT_EQ(trace_from_jsonl(good + "\n\n" + good + "\n").size(), 2u);
    auto message = [](const std::string& text) {
        try
        {
            trace_from_jsonl(text);
        }
        catch (const ParseError& e)
        {
            return std::string(e.what());
        }
        return std::string("no error");
    };
    EXPECT_EQ(message(good + "\n{oops\n").rfind("trace line 2:", 0), 0u);
    EXPECT_EQ(message(good + "\n" + good + "\n" + R"({"op":"FROB"})").rfind("trace line 3:", 0), 0u);
    EXPECT_NE(message(R"({"op":"STOP","depth":0,"storage_addr":"0x01","stack_top":[],"gas":5,"flags":[]})"), "no error");
    EXPECT_NE(message(R"({"op":"STOP","depth":0,"storage_addr":"0x0000000000000000000000000000000000000001","stack_top":[],"gas":5,"flags":["odd"]})"),
        "no error");
}
