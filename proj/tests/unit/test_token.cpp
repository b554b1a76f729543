// chain2: a miniature Ethereum-style execution model and security lab
// Copyright 2026 The chain2 Authors.
// SPDX-License-Identifier: Apache-2.0

#include <chain2/fixtures.hpp>
#include <chain2/token.hpp>

#include <gtest/gtest.h>

#include <random>

using namespace chain2;

namespace
{
const Address kDeployer = Address::from_id(1);
const Address kOther = Address::from_id(2);
const Address kSpender = Address::from_id(3);

chain::Chain fresh_chain()
{
    chain::ChainConfig cfg;
    cfg.difficulty_bits = 0;
    WorldState s;
    for (uint64_t id = 1; id <= 4; ++id)
        s.at(Address::from_id(id)).balance = Word256{1'000'000'000};
    return chain::Chain{cfg, s};
}

token::Client deploy(chain::Chain& c, std::string_view fixture, uint64_t supply)
{
    const auto r = token::Client::deploy(c, kDeployer, fixtures::source(fixture), Word256{supply});
    EXPECT_TRUE(r.ok()) << vm::to_string(r.status);
    return token::Client{c, *r.contract_address};
}
}  // namespace

TEST(calldata, encoding)
{
    const Word256 args[] = {Word256{1}, Word256{2}};
    const auto data = calldata::encode_call("transfer(address,uint256)", args);
    ASSERT_EQ(data.size(), 4u + 64);
    EXPECT_EQ(to_hex(BytesView(data).first(4)), "0x3b88ef57");
    EXPECT_EQ(calldata::decode_word(BytesView(data).subspan(4), 1), Word256{2});
    EXPECT_THROW(calldata::decode_word(BytesView(data).subspan(4), 2), ParseError);
}

TEST(token, deployment_walkthrough)
{
    auto c = fresh_chain();
    const auto nonce_before = c.state().get(kDeployer).nonce;
    auto t = deploy(c, "safe_token", 2048);

    EXPECT_EQ(t.total_supply(), Word256{2048});
    EXPECT_EQ(t.balance_of(kDeployer), Word256{2048});
    EXPECT_EQ(c.state().get(kDeployer).nonce, nonce_before + 1);
    EXPECT_EQ(c.state().get(t.address()).nonce, 1u);
    EXPECT_EQ(c.state().get(t.address()).load(Word256{0}), Word256{2048});
    EXPECT_EQ(c.state().get(t.address()).load(token::balance_slot(kDeployer)), Word256{2048});
    ASSERT_EQ(t.holders().size(), 1u);

    const auto logs = t.transfer_logs();
    ASSERT_EQ(logs.size(), 1u);
    EXPECT_EQ(logs[0].topics[1], Word256{});
    EXPECT_EQ(logs[0].topics[2], Word256::from_address(kDeployer));

    const auto r = t.transfer(kDeployer, kOther, Word256{1});
    ASSERT_TRUE(r.ok());
    EXPECT_EQ(calldata::decode_word(r.return_data), Word256{1});
    EXPECT_EQ(t.balance_of(kDeployer), Word256{2047});
    EXPECT_EQ(t.balance_of(kOther), Word256{1});
    const auto holders = t.holders();
    ASSERT_EQ(holders.size(), 2u);
    EXPECT_EQ(holders[0].address, kDeployer);
    EXPECT_EQ(holders[1].balance, Word256{1});
}

TEST(token, overdraft_reverts_on_safe_token)
{
    auto c = fresh_chain();
    auto t = deploy(c, "safe_token", 10);
    const auto storage = c.state().get(t.address()).storage;
    const auto r = t.transfer(kDeployer, kOther, Word256{11});
    EXPECT_EQ(r.status, vm::Status::revert);
    EXPECT_EQ(c.state().get(t.address()).storage, storage);
    EXPECT_EQ(t.transfer_logs().size(), 1u);
}

TEST(token, zero_supply_and_zero_transfers)
{
    auto c = fresh_chain();
    auto t = deploy(c, "safe_token", 0);
    EXPECT_EQ(t.total_supply(), Word256{});
    EXPECT_TRUE(t.transfer(kDeployer, kOther, Word256{}).ok());
    EXPECT_EQ(t.balance_of(kOther), Word256{});
    EXPECT_TRUE(t.holders().empty());
}

TEST(token, two_deployments_get_distinct_addresses)
{
    auto c = fresh_chain();
    EXPECT_NE(deploy(c, "safe_token", 1).address(), deploy(c, "safe_token", 1).address());
}

TEST(token, approve_and_transfer_from)
{
    auto c = fresh_chain();
    auto t = deploy(c, "safe_token", 100);
    ASSERT_TRUE(t.approve(kDeployer, kSpender, Word256{10}).ok());
    EXPECT_EQ(t.allowance(kDeployer, kSpender), Word256{10});
    EXPECT_EQ(c.state().get(t.address()).load(token::allowance_slot(kDeployer, kSpender)), Word256{10});

    ASSERT_TRUE(t.transfer_from(kSpender, kDeployer, kOther, Word256{7}).ok());
    EXPECT_EQ(t.allowance(kDeployer, kSpender), Word256{3});
    EXPECT_EQ(t.balance_of(kDeployer), Word256{93});
    EXPECT_EQ(t.balance_of(kOther), Word256{7});

    EXPECT_EQ(t.transfer_from(kSpender, kDeployer, kOther, Word256{4}).status, vm::Status::revert);
    EXPECT_EQ(t.transfer_from(kOther, kDeployer, kOther, Word256{1}).status, vm::Status::revert);
}

TEST(token, unknown_selector_reverts)
{
    auto c = fresh_chain();
    auto t = deploy(c, "safe_token", 5);
    chain::Transaction tx{c.next_nonce(kOther), Word256{1}, 100'000, t.address(), Word256{},
        calldata::encode_call("mint(uint256)"), kOther};
    EXPECT_EQ(c.transact(tx).status, vm::Status::revert);
}

TEST(token, vulnerable_token_underflows)
{
    auto c = fresh_chain();
    auto t = deploy(c, "vuln_token", 100);
    ASSERT_TRUE(t.transfer(kOther, kSpender, Word256{1}).ok());
    EXPECT_EQ(t.balance_of(kOther), Word256::max());
    EXPECT_EQ(t.balance_of(kSpender), Word256{1});
}

TEST(token, supply_conservation_and_event_completeness)
{
    std::mt19937_64 rng{2048};
    auto c = fresh_chain();
    auto t = deploy(c, "safe_token", 5000);
    const Address users[] = {Address::from_id(1), Address::from_id(2), Address::from_id(3), Address::from_id(4)};
    size_t moves = 1;  // the minting log from the constructor
    for (int op = 0; op < 1000; ++op)
    {
        const auto& a = users[rng() % 4];
        const auto& b = users[rng() % 4];
        const auto& d = users[rng() % 4];
        const Word256 amount{rng() % 1500};
        switch (rng() % 3)
        {
        case 0:
            moves += t.transfer(a, b, amount).ok();
            break;
        case 1:
            t.approve(a, b, amount);
            break;
        default:
            moves += t.transfer_from(a, b, d, amount).ok();
            break;
        }
    }
    Word256 sum;
    for (const auto& u : users)
        sum += c.state().get(t.address()).load(token::balance_slot(u));
    EXPECT_EQ(sum, Word256{5000});
    EXPECT_EQ(t.total_supply(), Word256{5000});
    EXPECT_EQ(t.transfer_logs().size(), moves);
    EXPECT_GT(moves, 200u);
}
