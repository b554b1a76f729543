// chain2: a miniature Ethereum-style execution model and security lab
// Copyright 2026 The chain2 Authors.
// SPDX-License-Identifier: Apache-2.0

#include <chain2/hash.hpp>
#include <chain2/state.hpp>

#include <gtest/gtest.h>

#include <random>

using namespace chain2;

namespace
{
// Frozen with tests/oracles/state_oracle.py.
constexpr auto kEmptyRoot = "0x6e340b9cffb37a989ca544e6bb780a2c78901d3fb33738768511a30617afa01d";
constexpr auto kFourAccountRoot = "0x3aa740f524dde4f168d72b90c1d9200494ecf18e85c84fab73b5865173db5534";
constexpr auto kSingleAccountRoot = "0xfe88225d28c6384bf8609b4ecc6fad236f1cd5e914431aab03dd68121cd95838";

WorldState four_accounts()
{
    WorldState s;
    s.at(Address::from_id(1)) = {0, Word256{100}, {}, {}};
    s.at(Address::from_id(2)) = {1, Word256{200}, {}, {}};
    auto& a3 = s.at(Address::from_id(3));
    a3.nonce = 2;
    a3.balance = Word256{300};
    a3.store(Word256{1}, Word256{7});
    a3.store(Word256{2}, Word256{9});
    s.at(Address::from_id(4)) = {3, Word256{400}, {}, Bytes{0x00}};
    return s;
}

WorldState random_state(std::mt19937_64& rng, size_t n)
{
    WorldState s;
    for (size_t i = 0; i < n; ++i)
    {
        auto& a = s.at(Address::from_id(rng()));
        a.nonce = rng() % 5;
        a.balance = Word256{rng() % 1000 + 1};
        for (uint64_t k = 0, m = rng() % 3; k < m; ++k)
            a.store(Word256{rng() % 8}, Word256{rng() % 4});
        if (rng() % 4 == 0)
            a.code = Bytes{0x7f, static_cast<uint8_t>(rng())};
    }
    return s;
}
}  // namespace

TEST(state_root, golden_constants)
{
    EXPECT_EQ(state_root(WorldState{}).hex(), kEmptyRoot);
    EXPECT_EQ(state_root(four_accounts()).hex(), kFourAccountRoot);

    WorldState single;
    single.at(Address::from_id(1)).balance = Word256{100};
    EXPECT_EQ(state_root(single).hex(), kSingleAccountRoot);
}

TEST(state_root, balance_change_changes_root)
{
    WorldState s;
    s.at(Address::from_id(1)).balance = Word256{100};
    const auto before = state_root(s);
    s.at(Address::from_id(1)).balance += Word256{1};
    EXPECT_NE(state_root(s), before);
}

TEST(state_root, insertion_order_is_irrelevant)
{
    WorldState a, b;
    a.at(Address::from_id(1)).balance = Word256{1};
    a.at(Address::from_id(2)).balance = Word256{2};
    b.at(Address::from_id(2)).balance = Word256{2};
    b.at(Address::from_id(1)).balance = Word256{1};
    EXPECT_EQ(state_root(a), state_root(b));
}

TEST(state_root, zero_slots_and_empty_accounts_do_not_count)
{
    auto s = four_accounts();
    const auto root = state_root(s);

    s.at(Address::from_id(3)).storage[Word256{5}] = Word256{};  // bypasses store()'s pruning
    s.at(Address::from_id(99));
    EXPECT_EQ(state_root(s), root);
    EXPECT_EQ(state_root(s), state_root(s));
}

TEST(membership, valid_and_tampered_proofs)
{
    const auto s = four_accounts();
    const auto root = state_root(s);
    for (uint64_t id = 1; id <= 4; ++id)
    {
        const auto addr = Address::from_id(id);
        const auto proof = prove_account(s, addr);
        ASSERT_TRUE(proof);
        EXPECT_EQ(proof->size(), 2u);
        EXPECT_TRUE(verify_membership(root, addr, s.get(addr), *proof));

        auto tampered = s.get(addr);
        tampered.balance += Word256{1};
        EXPECT_FALSE(verify_membership(root, addr, tampered, *proof));
        EXPECT_FALSE(verify_membership(root, Address::from_id(id + 10), s.get(addr), *proof));
    }
    EXPECT_FALSE(verify_membership(root, Address::from_id(1), s.get(Address::from_id(1)), {}));
    EXPECT_FALSE(prove_account(s, Address::from_id(42)));
}

TEST(membership, odd_leaf_count_duplicates_last)
{
    WorldState s;
    for (uint64_t id = 1; id <= 3; ++id)
        s.at(Address::from_id(id)).balance = Word256{id};
    const auto root = state_root(s);
    const auto proof = prove_account(s, Address::from_id(3));
    ASSERT_TRUE(proof);
    // The duplicated node is its own sibling at the bottom level.
    EXPECT_EQ((*proof)[0].sibling, account_leaf(Address::from_id(3), s.get(Address::from_id(3))));
    EXPECT_TRUE(verify_membership(root, Address::from_id(3), s.get(Address::from_id(3)), *proof));
}

TEST(membership, property_every_account_provable)
{
    std::mt19937_64 rng{7};
    for (int round = 0; round < 60; ++round)
    {
        const auto s = random_state(rng, rng() % 64 + 1);
        const auto root = state_root(s);
        for (const auto& [addr, acct] : s.accounts)
        {
            if (acct.is_empty())
                continue;
            const auto proof = prove_account(s, addr);
            ASSERT_TRUE(proof);
            ASSERT_TRUE(verify_membership(root, addr, acct, *proof));
        }
    }
}

TEST(hash, selector_and_topic)
{
    EXPECT_EQ(selector("transfer(address,uint256)"), 0x3b88ef57u);
    EXPECT_EQ(hash(std::string_view{"Transfer(address,address,uint256)"}).hex(),
        "0x2fb30cfca4728c7f62d6787ef949fc7943d813f5093ebc6c343c6cc6f3ec1a56");
}
