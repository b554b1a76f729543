// chain2: a miniature Ethereum-style execution model and security lab
// Copyright 2026 The chain2 Authors.
// SPDX-License-Identifier: Apache-2.0

#include <chain2/asm.hpp>
#include <chain2/fixtures.hpp>
#include <chain2/hash.hpp>
#include <chain2/seclab.hpp>
#include <chain2/token.hpp>

#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <random>
#include <stdexcept>

namespace chain2::seclab
{
namespace
{
using json = nlohmann::ordered_json;

const Word256 kFund{1'000'000'000'000};
constexpr int64_t kGas = 1'000'000;
constexpr int64_t kAttackGas = 3'000'000;

Address account(uint64_t id)
{
    return Address::from_id(id);
}

std::string str(const Word256& w)
{
    return w.decimal();
}

std::string str(const Address& a)
{
    return a.hex();
}

/// A fresh chain with five funded EOAs and a report being filled in.
class Lab
{
public:
    Lab(std::string name, const Options& opts) : opts_{opts}, chain_{config(), genesis()} { report.name = std::move(name); }

    Report report;

    chain::Chain& chain() noexcept { return chain_; }

    chain::Receipt send(const Address& from, const Address& to, Bytes payload, const Word256& value = {},
        int64_t gas = kGas)
    {
        chain::Transaction tx;
        tx.nonce = chain_.next_nonce(from);
        tx.gas_price = Word256{1};
        tx.gas_limit = gas;
        tx.to = to;
        tx.value = value;
        tx.payload = std::move(payload);
        tx.sender = from;
        return chain_.transact(std::move(tx));
    }

    chain::Receipt call(const Address& from, const Address& to, std::string_view sig,
        std::initializer_list<Word256> args = {}, const Word256& value = {}, int64_t gas = kGas)
    {
        return send(from, to, calldata::encode_call(sig, std::span(args.begin(), args.size())), value, gas);
    }

    /// Deploys a fixture; a failed deployment is a broken scenario, not a finding.
    Address deploy(const Address& from, std::string_view fixture, std::initializer_list<Word256> args = {})
    {
        const auto init = assembly::build_init_code(
            assembly::parse_contract(fixtures::source(fixture)), std::span(args.begin(), args.size()));
        chain::Transaction tx;
        tx.nonce = chain_.next_nonce(from);
        tx.gas_price = Word256{1};
        tx.gas_limit = kGas;
        tx.payload = init;
        tx.sender = from;
        const auto r = chain_.transact(std::move(tx));
        if (!r.ok() || !r.contract_address)
            throw std::logic_error("deploying " + std::string(fixture) + " failed: " + std::string(vm::to_string(r.status)));
        return *r.contract_address;
    }

    Word256 view(const Address& to, std::string_view sig, std::initializer_list<Word256> args = {}) const
    {
        const auto out = chain_.view(Address{}, to, calldata::encode_call(sig, std::span(args.begin(), args.size())));
        if (!out.ok())
            throw std::logic_error(std::string(sig) + " view failed");
        return calldata::decode_word(out.return_data);
    }

    Word256 balance(const Address& a) const { return chain_.state().get(a).balance; }

    void check(std::string name, bool passed, std::string expected, std::string actual)
    {
        report.assertions.push_back({std::move(name), passed, std::move(expected), std::move(actual)});
    }

    void check_eq(std::string name, const Word256& expected, const Word256& actual)
    {
        check(std::move(name), expected == actual, str(expected), str(actual));
    }

    void check_status(std::string name, const chain::Receipt& r, vm::Status expected)
    {
        check(std::move(name), r.status == expected, std::string(vm::to_string(expected)),
            std::string(vm::to_string(r.status)));
    }

    void keep_trace(std::string label, const Address& subject, const chain::Receipt& r)
    {
        TraceRecord rec{std::move(label), subject, r.trace, std::nullopt};
        if (opts_.trace_dir)
        {
            std::filesystem::create_directories(*opts_.trace_dir);
            auto path = *opts_.trace_dir / (report.name + "-" + rec.label + ".jsonl");
            std::ofstream out{path, std::ios::binary};
            out << vm::trace_to_jsonl(rec.trace);
            if (!out)
                throw std::runtime_error("cannot write trace " + path.string());
            rec.path = std::move(path);
        }
        report.traces.push_back(std::move(rec));
    }

    void record_balance(std::string label, const Address& a)
    {
        report.final_balances.push_back({std::move(label), a, balance(a)});
    }

    void note(std::string text) { report.notes.push_back(std::move(text)); }

private:
    static chain::ChainConfig config()
    {
        chain::ChainConfig cfg;
        cfg.deterministic = true;
        return cfg;
    }

    static WorldState genesis()
    {
        WorldState s;
        for (uint64_t id = 1; id <= 5; ++id)
            s.at(account(id)).balance = kFund;
        return s;
    }

    const Options& opts_;
    chain::Chain chain_;
};

std::string scenario_name(std::string_view base, bool fixed)
{
    return std::string(base) + (fixed ? "-fixed" : "");
}

/// Result pushed by the first `op` executed at `depth`, read from the next event at that depth.
std::optional<Word256> result_of(const vm::Trace& trace, Opcode op)
{
    for (size_t i = 0; i + 1 < trace.size(); ++i)
        if (trace[i].op == op && trace[i + 1].depth == trace[i].depth && !trace[i + 1].stack_top.empty())
            return trace[i + 1].stack_top.front();
    return std::nullopt;
}
}  // namespace

bool Report::passed() const noexcept
{
    return std::all_of(assertions.begin(), assertions.end(), [](const auto& a) { return a.passed; });
}

std::string Report::to_json() const
{
    json doc;
    doc["schema"] = "v1";
    doc["name"] = name;
    doc["passed"] = passed();
    doc["assertions"] = json::array();
    for (const auto& a : assertions)
        doc["assertions"].push_back({{"name", a.name}, {"passed", a.passed}, {"expected", a.expected}, {"actual", a.actual}});
    doc["final_balances"] = json::array();
    for (const auto& b : final_balances)
        doc["final_balances"].push_back({{"label", b.label}, {"address", b.address.hex()}, {"balance", b.balance.decimal()}});
    doc["trace_refs"] = json::array();
    for (const auto& t : traces)
        doc["trace_refs"].push_back({{"label", t.label}, {"path", t.path ? json(t.path->string()) : json(nullptr)},
            {"subject", t.subject.hex()}, {"events", t.trace.size()}});
    doc["notes"] = notes;
    return doc.dump(2);
}

Report reentrancy(const Options& opts, bool fixed)
{
    if (opts.count > 100)
        throw std::invalid_argument("re-entry count must be at most 100");
    Lab lab{scenario_name("reentrancy", fixed), opts};
    const auto funder_a = account(3), funder_b = account(4), attacker_eoa = account(2);
    const Word256 deposit{1};

    const auto victim = lab.deploy(account(1), fixed ? "dao_victim_fixed" : "dao_victim");
    lab.call(funder_a, victim, "deposit()", {}, Word256{60});
    lab.call(funder_b, victim, "deposit()", {}, Word256{40});
    const auto attacker = lab.deploy(attacker_eoa, "reentry_attacker");
    lab.call(attacker_eoa, attacker, "setDAO(address)", {Word256::from_address(victim)});
    lab.call(attacker_eoa, attacker, "setCount(uint256)", {Word256{opts.count}});
    lab.call(attacker_eoa, attacker, "depositToDao()", {}, deposit);
    lab.check_eq("victim_funded", Word256{101}, lab.balance(victim));

    const auto attack = lab.send(attacker_eoa, attacker, {}, {}, kAttackGas);
    lab.keep_trace("attack", victim, attack);
    lab.check_status("attack_tx_succeeds", attack, vm::Status::success);

    const auto drained = lab.balance(attacker);
    if (fixed)
    {
        lab.check("attacker_gains_at_most_deposit", drained <= deposit, "<= " + str(deposit), str(drained));
        lab.check_eq("victim_balance", Word256{100}, lab.balance(victim));
    }
    else
    {
        lab.check_eq("attacker_contract_balance", deposit + Word256{opts.count}, drained);
        lab.check_eq("victim_balance", Word256{100 - opts.count}, lab.balance(victim));
    }

    const auto eoa_before = lab.balance(attacker_eoa);
    const auto recover = lab.call(attacker_eoa, attacker, "withdraw()");
    lab.check_status("withdraw_tx_succeeds", recover, vm::Status::success);
    lab.check_eq("attacker_eoa_recovers_funds", eoa_before + drained - Word256{static_cast<uint64_t>(recover.gas_used)},
        lab.balance(attacker_eoa));
    lab.check_eq("attacker_contract_emptied", Word256{}, lab.balance(attacker));

    lab.record_balance("victim", victim);
    lab.record_balance("attacker_contract", attacker);
    lab.record_balance("attacker_eoa", attacker_eoa);
    lab.note("re-entry count " + std::to_string(opts.count) + ", 1 unit per withdraw, victim funded with 60 + 40");
    return std::move(lab.report);
}

Report delegatecall(const Options& opts, bool fixed)
{
    Lab lab{scenario_name("delegatecall", fixed), opts};
    const auto acct1 = account(1), acct2 = account(2);

    // Steps 1 and 2: account 1 deploys Delegate, then Delegation pointing at it.
    const auto delegate = lab.deploy(acct1, "delegate");
    const auto delegation = lab.deploy(acct1, fixed ? "delegation_fixed" : "delegation", {Word256::from_address(delegate)});

    // Step 3: both report account 1 as owner.
    lab.check("delegate_owner_before", lab.view(delegate, "owner()").to_address() == acct1, str(acct1),
        str(lab.view(delegate, "owner()").to_address()));
    lab.check("delegation_owner_before", lab.view(delegation, "owner()").to_address() == acct1, str(acct1),
        str(lab.view(delegation, "owner()").to_address()));
    const auto delegate_before = lab.chain().state().get(delegate);

    const auto matched = lab.call(acct2, delegation, "owner()");
    lab.check_status("matched_selector_call_succeeds", matched, vm::Status::success);
    lab.check("matched_selector_keeps_owner", lab.view(delegation, "owner()").to_address() == acct1, str(acct1),
        str(lab.view(delegation, "owner()").to_address()));

    // Step 4: account 2 sends pwn() to Delegation; no such selector there, so the fallback runs.
    const auto attack = lab.call(acct2, delegation, "pwn()");
    lab.keep_trace("attack", delegation, attack);

    // Step 5: inspect the owner slot.
    const auto owner_after = lab.view(delegation, "owner()").to_address();
    if (fixed)
    {
        lab.check_status("attack_tx_reverts", attack, vm::Status::revert);
        lab.check("delegation_owner_after", owner_after == acct1, str(acct1), str(owner_after));
    }
    else
    {
        lab.check_status("attack_tx_succeeds", attack, vm::Status::success);
        lab.check("delegation_owner_after", owner_after == acct2, str(acct2), str(owner_after));
    }
    const auto& delegate_after = lab.chain().state().get(delegate);
    lab.check("delegate_storage_unchanged",
        delegate_after.storage == delegate_before.storage && delegate_after.code == delegate_before.code, "identical",
        delegate_after.storage == delegate_before.storage ? "identical" : "modified");

    lab.record_balance("account1", acct1);
    lab.record_balance("account2", acct2);
    return std::move(lab.report);
}

Report overflow(const Options& opts, bool fixed)
{
    Lab lab{scenario_name("overflow", fixed), opts};
    const auto deployer = account(1), attacker = account(2), r1 = account(3), r2 = account(4), holder = account(5);
    const Word256 supply{1000};
    const auto big = Word256::pow2(255);

    const auto token = lab.deploy(deployer, fixed ? "batch_token_fixed" : "batch_token", {supply});
    const auto before = lab.chain().state().get(token);
    // batchTransfer(address[] receivers, uint256 value): head offset, value, then the array.
    const auto attack = lab.call(attacker, token, "batchTransfer(address[],uint256)",
        {Word256{64}, big, Word256{2}, Word256::from_address(r1), Word256::from_address(r2)});
    lab.keep_trace("attack", token, attack);
    const auto bal1 = lab.view(token, "balanceOf(address)", {Word256::from_address(r1)});
    const auto bal2 = lab.view(token, "balanceOf(address)", {Word256::from_address(r2)});

    if (fixed)
    {
        lab.check_status("batch_transfer_reverts", attack, vm::Status::revert);
        lab.check("token_state_unchanged", lab.chain().state().get(token) == before, "identical",
            lab.chain().state().get(token) == before ? "identical" : "modified");
    }
    else
    {
        lab.check_status("batch_transfer_succeeds", attack, vm::Status::success);
        const auto amount = result_of(attack.trace, Opcode::MUL);
        lab.check("amount_wraps_to_zero", amount && amount->is_zero(), "0", amount ? str(*amount) : "no MUL executed");
        lab.check_eq("receiver1_balance", big, bal1);
        lab.check_eq("receiver2_balance", big, bal2);
        lab.check_eq("attacker_balance", Word256{}, lab.view(token, "balanceOf(address)", {Word256::from_address(attacker)}));
        const auto deployer_bal = lab.view(token, "balanceOf(address)", {Word256::from_address(deployer)});
        // Exact sum: 1000 + 2 * 2^255 = 2^256 + 1000, which no 256-bit supply can equal.
        const auto partial = checked_add(deployer_bal, bal1);
        const auto total = partial ? checked_add(*partial, bal2) : std::nullopt;
        const auto supply_now = lab.view(token, "totalSupply()");
        lab.check("supply_invariant_broken", !total || *total != supply_now, "sum of balances != " + str(supply_now),
            total ? str(*total) : "exceeds 2^256");
    }

    // Underflow variant on the ERC-20 pair: send one more unit than held.
    const auto erc20 = lab.deploy(deployer, fixed ? "safe_token" : "vuln_token", {supply});
    token::Client client{lab.chain(), erc20};
    client.transfer(deployer, holder, Word256{10});
    const auto under = client.transfer(holder, r1, Word256{11});
    lab.keep_trace("underflow", erc20, under);
    if (fixed)
    {
        lab.check_status("overdraft_reverts", under, vm::Status::revert);
        lab.check_eq("sender_balance_kept", Word256{10}, client.balance_of(holder));
    }
    else
    {
        lab.check_status("overdraft_succeeds", under, vm::Status::success);
        lab.check_eq("sender_balance_wraps", Word256::max(), client.balance_of(holder));
    }

    lab.record_balance("attacker", attacker);
    lab.note("token balances are contract storage; final_balances lists native balances");
    return std::move(lab.report);
}

Report randomness(const Options& opts, bool fixed)
{
    constexpr int kRounds = 10;
    Lab lab{scenario_name("randomness", fixed), opts};
    const auto owner = account(1), attacker_eoa = account(2), honest = account(3);

    const auto game = lab.deploy(owner, fixed ? "coinflip_fixed" : "coinflip");
    lab.send(owner, game, {}, Word256{100});
    const auto attacker = lab.deploy(attacker_eoa, "flip_attacker", {Word256::from_address(game)});

    int wins = 0;
    for (int round = 0; round < kRounds; ++round)
    {
        const auto seed = Word256::from_hash(hash("chain2/coinflip-seed/" + std::to_string(round)));
        if (fixed)
        {
            const auto seed_bytes = seed.to_be_bytes();
            lab.call(owner, game, "commit(bytes32)", {Word256::from_hash(hash(BytesView(seed_bytes)))});
        }
        const auto before = lab.balance(attacker);
        const auto r = lab.call(attacker_eoa, attacker, "hack()");
        lab.keep_trace("round" + std::to_string(round), game, r);
        if (fixed)
            lab.call(owner, game, "reveal(uint256)", {seed});
        if (lab.balance(attacker) == before + Word256{1})
            ++wins;
    }

    const auto wins_w = Word256{static_cast<uint64_t>(wins)};
    if (fixed)
        lab.check("attacker_wins_fewer_than_all", wins < kRounds, "< 10", std::to_string(wins));
    else
    {
        lab.check_eq("attacker_wins", Word256{kRounds}, wins_w);
        lab.check_eq("consecutive_wins", Word256{kRounds}, lab.view(game, "consecutiveWins()"));
        lab.check_eq("attacker_contract_balance", Word256{kRounds}, lab.balance(attacker));

        // Baseline: an honest player guessing with a seeded generator.
        std::mt19937_64 rng{2026};
        int honest_wins = 0;
        for (int round = 0; round < kRounds; ++round)
        {
            const auto guess = Word256{rng() & 1};
            const auto r = lab.call(honest, game, "flip(bool)", {guess});
            if (r.ok() && calldata::decode_word(r.return_data) == Word256{1})
                ++honest_wins;
        }
        lab.note("honest random guesser won " + std::to_string(honest_wins) + "/10 (fair odds of 10/10 are 2^-10)");
    }

    lab.record_balance("game", game);
    lab.record_balance("attacker_contract", attacker);
    return std::move(lab.report);
}

std::vector<std::string> scenario_names()
{
    return {"reentrancy", "reentrancy-fixed", "delegatecall", "delegatecall-fixed", "overflow", "overflow-fixed",
        "randomness", "randomness-fixed"};
}

Report run(std::string_view name, const Options& opts)
{
    const bool fixed = name.ends_with("-fixed");
    const auto base = fixed ? name.substr(0, name.size() - 6) : name;
    if (base == "reentrancy")
        return reentrancy(opts, fixed);
    if (base == "delegatecall")
        return delegatecall(opts, fixed);
    if (base == "overflow")
        return overflow(opts, fixed);
    if (base == "randomness")
        return randomness(opts, fixed);
    throw std::invalid_argument("unknown scenario: " + std::string(name));
}

}  // namespace chain2::seclab
