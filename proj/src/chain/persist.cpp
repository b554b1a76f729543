// chain2: a miniature Ethereum-style execution model and security lab
// Copyright 2026 The chain2 Authors.
// SPDX-License-Identifier: Apache-2.0

#include <chain2/chain.hpp>

#include <json.hpp>

namespace chain2::chain
{
namespace
{
using json = nlohmann::ordered_json;

constexpr auto kVersion = "chain2/v1";

std::string dec(uint64_t v)
{
    return std::to_string(v);
}

uint64_t parse_u64(const json& j)
{
    const auto w = Word256::parse(j.get<std::string>());
    if (!w.fits_u64())
        throw ParseError("integer does not fit in 64 bits: " + j.get<std::string>());
    return w.low64();
}

Word256 parse_word(const json& j)
{
    return Word256::parse(j.get<std::string>());
}

Bytes parse_bytes(const json& j)
{
    return from_hex(j.get<std::string>());
}

vm::Status parse_status(const std::string& s)
{
    for (auto st : {vm::Status::success, vm::Status::revert, vm::Status::out_of_gas, vm::Status::fault})
        if (vm::to_string(st) == s)
            return st;
    throw ParseError("unknown status '" + s + "'");
}

json tx_to_json(const Transaction& tx)
{
    return {
        {"hash", tx.hash().hex()},
        {"nonce", dec(tx.nonce)},
        {"gas_price", tx.gas_price.decimal()},
        {"gas_limit", dec(static_cast<uint64_t>(tx.gas_limit))},
        {"to", tx.to.hex()},
        {"value", tx.value.decimal()},
        {"payload", to_hex(tx.payload)},
        {"sender", tx.sender.hex()},
    };
}

Transaction tx_from_json(const json& j)
{
    Transaction tx;
    tx.nonce = parse_u64(j.at("nonce"));
    tx.gas_price = parse_word(j.at("gas_price"));
    tx.gas_limit = static_cast<int64_t>(parse_u64(j.at("gas_limit")));
    tx.to = Address::from_hex(j.at("to").get<std::string>());
    tx.value = parse_word(j.at("value"));
    tx.payload = parse_bytes(j.at("payload"));
    tx.sender = Address::from_hex(j.at("sender").get<std::string>());
    return tx;
}

json log_to_json(const vm::Log& log)
{
    json topics = json::array();
    for (const auto& t : log.topics)
        topics.push_back(t.hex());
    return {{"address", log.address.hex()}, {"topics", topics}, {"data", to_hex(log.data)}};
}

vm::Log log_from_json(const json& j)
{
    vm::Log log;
    log.address = Address::from_hex(j.at("address").get<std::string>());
    for (const auto& t : j.at("topics"))
        log.topics.push_back(parse_word(t));
    log.data = parse_bytes(j.at("data"));
    return log;
}

json receipt_to_json(const Receipt& r)
{
    json logs = json::array();
    for (const auto& l : r.logs)
        logs.push_back(log_to_json(l));
    return {
        {"tx_hash", r.tx_hash.hex()},
        {"status", std::string(vm::to_string(r.status))},
        {"gas_used", dec(static_cast<uint64_t>(r.gas_used))},
        {"contract_address", r.contract_address ? json(r.contract_address->hex()) : json(nullptr)},
        {"logs", logs},
        {"return_data", to_hex(r.return_data)},
    };
}

Receipt receipt_from_json(const json& j)
{
    Receipt r;
    r.tx_hash = Hash32::from_hex(j.at("tx_hash").get<std::string>());
    r.status = parse_status(j.at("status").get<std::string>());
    r.gas_used = static_cast<int64_t>(parse_u64(j.at("gas_used")));
    if (!j.at("contract_address").is_null())
        r.contract_address = Address::from_hex(j.at("contract_address").get<std::string>());
    for (const auto& l : j.at("logs"))
        r.logs.push_back(log_from_json(l));
    r.return_data = parse_bytes(j.at("return_data"));
    return r;
}

json state_to_json(const WorldState& s)
{
    json accounts = json::array();
    for (const auto& [addr, acct] : s.accounts)
    {
        json storage = json::object();
        for (const auto& [k, v] : acct.storage)
            storage[k.decimal()] = v.decimal();
        accounts.push_back({
            {"address", addr.hex()},
            {"nonce", dec(acct.nonce)},
            {"balance", acct.balance.decimal()},
            {"code", to_hex(acct.code)},
            {"storage", storage},
        });
    }
    return accounts;
}

WorldState state_from_json(const json& j)
{
    WorldState s;
    for (const auto& a : j)
    {
        auto& acct = s.at(Address::from_hex(a.at("address").get<std::string>()));
        acct.nonce = parse_u64(a.at("nonce"));
        acct.balance = parse_word(a.at("balance"));
        acct.code = parse_bytes(a.at("code"));
        for (const auto& [k, v] : a.at("storage").items())
            acct.store(Word256::parse(k), parse_word(v));
    }
    return s;
}

json block_to_json(const Block& b)
{
    json txs = json::array();
    for (const auto& tx : b.transactions)
        txs.push_back(tx_to_json(tx));
    json receipts = json::array();
    for (const auto& r : b.receipts)
        receipts.push_back(receipt_to_json(r));
    return {
        {"number", dec(b.number)},
        {"timestamp", dec(b.timestamp)},
        {"parent_hash", b.parent_hash.hex()},
        {"state_root", b.state_root.hex()},
        {"tx_root", b.tx_root.hex()},
        {"difficulty_bits", dec(b.difficulty_bits)},
        {"nonce", dec(b.nonce)},
        {"miner", b.miner.hex()},
        {"hash", b.hash.hex()},
        {"transactions", txs},
        {"receipts", receipts},
    };
}

Block block_from_json(const json& j)
{
    Block b;
    b.number = parse_u64(j.at("number"));
    b.timestamp = parse_u64(j.at("timestamp"));
    b.parent_hash = Hash32::from_hex(j.at("parent_hash").get<std::string>());
    b.state_root = Hash32::from_hex(j.at("state_root").get<std::string>());
    b.tx_root = Hash32::from_hex(j.at("tx_root").get<std::string>());
    b.difficulty_bits = static_cast<unsigned>(parse_u64(j.at("difficulty_bits")));
    b.nonce = parse_u64(j.at("nonce"));
    b.miner = Address::from_hex(j.at("miner").get<std::string>());
    b.hash = Hash32::from_hex(j.at("hash").get<std::string>());
    for (const auto& tx : j.at("transactions"))
        b.transactions.push_back(tx_from_json(tx));
    for (const auto& r : j.at("receipts"))
        b.receipts.push_back(receipt_from_json(r));
    return b;
}

void expect(bool ok, uint64_t block, const std::string& what)
{
    if (!ok)
        throw std::runtime_error("replay mismatch in block " + std::to_string(block) + ": " + what);
}

bool same_receipt(const Receipt& a, const Receipt& b)
{
    return a.tx_hash == b.tx_hash && a.status == b.status && a.gas_used == b.gas_used &&
           a.contract_address == b.contract_address && a.logs == b.logs && a.return_data == b.return_data;
}
}  // namespace

std::string Chain::to_json() const
{
    json blocks = json::array();
    for (const auto& b : blocks_)
        blocks.push_back(block_to_json(b));
    json pending = json::array();
    for (const auto& tx : mempool_.ordered())
        pending.push_back(tx_to_json(tx));
    const json doc = {
        {"version", kVersion},
        {"config",
            {
                {"difficulty_bits", dec(config_.difficulty_bits)},
                {"deterministic", config_.deterministic},
                {"block_reward", config_.block_reward.decimal()},
                {"genesis_timestamp", dec(config_.genesis_timestamp)},
                {"miner", config_.miner.hex()},
            }},
        {"genesis", state_to_json(genesis_)},
        {"blocks", blocks},
        {"mempool", pending},
    };
    return doc.dump(2) + "\n";
}

Chain Chain::from_json(std::string_view text)
{
    json doc;
    try
    {
        doc = json::parse(text);
    }
    catch (const json::exception& e)
    {
        throw ParseError(std::string("chain document: ") + e.what());
    }

    try
    {
        if (doc.at("version").get<std::string>() != kVersion)
            throw ParseError("unsupported chain document version");

        const auto& cfg = doc.at("config");
        ChainConfig config;
        config.difficulty_bits = static_cast<unsigned>(parse_u64(cfg.at("difficulty_bits")));
        config.deterministic = cfg.at("deterministic").get<bool>();
        config.block_reward = parse_word(cfg.at("block_reward"));
        config.genesis_timestamp = parse_u64(cfg.at("genesis_timestamp"));
        config.miner = Address::from_hex(cfg.at("miner").get<std::string>());

        Chain chain{config, state_from_json(doc.at("genesis"))};
        const auto& blocks = doc.at("blocks");
        if (blocks.empty())
            throw ParseError("chain document has no genesis block");
        expect(block_from_json(blocks.front()).hash == chain.head().hash, 0, "genesis hash");

        for (size_t i = 1; i < blocks.size(); ++i)
        {
            auto stored = block_from_json(blocks[i]);
            const auto ctx = chain.next_context();
            expect(stored.number == ctx.number, stored.number, "block number");
            expect(stored.timestamp == ctx.timestamp, stored.number, "timestamp");
            expect(stored.parent_hash == ctx.parent_hash, stored.number, "parent hash");
            expect(stored.receipts.size() == stored.transactions.size(), stored.number, "receipt count");

            for (size_t k = 0; k < stored.transactions.size(); ++k)
            {
                Receipt r;
                try
                {
                    r = apply_transaction(chain.state_, stored.transactions[k], ctx, stored.miner);
                }
                catch (const TxRejected& e)
                {
                    expect(false, stored.number, std::string("transaction rejected: ") + e.what());
                }
                expect(same_receipt(r, stored.receipts[k]), stored.number, "receipt " + std::to_string(k));
                stored.receipts[k].trace = std::move(r.trace);
            }
            if (!config.block_reward.is_zero())
                chain.state_.at(stored.miner).balance += config.block_reward;

            expect(state_root(chain.state_) == stored.state_root, stored.number, "state root");
            expect(transactions_root(stored.transactions) == stored.tx_root, stored.number, "transaction root");
            expect(header_hash(stored) == stored.hash, stored.number, "header hash");
            expect(leading_zero_bits(stored.hash) >= stored.difficulty_bits, stored.number, "proof of work");
            chain.blocks_.push_back(std::move(stored));
        }

        for (const auto& tx : doc.at("mempool"))
            chain.mempool_.add(tx_from_json(tx));
        return chain;
    }
    catch (const json::exception& e)
    {
        throw ParseError(std::string("chain document: ") + e.what());
    }
}

}  // namespace chain2::chain
