// chain2: a miniature Ethereum-style execution model and security lab
// Copyright 2026 The chain2 Authors.
// SPDX-License-Identifier: Apache-2.0

#include <chain2/asm.hpp>
#include <chain2/cli.hpp>
#include <chain2/detect.hpp>
#include <chain2/hash.hpp>
#include <chain2/seclab.hpp>
#include <chain2/token.hpp>

#include <CLI11.hpp>
#include <json.hpp>

#include <fcntl.h>
#include <unistd.h>

#include <algorithm>
#include <cerrno>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace chain2::cli
{
namespace
{
namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

/// A domain failure reported as {"error": ...} with exit code 1.
class Failure : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

std::string read_file(const fs::path& path)
{
    std::ifstream in{path, std::ios::binary};
    if (!in)
        throw Failure("cannot read " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

/// Writes a sibling temp file and renames it over `path`.
void write_atomically(const fs::path& path, std::string_view content)
{
    auto tmp = path;
    tmp += ".tmp." + std::to_string(::getpid());
    {
        std::ofstream out{tmp, std::ios::binary | std::ios::trunc};
        out << content;
        out.flush();
        if (!out)
            throw Failure("cannot write " + tmp.string());
    }
    std::error_code ec;
    fs::rename(tmp, path, ec);
    if (ec)
    {
        fs::remove(tmp);
        throw Failure("cannot replace " + path.string() + ": " + ec.message());
    }
}

/// Exclusive writer lock: <chain>.lock created with O_EXCL, removed on scope exit.
class WriterLock
{
public:
    explicit WriterLock(fs::path chain) : path_{std::move(chain)}
    {
        path_ += ".lock";
        const int fd = ::open(path_.c_str(), O_CREAT | O_EXCL | O_WRONLY, 0644);
        if (fd < 0)
        {
            if (errno == EEXIST)
                throw Failure("chain is locked by another writer; remove " + path_.string() + " if it is stale");
            throw Failure("cannot create lock " + path_.string() + ": " + std::strerror(errno));
        }
        const auto pid = std::to_string(::getpid()) + "\n";
        [[maybe_unused]] const auto n = ::write(fd, pid.data(), pid.size());
        ::close(fd);
    }
    WriterLock(const WriterLock&) = delete;
    WriterLock& operator=(const WriterLock&) = delete;
    ~WriterLock()
    {
        std::error_code ec;
        fs::remove(path_, ec);
    }

private:
    fs::path path_;
};

/// 0x-prefixed 20-byte hex, or a decimal account id as used by `init`.
Address parse_address(std::string_view text)
{
    if (text.starts_with("0x") || text.starts_with("0X"))
    {
        if (text.size() != 42)
            throw Failure("address must have 40 hex digits: " + std::string(text));
        return Address::from_hex(text);
    }
    const auto w = Word256::parse(text);
    if (!w.fits_u64())
        throw Failure("account id out of range: " + std::string(text));
    return Address::from_id(w.low64());
}

std::vector<Word256> parse_words(const std::vector<std::string>& items)
{
    std::vector<Word256> out;
    for (const auto& item : items)
        out.push_back(Word256::parse(item));
    return out;
}

/// Hex text (whitespace and 0x tolerated) or, failing that, raw bytes.
Bytes read_bytecode(const fs::path& path)
{
    const auto text = read_file(path);
    if (path.extension() == ".mvm")
        return assembly::encode(assembly::parse_contract(text).runtime);
    std::string compact;
    std::copy_if(text.begin(), text.end(), std::back_inserter(compact), [](char c) { return !std::isspace(static_cast<unsigned char>(c)); });
    try
    {
        return from_hex(compact);
    }
    catch (const ParseError&)
    {
        return Bytes(text.begin(), text.end());
    }
}

json log_json(const vm::Log& log)
{
    json topics = json::array();
    for (const auto& t : log.topics)
        topics.push_back(t.hex());
    return {{"address", log.address.hex()}, {"topics", topics}, {"data", to_hex(log.data)}};
}

json receipt_json(const chain::Receipt& r)
{
    json logs = json::array();
    for (const auto& l : r.logs)
        logs.push_back(log_json(l));
    return {{"tx_hash", r.tx_hash.hex()}, {"status", vm::to_string(r.status)}, {"gas_used", r.gas_used},
        {"contract_address", r.contract_address ? json(r.contract_address->hex()) : json(nullptr)}, {"logs", logs},
        {"return_data", to_hex(r.return_data)}};
}

json block_json(const chain::Block& b)
{
    json txs = json::array();
    for (size_t i = 0; i < b.transactions.size(); ++i)
        txs.push_back({{"hash", b.transactions[i].hash().hex()}, {"sender", b.transactions[i].sender.hex()},
            {"nonce", b.transactions[i].nonce}, {"gas_price", b.transactions[i].gas_price.decimal()},
            {"receipt", receipt_json(b.receipts.at(i))}});
    return {{"number", b.number}, {"hash", b.hash.hex()}, {"parent_hash", b.parent_hash.hex()},
        {"timestamp", b.timestamp}, {"state_root", b.state_root.hex()}, {"tx_root", b.tx_root.hex()},
        {"difficulty_bits", b.difficulty_bits}, {"nonce", b.nonce}, {"miner", b.miner.hex()}, {"transactions", txs}};
}

/// Where the chain document lives: --chain, else $CHAIN2_HOME/chain.json, else ./.chain2/chain.json.
fs::path resolve_chain_path(const std::string& flag)
{
    if (!flag.empty())
    {
        fs::path p{flag};
        const auto parent = p.has_parent_path() ? p.parent_path() : fs::path{"."};
        if (!fs::is_directory(parent))
            throw Failure("directory " + parent.string() + " does not exist");
        return p;
    }
    const char* home = std::getenv("CHAIN2_HOME");
    fs::path dir = home && *home ? fs::path{home} : fs::path{".chain2"};
    fs::create_directories(dir);
    return dir / "chain.json";
}

chain::Chain load_chain(const fs::path& path)
{
    if (!fs::exists(path))
        throw Failure("no chain at " + path.string() + "; run init first");
    return chain::Chain::from_json(read_file(path));
}

void save_chain(const fs::path& path, const chain::Chain& c)
{
    write_atomically(path, c.to_json());
}

struct Flags
{
    std::string chain;
    bool human = false;

    // init
    uint64_t accounts = 4;
    std::string fund = "1000000000000000000";
    unsigned difficulty_bits = 8;
    bool random_nonce = false;
    std::string block_reward = "0";
    bool force = false;

    // transactions
    std::string from, to, code, sig, data, value = "0", gas_price = "1";
    std::vector<std::string> args;
    int64_t gas = 0;

    // mine
    uint64_t blocks = 1;

    // inspect
    std::string address, slot;
    uint64_t number = 0;
    std::string tx_hash;

    // token
    std::string contract;

    // scenario
    std::string scenario, out_path, trace_dir;
    uint64_t count = 50;

    // analyze, asm, disasm
    std::string trace, file;
    bool init_code = false;
};

class Runner
{
public:
    Runner(const Flags& f, std::ostream& out, std::ostream& err) : f_{f}, out_{out}, err_{err} {}

    int emit(const json& doc, int code = kExitOk)
    {
        out_ << doc.dump(2) << '\n';
        return code;
    }

    int init()
    {
        const auto path = resolve_chain_path(f_.chain);
        if (fs::exists(path) && !f_.force)
            throw Failure("chain already exists at " + path.string() + "; pass --force to replace it");
        WriterLock lock{path};
        chain::ChainConfig cfg;
        cfg.difficulty_bits = f_.difficulty_bits;
        cfg.deterministic = !f_.random_nonce;
        cfg.block_reward = Word256::parse(f_.block_reward);
        WorldState genesis;
        const auto fund = Word256::parse(f_.fund);
        json accounts = json::array();
        for (uint64_t id = 1; id <= f_.accounts; ++id)
        {
            genesis.at(Address::from_id(id)).balance = fund;
            accounts.push_back({{"id", id}, {"address", Address::from_id(id).hex()}, {"balance", fund.decimal()}});
        }
        chain::Chain c{cfg, genesis};
        save_chain(path, c);
        err_ << "initialized " << path.string() << " with " << f_.accounts << " funded accounts\n";
        return emit({{"chain", path.string()}, {"genesis_hash", c.head().hash.hex()},
            {"state_root", c.head().state_root.hex()}, {"accounts", accounts}});
    }

    int deploy()
    {
        const auto path = resolve_chain_path(f_.chain);
        WriterLock lock{path};
        auto c = load_chain(path);
        const auto words = parse_words(f_.args);
        chain::Transaction tx;
        tx.sender = parse_address(f_.from);
        tx.nonce = c.next_nonce(tx.sender);
        tx.gas_price = Word256::parse(f_.gas_price);
        tx.gas_limit = f_.gas > 0 ? f_.gas : 1'000'000;
        tx.value = Word256::parse(f_.value);
        tx.payload = assembly::build_init_code(assembly::parse_contract(read_file(f_.code)), words);
        const auto receipt = c.transact(std::move(tx));
        save_chain(path, c);
        if (!receipt.ok())
            return emit({{"error", "deployment failed: " + std::string(vm::to_string(receipt.status))},
                            {"receipt", receipt_json(receipt)}},
                kExitError);
        return emit({{"contract_address", receipt.contract_address->hex()}, {"block", c.head().number},
            {"receipt", receipt_json(receipt)}});
    }

    int call()
    {
        const auto path = resolve_chain_path(f_.chain);
        WriterLock lock{path};
        auto c = load_chain(path);
        chain::Transaction tx;
        tx.sender = parse_address(f_.from);
        tx.to = parse_address(f_.to);
        tx.nonce = c.next_nonce(tx.sender);
        tx.gas_price = Word256::parse(f_.gas_price);
        tx.gas_limit = f_.gas > 0 ? f_.gas : token::kDefaultGas;
        tx.value = Word256::parse(f_.value);
        if (!f_.sig.empty())
        {
            const auto words = parse_words(f_.args);
            tx.payload = calldata::encode_call(f_.sig, words);
        }
        else if (!f_.data.empty())
            tx.payload = from_hex(f_.data);
        const auto hash = tx.hash();
        const auto nonce = tx.nonce;
        c.submit(std::move(tx));
        save_chain(path, c);
        return emit({{"queued", true}, {"tx_hash", hash.hex()}, {"nonce", nonce}, {"mempool_size", c.mempool().size()}});
    }

    int mine()
    {
        const auto path = resolve_chain_path(f_.chain);
        WriterLock lock{path};
        auto c = load_chain(path);
        json blocks = json::array();
        for (uint64_t i = 0; i < f_.blocks; ++i)
        {
            const auto& b = c.mine();
            err_ << "mined block " << b.number << " with " << b.transactions.size() << " transactions\n";
            blocks.push_back(block_json(b));
        }
        save_chain(path, c);
        return emit({{"blocks", blocks}, {"mempool_size", c.mempool().size()}});
    }

    int inspect_account()
    {
        const auto c = load_chain(resolve_chain_path(f_.chain));
        const auto a = parse_address(f_.address);
        const auto& acct = c.state().get(a);
        return emit({{"address", a.hex()}, {"nonce", acct.nonce}, {"balance", acct.balance.decimal()},
            {"is_contract", acct.is_contract()}, {"code_size", acct.code.size()}, {"code_hash", hash(acct.code).hex()},
            {"storage_slots", acct.storage.size()}, {"storage_root", storage_root(acct).hex()}});
    }

    int inspect_storage()
    {
        const auto c = load_chain(resolve_chain_path(f_.chain));
        const auto a = parse_address(f_.address);
        const auto key = Word256::parse(f_.slot);
        const auto v = c.state().get(a).load(key);
        return emit({{"address", a.hex()}, {"slot", key.hex()}, {"value", v.hex()}, {"decimal", v.decimal()}});
    }

    int inspect_root()
    {
        const auto c = load_chain(resolve_chain_path(f_.chain));
        return emit({{"head", c.head().number}, {"head_hash", c.head().hash.hex()},
            {"state_root", state_root(c.state()).hex()}, {"mempool_size", c.mempool().size()}});
    }

    int inspect_block()
    {
        const auto c = load_chain(resolve_chain_path(f_.chain));
        if (f_.number >= c.blocks().size())
            throw Failure("no block " + std::to_string(f_.number) + "; head is " + std::to_string(c.head().number));
        return emit(block_json(c.blocks()[f_.number]));
    }

    int inspect_receipt()
    {
        const auto c = load_chain(resolve_chain_path(f_.chain));
        const auto r = c.receipt(Hash32::from_hex(f_.tx_hash));
        if (!r)
            throw Failure("no receipt for " + f_.tx_hash);
        return emit(receipt_json(*r));
    }

    int token_holders()
    {
        auto c = load_chain(resolve_chain_path(f_.chain));
        token::Client t{c, parse_address(f_.contract)};
        const auto holders = t.holders();
        const auto supply = t.total_supply();
        if (f_.human)
        {
            for (const auto& h : holders)
                out_ << h.address.hex() << "  " << h.balance.decimal() << '\n';
            out_ << "total supply " << supply.decimal() << '\n';
            return kExitOk;
        }
        json list = json::array();
        for (const auto& h : holders)
            list.push_back({{"address", h.address.hex()}, {"balance", h.balance.decimal()}});
        return emit({{"holders", list}, {"totalSupply", supply.decimal()}});
    }

    int scenario_list()
    {
        return emit({{"scenarios", seclab::scenario_names()}});
    }

    int scenario_run()
    {
        seclab::Options opts;
        opts.count = f_.count;
        if (!f_.trace_dir.empty())
            opts.trace_dir = f_.trace_dir;
        seclab::Report report;
        try
        {
            report = seclab::run(f_.scenario, opts);
        }
        catch (const std::invalid_argument& e)
        {
            throw Failure(e.what());
        }
        const int code = report.passed() ? kExitOk : kExitError;
        if (!f_.out_path.empty())
        {
            write_atomically(f_.out_path, report.to_json() + "\n");
            return emit({{"name", report.name}, {"passed", report.passed()}, {"report", f_.out_path}}, code);
        }
        if (f_.human)
        {
            for (const auto& a : report.assertions)
                out_ << (a.passed ? "PASS " : "FAIL ") << a.name << "  expected " << a.expected << ", got " << a.actual << '\n';
            for (const auto& n : report.notes)
                out_ << "note: " << n << '\n';
            return code;
        }
        out_ << report.to_json() << '\n';
        return code;
    }

    int analyze()
    {
        const auto result = detect::analyze_static(read_bytecode(f_.code));
        for (const auto& w : result.warnings)
            err_ << "warning: " << w << '\n';
        auto findings = result.findings;
        if (!f_.trace.empty())
        {
            const auto trace = vm::trace_from_jsonl(read_file(f_.trace));
            const auto dyn = detect::analyze_dynamic(trace);
            findings.insert(findings.end(), dyn.begin(), dyn.end());
        }
        const int code = detect::has_high_severity(findings) ? kExitFindings : kExitOk;
        if (f_.human)
        {
            for (const auto& f : findings)
            {
                out_ << '[' << detect::to_string(f.severity) << "] " << detect::to_string(f.vuln_class) << ' ' << f.rule
                     << " at " << f.location << '\n';
                for (const auto& e : f.evidence)
                    out_ << "    " << e << '\n';
            }
            return code;
        }
        out_ << detect::to_json(findings) << '\n';
        return code;
    }

    int assemble()
    {
        const auto contract = assembly::parse_contract(read_file(f_.file));
        const auto words = parse_words(f_.args);
        const auto code = f_.init_code ? assembly::build_init_code(contract, words) : assembly::encode(contract.runtime);
        if (f_.human)
        {
            out_ << to_hex(code) << '\n';
            return kExitOk;
        }
        return emit({{"section", f_.init_code ? "init" : "runtime"}, {"size", code.size()}, {"bytecode", to_hex(code)}});
    }

    int disassemble()
    {
        const auto text = assembly::disassemble(read_bytecode(f_.file));
        if (f_.human)
        {
            out_ << text;
            return kExitOk;
        }
        return emit({{"source", text}});
    }

private:
    const Flags& f_;
    std::ostream& out_;
    std::ostream& err_;
};

constexpr const char* kAuthNote =
    "NOTE: senders are not authenticated. Any --from address is accepted as the transaction sender; "
    "there are no keys or signatures.";
}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    Flags f;
    CLI::App app{"chain2: a miniature Ethereum-style chain, attack lab and vulnerability detector", "chain2"};
    app.footer(std::string(kAuthNote) +
               "\nAddresses are 0x-prefixed hex or the decimal id of an account created by init."
               "\nThe chain file defaults to $CHAIN2_HOME/chain.json (CHAIN2_HOME defaults to ./.chain2).");
    app.require_subcommand(1);
    app.fallthrough();
    app.add_option("--chain", f.chain, "Chain file path");
    app.add_flag("--human", f.human, "Human-readable output instead of JSON");

    auto* init = app.add_subcommand("init", "Create a genesis block with funded accounts");
    init->add_option("--accounts", f.accounts, "Number of funded accounts (ids 1..N)")->capture_default_str();
    init->add_option("--fund", f.fund, "Balance of each account")->capture_default_str();
    init->add_option("--difficulty-bits", f.difficulty_bits, "Leading zero bits required of block hashes")->capture_default_str();
    init->add_flag("--random-nonce", f.random_nonce, "Start the nonce search at a random value");
    init->add_option("--block-reward", f.block_reward, "Reward credited to the miner per block")->capture_default_str();
    init->add_flag("--force", f.force, "Replace an existing chain");

    auto* deploy = app.add_subcommand("deploy", "Deploy a contract and mine it into a block");
    deploy->footer(kAuthNote);
    deploy->add_option("--from", f.from, "Sender")->required();
    deploy->add_option("--code", f.code, "Contract source (.mvm)")->required();
    deploy->add_option("--args", f.args, "Constructor arguments")->delimiter(',');
    deploy->add_option("--value", f.value, "Value sent with the creation");
    deploy->add_option("--gas", f.gas, "Gas limit (default 1000000)");
    deploy->add_option("--gas-price", f.gas_price, "Gas price");

    auto* call = app.add_subcommand("call", "Queue a transaction in the mempool");
    call->footer(kAuthNote);
    call->add_option("--from", f.from, "Sender")->required();
    call->add_option("--to", f.to, "Recipient")->required();
    auto* sig = call->add_option("--sig", f.sig, "Function signature, e.g. \"transfer(address,uint256)\"");
    call->add_option("--args", f.args, "Arguments, one 32-byte word each")->delimiter(',');
    call->add_option("--data", f.data, "Raw call data in hex")->excludes(sig);
    call->add_option("--value", f.value, "Value to send");
    call->add_option("--gas", f.gas, "Gas limit (default 300000)");
    call->add_option("--gas-price", f.gas_price, "Gas price");

    auto* mine = app.add_subcommand("mine", "Mine blocks from the mempool");
    mine->add_option("--blocks", f.blocks, "Number of blocks")->capture_default_str();

    auto* inspect = app.add_subcommand("inspect", "Read chain state");
    inspect->require_subcommand(1);
    auto* i_account = inspect->add_subcommand("account", "Account fields");
    i_account->add_option("address", f.address)->required();
    auto* i_storage = inspect->add_subcommand("storage", "One storage slot");
    i_storage->add_option("address", f.address)->required();
    i_storage->add_option("slot", f.slot)->required();
    auto* i_root = inspect->add_subcommand("root", "Head block and state root");
    auto* i_block = inspect->add_subcommand("block", "A block by number");
    i_block->add_option("number", f.number)->required();
    auto* i_receipt = inspect->add_subcommand("receipt", "A receipt by transaction hash");
    i_receipt->add_option("hash", f.tx_hash)->required();

    auto* token = app.add_subcommand("token", "Token queries");
    token->require_subcommand(1);
    auto* holders = token->add_subcommand("holders", "Holders with nonzero balances and the total supply");
    holders->add_option("--contract", f.contract, "Token contract")->required();

    auto* scenario = app.add_subcommand("scenario", "Attack scenarios");
    scenario->require_subcommand(1);
    auto* s_list = scenario->add_subcommand("list", "Scenario names");
    auto* s_run = scenario->add_subcommand("run", "Run a scenario on a private chain");
    s_run->add_option("name", f.scenario)->required();
    s_run->add_option("--out", f.out_path, "Write the report here instead of stdout");
    s_run->add_option("--trace-dir", f.trace_dir, "Export attack traces as JSON Lines");
    s_run->add_option("--count", f.count, "Re-entry budget for the re-entrancy attacker")->capture_default_str();

    auto* analyze = app.add_subcommand("analyze", "Static and dynamic vulnerability analysis");
    analyze->add_option("--code", f.code, "Bytecode (.bin hex or raw) or source (.mvm)")->required();
    analyze->add_option("--trace", f.trace, "Execution trace (.jsonl)");

    auto* asm_cmd = app.add_subcommand("asm", "Assemble a contract");
    asm_cmd->add_option("file", f.file, "Source (.mvm)")->required();
    asm_cmd->add_flag("--init", f.init_code, "Emit creation code instead of runtime code");
    asm_cmd->add_option("--args", f.args, "Constructor arguments for --init")->delimiter(',');

    auto* disasm = app.add_subcommand("disasm", "Disassemble bytecode");
    disasm->add_option("file", f.file, "Bytecode (.bin hex or raw)")->required();

    // The first bare word must name a subcommand; CLI11 alone reports it as a missing one.
    for (size_t i = 0; i < args.size(); ++i)
    {
        if (args[i] == "--chain")
            ++i;
        else if (!args[i].starts_with("-"))
        {
            if (app.get_subcommand_no_throw(args[i]) == nullptr)
            {
                err << "error: unknown subcommand '" << args[i] << "'\n\n" << app.help();
                return kExitUsage;
            }
            break;
        }
    }

    try
    {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(std::move(reversed));
    }
    catch (const CLI::CallForHelp&)
    {
        out << app.help();
        return kExitOk;
    }
    catch (const CLI::CallForAllHelp&)
    {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    }
    catch (const CLI::ParseError& e)
    {
        err << "error: " << e.what() << "\n\n" << app.help();
        return kExitUsage;
    }

    Runner r{f, out, err};
    try
    {
        if (*init)
            return r.init();
        if (*deploy)
            return r.deploy();
        if (*call)
            return r.call();
        if (*mine)
            return r.mine();
        if (*i_account)
            return r.inspect_account();
        if (*i_storage)
            return r.inspect_storage();
        if (*i_root)
            return r.inspect_root();
        if (*i_block)
            return r.inspect_block();
        if (*i_receipt)
            return r.inspect_receipt();
        if (*holders)
            return r.token_holders();
        if (*s_list)
            return r.scenario_list();
        if (*s_run)
            return r.scenario_run();
        if (*analyze)
            return r.analyze();
        if (*asm_cmd)
            return r.assemble();
        if (*disasm)
            return r.disassemble();
    }
    catch (const std::exception& e)
    {
        err << "error: " << e.what() << '\n';
        out << json{{"error", e.what()}}.dump(2) << '\n';
        return kExitError;
    }
    err << app.help();
    return kExitUsage;
}

}  // namespace chain2::cli
