// chain2: a miniature Ethereum-style execution model and security lab
// Copyright 2026 The chain2 Authors.
// SPDX-License-Identifier: Apache-2.0

#include <chain2/asm.hpp>
#include <chain2/hash.hpp>

#include <algorithm>
#include <cctype>
#include <set>
#include <sstream>

namespace chain2::assembly
{
namespace
{
std::string_view trim(std::string_view s) noexcept
{
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
        s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
        s.remove_suffix(1);
    return s;
}

std::string_view strip_comment(std::string_view line) noexcept
{
    if (const auto pos = line.find('#'); pos != std::string_view::npos)
        line = line.substr(0, pos);
    return trim(line);
}

std::vector<std::string_view> split_lines(std::string_view text)
{
    std::vector<std::string_view> lines;
    size_t start = 0;
    while (start <= text.size())
    {
        const auto end = text.find('\n', start);
        if (end == std::string_view::npos)
        {
            if (start < text.size())
                lines.push_back(text.substr(start));
            break;
        }
        lines.push_back(text.substr(start, end - start));
        start = end + 1;
    }
    return lines;
}

bool is_label_name(std::string_view s) noexcept
{
    if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_'))
        return false;
    return std::all_of(s.begin(), s.end(),
        [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.'; });
}

std::string upper(std::string_view s)
{
    std::string out(s);
    for (auto& c : out)
        c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    return out;
}

Instruction make_push(const Word256& value, int line)
{
    Instruction ins;
    ins.op = Opcode::PUSH;
    ins.immediate = value;
    ins.line = line;
    return ins;
}

Instruction make_op(Opcode op)
{
    Instruction ins;
    ins.op = op;
    return ins;
}

void parse_statement(Program& program, std::string_view text, int line)
{
    // Optional leading label.
    if (const auto colon = text.find(':'); colon != std::string_view::npos)
    {
        const auto name = trim(text.substr(0, colon));
        if (is_label_name(name) && name.find(' ') == std::string_view::npos)
        {
            if (!program.labels.emplace(std::string(name), program.instructions.size()).second)
                throw AsmError(line, "duplicate label '" + std::string(name) + "'");
            text = trim(text.substr(colon + 1));
        }
    }
    if (text.empty())
        return;
    if (text.front() == '.')
        throw AsmError(line, "unexpected directive '" + std::string(text) + "'");

    const auto space = text.find_first_of(" \t");
    const auto mnemonic = upper(text.substr(0, space));
    const auto operand = space == std::string_view::npos ? std::string_view{} : trim(text.substr(space));

    auto require_operand = [&] {
        if (operand.empty())
            throw AsmError(line, mnemonic + " requires an operand");
    };

    if (mnemonic == "PUSH")
    {
        require_operand();
        try
        {
            program.instructions.push_back(make_push(Word256::parse(operand), line));
        }
        catch (const ParseError& e)
        {
            throw AsmError(line, "immediate out of range or malformed: " + std::string(e.what()));
        }
        return;
    }
    if (mnemonic == "PUSHL")
    {
        require_operand();
        if (!is_label_name(operand))
            throw AsmError(line, "invalid label name '" + std::string(operand) + "'");
        auto ins = make_push(Word256{}, line);
        ins.label_ref = std::string(operand);
        program.instructions.push_back(std::move(ins));
        return;
    }
    if (mnemonic == "PUSHSEL")
    {
        require_operand();
        program.instructions.push_back(make_push(Word256{selector(operand)}, line));
        return;
    }
    if (mnemonic == "DATA")
    {
        require_operand();
        Instruction ins;
        try
        {
            ins.data = from_hex(operand);
        }
        catch (const ParseError& e)
        {
            throw AsmError(line, std::string("malformed DATA: ") + e.what());
        }
        ins.line = line;
        program.instructions.push_back(std::move(ins));
        return;
    }

    const auto op = opcode_from_name(mnemonic);
    if (!op)
        throw AsmError(line, "unknown mnemonic '" + mnemonic + "'");
    if (!operand.empty())
        throw AsmError(line, mnemonic + " takes no operand");
    auto ins = make_op(*op);
    ins.line = line;
    program.instructions.push_back(std::move(ins));
}
}  // namespace

void Program::append(const Program& other)
{
    const size_t base = instructions.size();
    for (const auto& [name, index] : other.labels)
    {
        const auto line = index < other.instructions.size() ? other.instructions[index].line : 0;
        if (!labels.emplace(name, base + index).second)
            throw AsmError(line, "duplicate label '" + name + "'");
    }
    instructions.insert(instructions.end(), other.instructions.begin(), other.instructions.end());
}

Program parse(std::string_view source)
{
    Program program;
    int line_no = 0;
    for (const auto raw : split_lines(source))
    {
        ++line_no;
        const auto text = strip_comment(raw);
        if (!text.empty())
            parse_statement(program, text, line_no);
    }
    return program;
}

Bytecode encode(const Program& program)
{
    std::vector<size_t> offsets;
    offsets.reserve(program.instructions.size() + 1);
    size_t pc = 0;
    for (const auto& ins : program.instructions)
    {
        offsets.push_back(pc);
        pc += ins.size();
    }
    offsets.push_back(pc);

    Bytecode out;
    out.reserve(pc);
    for (const auto& ins : program.instructions)
    {
        if (ins.data)
        {
            append(out, *ins.data);
            continue;
        }
        out.push_back(static_cast<uint8_t>(ins.op));
        if (ins.op != Opcode::PUSH)
            continue;

        Word256 value = ins.immediate.value_or(Word256{});
        if (ins.label_ref)
        {
            const auto it = program.labels.find(*ins.label_ref);
            if (it == program.labels.end())
                throw AsmError(ins.line, "unresolved label '" + *ins.label_ref + "'");
            const auto index = it->second;
            if (index >= program.instructions.size() || program.instructions[index].data ||
                program.instructions[index].op != Opcode::JUMPDEST)
                throw AsmError(ins.line, "label '" + *ins.label_ref + "' does not mark a JUMPDEST");
            value = Word256{offsets[index]};
        }
        const auto bytes = value.to_be_bytes();
        append(out, bytes);
    }
    return out;
}

std::vector<Decoded> decode(BytesView code)
{
    std::vector<Decoded> out;
    size_t pc = 0;
    auto push_data = [&out](size_t offset, BytesView bytes) {
        // Merge adjacent undefined bytes into one run.
        if (!out.empty() && out.back().data && out.back().offset + out.back().data->size() == offset)
            append(*out.back().data, bytes);
        else
            out.push_back({offset, Opcode::STOP, std::nullopt, Bytes(bytes.begin(), bytes.end())});
    };

    while (pc < code.size())
    {
        const uint8_t byte = code[pc];
        if (!is_defined(byte))
        {
            push_data(pc, code.subspan(pc, 1));
            ++pc;
            continue;
        }
        const auto op = static_cast<Opcode>(byte);
        if (op == Opcode::PUSH)
        {
            if (pc + 1 + kPushImmediateSize > code.size())
            {
                push_data(pc, code.subspan(pc));
                break;
            }
            out.push_back({pc, op, Word256::from_be_bytes(code.subspan(pc + 1, kPushImmediateSize)), std::nullopt});
            pc += 1 + kPushImmediateSize;
            continue;
        }
        out.push_back({pc, op, std::nullopt, std::nullopt});
        ++pc;
    }
    return out;
}

std::string disassemble(BytesView code)
{
    const auto decoded = decode(code);
    std::set<uint64_t> jumpdests;
    for (const auto& d : decoded)
        if (!d.data && d.op == Opcode::JUMPDEST)
            jumpdests.insert(d.offset);

    auto label_for = [](uint64_t offset) { return "L" + std::to_string(offset); };

    std::ostringstream os;
    for (const auto& d : decoded)
    {
        if (d.data)
        {
            os << "DATA " << to_hex(*d.data) << '\n';
            continue;
        }
        if (d.op == Opcode::JUMPDEST)
            os << label_for(d.offset) << ":\n";
        if (d.op != Opcode::PUSH)
            os << info(d.op).name << '\n';
        else if (const auto& imm = *d.immediate; imm.fits_u64() && jumpdests.contains(imm.low64()))
            os << "PUSHL " << label_for(imm.low64()) << '\n';
        else
            os << "PUSH " << imm.hex() << '\n';
    }
    return os.str();
}

ContractSource parse_contract(std::string_view source)
{
    enum class Section
    {
        none,
        constructor,
        runtime
    };

    // Each section is parsed from a copy of the file with the other section's
    // lines blanked, so reported line numbers match the file.
    std::string ctor_text, runtime_text;
    Section current = Section::none;
    bool saw_directive = false;
    int line_no = 0;
    for (const auto raw : split_lines(source))
    {
        ++line_no;
        const auto text = strip_comment(raw);
        if (!text.empty() && text.front() == '.')
        {
            if (text == ".constructor" && !saw_directive)
                current = Section::constructor;
            else if (text == ".runtime" && current != Section::runtime)
                current = Section::runtime;
            else
                throw AsmError(line_no, "unexpected directive '" + std::string(text) + "'");
            saw_directive = true;
            ctor_text += '\n';
            runtime_text += '\n';
            continue;
        }
        if (!text.empty() && current == Section::none && saw_directive)
            throw AsmError(line_no, "statement outside a section");
        (current == Section::constructor ? ctor_text : runtime_text) += raw;
        ctor_text += '\n';
        runtime_text += '\n';
    }
    if (saw_directive && current != Section::runtime)
        throw AsmError(line_no, "missing .runtime section");
    return {parse(ctor_text), parse(runtime_text)};
}

Bytecode build_init_code(const ContractSource& contract, std::span<const Word256> args)
{
    const auto runtime = encode(contract.runtime);

    Program init;
    for (auto it = args.rbegin(); it != args.rend(); ++it)
        init.instructions.push_back(make_push(*it, 0));
    init.append(contract.constructor);

    for (size_t off = 0; off < runtime.size(); off += 32)
    {
        std::array<uint8_t, 32> chunk{};
        std::copy_n(runtime.begin() + static_cast<std::ptrdiff_t>(off), std::min<size_t>(32, runtime.size() - off),
            chunk.begin());
        init.instructions.push_back(make_push(Word256::from_be_bytes(chunk), 0));
        init.instructions.push_back(make_push(Word256{off}, 0));
        init.instructions.push_back(make_op(Opcode::MSTORE));
    }
    init.instructions.push_back(make_push(Word256{runtime.size()}, 0));
    init.instructions.push_back(make_push(Word256{}, 0));
    init.instructions.push_back(make_op(Opcode::RETURN));
    return encode(init);
}

}  // namespace chain2::assembly
