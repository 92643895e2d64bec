#include "bfgen/lang.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

namespace bfgen {

namespace {

constexpr char kHexDigits[] = "0123456789ABCDEF";

int hex_value(char c) {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
}

}  // namespace

char Instruction::symbol() const {
    switch (op) {
        case Op::Right: return '>';
        case Op::Left: return '<';
        case Op::Inc: return '+';
        case Op::Dec: return '-';
        case Op::Out: return '.';
        case Op::In: return ',';
        case Op::LoopOpen: return '[';
        case Op::LoopClose: return ']';
        case Op::FastInit: return kHexDigits[arg & 0x0F];
        case Op::Store: return '$';
        case Op::Load: return '!';
        case Op::Halt: return '@';
        case Op::Call: return static_cast<char>('a' + arg);
        case Op::Invalid: return static_cast<char>(arg);
    }
    return '?';
}

std::optional<Instruction> Instruction::from_symbol(char c) {
    switch (c) {
        case '>': return kRight;
        case '<': return kLeft;
        case '+': return kInc;
        case '-': return kDec;
        case '.': return kOut;
        case ',': return kIn;
        case '[': return kOpen;
        case ']': return kClose;
        case '$': return Instruction{Op::Store};
        case '!': return Instruction{Op::Load};
        case '@': return Instruction{Op::Halt};
        default: break;
    }
    if (int h = hex_value(c); h >= 0) return Instruction{Op::FastInit, static_cast<std::uint8_t>(h)};
    if (c >= 'a' && c <= 'z') return Instruction{Op::Call, static_cast<std::uint8_t>(c - 'a')};
    return std::nullopt;
}

InstructionSet InstructionSet::core() {
    InstructionSet s;
    s.members_ = {kRight, kLeft, kInc, kDec, kOut, kIn, kOpen, kClose};
    return s;
}

InstructionSet InstructionSet::extended(std::size_t function_count) {
    if (function_count > kMaxFunctions)
        throw std::invalid_argument("at most 26 functions can be bound (a-z)");
    InstructionSet s = core();
    s.extended_ = true;
    s.function_table_size_ = function_count;
    for (std::uint8_t d = 0; d < 16; ++d) s.members_.push_back({Op::FastInit, d});
    s.members_.push_back({Op::Store});
    s.members_.push_back({Op::Load});
    s.members_.push_back({Op::Halt});
    for (std::size_t f = 0; f < function_count; ++f)
        s.members_.push_back({Op::Call, static_cast<std::uint8_t>(f)});
    return s;
}

std::optional<std::size_t> InstructionSet::index_of(Instruction ins) const {
    auto it = std::find(members_.begin(), members_.end(), ins);
    if (it == members_.end()) return std::nullopt;
    return static_cast<std::size_t>(it - members_.begin());
}

std::string Program::source() const {
    std::string s;
    s.reserve(ins_.size());
    for (const auto& i : ins_) s.push_back(i.symbol());
    return s;
}

bool is_valid_gene(double gene) { return gene > 0.0 && gene <= 1.0; }

Instruction decode_gene(double gene, const InstructionSet& set) {
    if (!is_valid_gene(gene))
        throw DomainError("gene value " + std::to_string(gene) + " outside (0,1]");
    if (set.size() == 0) throw std::invalid_argument("empty instruction set");
    const auto n = static_cast<double>(set.size());
    // Intervals are upper-inclusive: k = ceil(g*n) - 1.
    auto k = static_cast<std::size_t>(std::ceil(gene * n)) - 1;
    k = std::min(k, set.size() - 1);
    return set.members()[k];
}

Program decode_genome(const Genome& genome, const InstructionSet& set) {
    std::vector<Instruction> out;
    out.reserve(genome.size());
    for (std::size_t i = 0; i < genome.size(); ++i) {
        const double g = genome.genes[i];
        if (!is_valid_gene(g))
            throw DomainError("gene " + std::to_string(i) + " has value " + std::to_string(g) +
                                  " outside (0,1]",
                              i);
        out.push_back(decode_gene(g, set));
    }
    return Program(std::move(out));
}

Genome encode_program(const Program& program, const InstructionSet& set) {
    Genome g;
    g.genes.reserve(program.size());
    const auto n = static_cast<double>(set.size());
    for (std::size_t i = 0; i < program.size(); ++i) {
        auto k = set.index_of(program[i]);
        if (!k)
            throw EncodingError(std::string("instruction '") + program[i].symbol() + "' at " +
                                std::to_string(i) + " is not in the " + set.name() + " set");
        g.genes.push_back((static_cast<double>(*k) + 0.5) / n);
    }
    return g;
}

Program parse_source(std::string_view text, const InstructionSet& set, ParseMode mode) {
    std::vector<Instruction> out;
    out.reserve(text.size());
    for (std::size_t pos = 0; pos < text.size(); ++pos) {
        const char c = text[pos];
        if (std::isspace(static_cast<unsigned char>(c))) continue;
        auto ins = Instruction::from_symbol(c);
        if (ins && set.contains(*ins)) {
            out.push_back(*ins);
            continue;
        }
        if (mode == ParseMode::Strict)
            throw ParseError(std::string("unrecognized instruction '") + c + "' at position " +
                                 std::to_string(pos),
                             pos);
        out.push_back({Op::Invalid, static_cast<std::uint8_t>(c)});
    }
    return Program(std::move(out));
}

}  // namespace bfgen
