#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace bfgen {

enum class Op : std::uint8_t {
    Right,      // >
    Left,       // <
    Inc,        // +
    Dec,        // -
    Out,        // .
    In,         // ,
    LoopOpen,   // [
    LoopClose,  // ]
    FastInit,   // 0-9 A-F, cell = 16 * arg
    Store,      // $  cell -> storage
    Load,       // !  storage -> cell
    Halt,       // @
    Call,       // a-z, arg = function index
    Invalid,    // lenient-parse fault marker, arg = original character
};

struct Instruction {
    Op op = Op::Invalid;
    std::uint8_t arg = 0;

    char symbol() const;
    static std::optional<Instruction> from_symbol(char c);

    friend bool operator==(const Instruction&, const Instruction&) = default;
};

inline constexpr Instruction kRight{Op::Right};
inline constexpr Instruction kLeft{Op::Left};
inline constexpr Instruction kInc{Op::Inc};
inline constexpr Instruction kDec{Op::Dec};
inline constexpr Instruction kOut{Op::Out};
inline constexpr Instruction kIn{Op::In};
inline constexpr Instruction kOpen{Op::LoopOpen};
inline constexpr Instruction kClose{Op::LoopClose};

inline constexpr std::size_t kMaxFunctions = 26;

/// Ordered instruction alphabet used to decode genes. Gene ranges partition
/// (0,1] into members().size() equal half-open intervals in member order.
class InstructionSet {
public:
    /// The eight core instructions in gene-map order: > < + - . , [ ]
    static InstructionSet core();
    /// Core set, then fast-init 0-F, $ ! @, then one call per bound function.
    static InstructionSet extended(std::size_t function_count = 0);

    std::span<const Instruction> members() const { return members_; }
    std::size_t size() const { return members_.size(); }
    std::size_t function_table_size() const { return function_table_size_; }
    bool is_extended() const { return extended_; }
    std::string name() const { return extended_ ? "extended" : "core"; }

    std::optional<std::size_t> index_of(Instruction ins) const;
    bool contains(Instruction ins) const { return index_of(ins).has_value(); }

    friend bool operator==(const InstructionSet&, const InstructionSet&) = default;

private:
    std::vector<Instruction> members_;
    std::size_t function_table_size_ = 0;
    bool extended_ = false;
};

struct Genome {
    std::vector<double> genes;

    std::size_t size() const { return genes.size(); }
    friend bool operator==(const Genome&, const Genome&) = default;
};

class Program {
public:
    Program() = default;
    explicit Program(std::vector<Instruction> instructions) : ins_(std::move(instructions)) {}

    std::span<const Instruction> instructions() const { return ins_; }
    const Instruction& operator[](std::size_t i) const { return ins_[i]; }
    std::size_t size() const { return ins_.size(); }
    bool empty() const { return ins_.empty(); }
    std::string source() const;

    friend bool operator==(const Program&, const Program&) = default;

private:
    std::vector<Instruction> ins_;
};

/// Gene outside (0,1]. `index` is the offending gene position when known.
class DomainError : public std::domain_error {
public:
    DomainError(const std::string& what, std::optional<std::size_t> index = std::nullopt)
        : std::domain_error(what), index_(index) {}
    std::optional<std::size_t> index() const { return index_; }

private:
    std::optional<std::size_t> index_;
};

class EncodingError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& what, std::size_t position)
        : std::runtime_error(what), position_(position) {}
    std::size_t position() const { return position_; }

private:
    std::size_t position_;
};

Instruction decode_gene(double gene, const InstructionSet& set);
Program decode_genome(const Genome& genome, const InstructionSet& set);

/// Each gene is the midpoint of its instruction's range.
Genome encode_program(const Program& program, const InstructionSet& set);

bool is_valid_gene(double gene);

enum class ParseMode { Strict, Lenient };

/// Whitespace is skipped. Characters outside `set` raise ParseError in strict
/// mode and become Op::Invalid markers in lenient mode.
Program parse_source(std::string_view text, const InstructionSet& set,
                     ParseMode mode = ParseMode::Lenient);

}  // namespace bfgen
