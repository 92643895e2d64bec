#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "bfgen/lang.hpp"

namespace bfgen {

enum class InputExhaustion {
    Terminate,  // `,` with no input left ends the run with InputExhausted
    ReadZero,   // `,` with no input left stores 0 and continues
};

struct Limits {
    std::uint64_t max_ticks = 5000;
    std::size_t tape_len = 256;
    std::size_t max_call_depth = 16;
    InputExhaustion on_input_exhausted = InputExhaustion::Terminate;

    /// Throws std::invalid_argument when any bound is zero.
    void validate() const;

    friend bool operator==(const Limits&, const Limits&) = default;
};

enum class Termination { Completed, TickLimit, Fault, InputExhausted, Halted };

enum class FaultReason {
    UnmatchedBracket,
    InvalidInstruction,
    PointerEscape,
    CallDepth,
};

struct Fault {
    std::size_t position = 0;
    FaultReason reason = FaultReason::InvalidInstruction;

    friend bool operator==(const Fault&, const Fault&) = default;
};

enum class Action : std::uint8_t { ReadInput, WriteOutput };

std::string to_string(Termination t);
std::string to_string(FaultReason r);
std::string to_string(Action a);

/// Result of one sandboxed run. Positions (print sites, fault position) live
/// in a flat site space: the main program occupies [0, n), bound function k
/// follows at an offset equal to the combined length of everything before it.
struct ExecReport {
    std::vector<std::uint8_t> output;
    Termination termination = Termination::Completed;
    std::optional<Fault> fault;
    std::uint64_t ticks_used = 0;
    std::size_t cells_touched = 0;
    std::vector<std::size_t> print_sites;
    std::vector<Action> action_trace;

    bool ok() const {
        return termination == Termination::Completed || termination == Termination::Halted;
    }
};

inline constexpr std::size_t kNoPartner = std::numeric_limits<std::size_t>::max();

/// jump[i] is the partner of the bracket at i, or kNoPartner for unmatched
/// brackets and non-bracket instructions.
std::vector<std::size_t> match_brackets(const Program& program);

struct MachineState {
    std::vector<std::uint8_t> tape;
    /// Signed: the pointer may step off the tape; only accessing a cell there faults.
    std::ptrdiff_t data_ptr = 0;
    std::size_t instr_ptr = 0;
    std::uint64_t ticks = 0;
    std::uint8_t storage = 0;
    std::size_t call_depth = 0;

    bool pointer_in_range() const {
        return data_ptr >= 0 && static_cast<std::size_t>(data_ptr) < tape.size();
    }
    std::uint8_t& cell() { return tape[static_cast<std::size_t>(data_ptr)]; }
};

/// Handler for an instruction the sandbox simulates instead of performing.
/// Returning a Termination ends the run.
using SimulationHandler = std::function<std::optional<Termination>(MachineState&, Instruction)>;

class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class SimulationRegistry {
public:
    /// Storage ($ !) and halt (@).
    static SimulationRegistry defaults();

    void add(Op op, SimulationHandler handler);
    bool has(Op op) const { return handlers_.count(op) != 0; }
    const SimulationHandler* find(Op op) const;

private:
    std::unordered_map<Op, SimulationHandler> handlers_;
};

bool requires_simulation(Op op);

/// Dispatches one simulated instruction. Throws ConfigError when no handler is
/// registered; Interpreter checks this up front so a run never hits it.
std::optional<Termination> simulate_instruction(Instruction ins, MachineState& state,
                                                const SimulationRegistry& registry);

class Interpreter;

/// A single run in progress. step() applies exactly one instruction.
class Execution {
public:
    Execution(const Interpreter& interp, const Program& program,
              std::span<const std::uint8_t> input);

    /// Applies one instruction. Returns false once the run has terminated; the
    /// call that detects normal completion or the tick limit applies nothing.
    bool step();
    bool finished() const { return done_; }
    const MachineState& state() const { return state_; }
    const ExecReport& report() const { return report_; }
    /// Site-space position of the next instruction to execute.
    std::size_t next_site() const;
    ExecReport take_report() &&;

private:
    struct Frame {
        const Program* program;
        const std::vector<std::size_t>* jumps;
        std::size_t ip;
        std::size_t site_base;
    };

    void finish(Termination t, std::optional<Fault> fault = std::nullopt);
    bool touch();

    const Interpreter* interp_;
    std::vector<std::size_t> main_jumps_;
    std::vector<Frame> frames_;
    std::span<const std::uint8_t> input_;
    std::size_t input_pos_ = 0;
    MachineState state_;
    ExecReport report_;
    std::vector<bool> touched_;
    bool done_ = false;
};

/// Sandboxed tape machine bound to one instruction set, limits and function
/// table. run() never throws for program misbehaviour: every abnormal outcome
/// is encoded in ExecReport::termination and output produced before the stop
/// is kept.
class Interpreter {
public:
    explicit Interpreter(InstructionSet set = InstructionSet::core(), Limits limits = {},
                         std::vector<Program> functions = {},
                         SimulationRegistry simulations = SimulationRegistry::defaults());

    ExecReport run(const Program& program, std::span<const std::uint8_t> input = {}) const;

    const InstructionSet& instruction_set() const { return set_; }
    const Limits& limits() const { return limits_; }
    const std::vector<Program>& functions() const { return functions_; }

private:
    friend class Execution;

    InstructionSet set_;
    Limits limits_;
    std::vector<Program> functions_;
    std::vector<std::vector<std::size_t>> function_jumps_;
    std::vector<std::size_t> function_site_offsets_;  // relative to end of main program
    std::array<bool, 14> op_enabled_{};
    SimulationRegistry simulations_;
};

ExecReport run(const Program& program, std::span<const std::uint8_t> input, const Limits& limits,
               const InstructionSet& set, const std::vector<Program>& functions = {});

}  // namespace bfgen
