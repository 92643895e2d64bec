#include "bfgen/interp.hpp"

#include <utility>

namespace bfgen {

void Limits::validate() const {
    if (max_ticks < 1) throw ConfigError("max_ticks must be >= 1");
    if (tape_len < 1) throw ConfigError("tape_len must be >= 1");
}

std::string to_string(Termination t) {
    switch (t) {
        case Termination::Completed: return "Completed";
        case Termination::TickLimit: return "TickLimit";
        case Termination::Fault: return "Fault";
        case Termination::InputExhausted: return "InputExhausted";
        case Termination::Halted: return "Halted";
    }
    return "?";
}

std::string to_string(FaultReason r) {
    switch (r) {
        case FaultReason::UnmatchedBracket: return "unmatched-bracket";
        case FaultReason::InvalidInstruction: return "invalid-instruction";
        case FaultReason::PointerEscape: return "pointer-escape";
        case FaultReason::CallDepth: return "call-depth";
    }
    return "?";
}

std::string to_string(Action a) { return a == Action::ReadInput ? "read" : "write"; }

std::vector<std::size_t> match_brackets(const Program& program) {
    std::vector<std::size_t> jumps(program.size(), kNoPartner);
    std::vector<std::size_t> open;
    for (std::size_t i = 0; i < program.size(); ++i) {
        const Op op = program[i].op;
        if (op == Op::LoopOpen) {
            open.push_back(i);
        } else if (op == Op::LoopClose && !open.empty()) {
            jumps[i] = open.back();
            jumps[open.back()] = i;
            open.pop_back();
        }
    }
    return jumps;
}

// ---------------------------------------------------------------------------
// Simulated instructions

bool requires_simulation(Op op) { return op == Op::Store || op == Op::Load || op == Op::Halt; }

SimulationRegistry SimulationRegistry::defaults() {
    SimulationRegistry r;
    r.add(Op::Store, [](MachineState& s, Instruction) -> std::optional<Termination> {
        s.storage = s.cell();
        return std::nullopt;
    });
    r.add(Op::Load, [](MachineState& s, Instruction) -> std::optional<Termination> {
        s.cell() = s.storage;
        return std::nullopt;
    });
    r.add(Op::Halt, [](MachineState&, Instruction) -> std::optional<Termination> {
        return Termination::Halted;
    });
    return r;
}

void SimulationRegistry::add(Op op, SimulationHandler handler) {
    handlers_[op] = std::move(handler);
}

const SimulationHandler* SimulationRegistry::find(Op op) const {
    auto it = handlers_.find(op);
    return it == handlers_.end() ? nullptr : &it->second;
}

std::optional<Termination> simulate_instruction(Instruction ins, MachineState& state,
                                                const SimulationRegistry& registry) {
    const SimulationHandler* h = registry.find(ins.op);
    if (!h) throw ConfigError(std::string("no simulation handler for '") + ins.symbol() + "'");
    return (*h)(state, ins);
}

// ---------------------------------------------------------------------------
// Interpreter

Interpreter::Interpreter(InstructionSet set, Limits limits, std::vector<Program> functions,
                         SimulationRegistry simulations)
    : set_(std::move(set)),
      limits_(limits),
      functions_(std::move(functions)),
      simulations_(std::move(simulations)) {
    limits_.validate();
    if (functions_.size() != set_.function_table_size())
        throw ConfigError("instruction set binds " + std::to_string(set_.function_table_size()) +
                          " functions but " + std::to_string(functions_.size()) +
                          " were supplied");
    for (const auto& m : set_.members())
        if (requires_simulation(m.op) && !simulations_.has(m.op))
            throw ConfigError(std::string("instruction '") + m.symbol() +
                              "' is enabled but has no simulation handler");
    for (const auto& m : set_.members()) op_enabled_[static_cast<std::size_t>(m.op)] = true;
    std::size_t offset = 0;
    for (const auto& f : functions_) {
        function_jumps_.push_back(match_brackets(f));
        function_site_offsets_.push_back(offset);
        offset += f.size();
    }
}

ExecReport Interpreter::run(const Program& program, std::span<const std::uint8_t> input) const {
    Execution exec(*this, program, input);
    while (exec.step()) {
    }
    return std::move(exec).take_report();
}

ExecReport run(const Program& program, std::span<const std::uint8_t> input, const Limits& limits,
               const InstructionSet& set, const std::vector<Program>& functions) {
    return Interpreter(set, limits, functions).run(program, input);
}

// ---------------------------------------------------------------------------
// Execution

Execution::Execution(const Interpreter& interp, const Program& program,
                     std::span<const std::uint8_t> input)
    : interp_(&interp), main_jumps_(match_brackets(program)), input_(input) {
    state_.tape.assign(interp.limits_.tape_len, 0);
    touched_.assign(interp.limits_.tape_len, false);
    frames_.push_back(Frame{&program, &main_jumps_, 0, 0});
}

std::size_t Execution::next_site() const {
    const Frame& f = frames_.back();
    return f.site_base + f.ip;
}

void Execution::finish(Termination t, std::optional<Fault> fault) {
    done_ = true;
    report_.termination = t;
    report_.fault = fault;
    report_.ticks_used = state_.ticks;
}

bool Execution::touch() {
    if (!state_.pointer_in_range()) return false;
    auto idx = static_cast<std::size_t>(state_.data_ptr);
    if (!touched_[idx]) {
        touched_[idx] = true;
        ++report_.cells_touched;
    }
    return true;
}

ExecReport Execution::take_report() && { return std::move(report_); }

bool Execution::step() {
    if (done_) return false;

    // Return from finished function bodies; the call instruction already paid its tick.
    while (frames_.back().ip >= frames_.back().program->size()) {
        if (frames_.size() == 1) {
            finish(Termination::Completed);
            return false;
        }
        frames_.pop_back();
        --state_.call_depth;
        ++frames_.back().ip;
    }

    if (state_.ticks >= interp_->limits_.max_ticks) {
        finish(Termination::TickLimit);
        return false;
    }

    Frame& frame = frames_.back();
    const Instruction ins = (*frame.program)[frame.ip];
    const std::size_t site = frame.site_base + frame.ip;
    state_.instr_ptr = frame.ip;
    ++state_.ticks;

    auto fault = [&](FaultReason why) {
        finish(Termination::Fault, Fault{site, why});
        return false;
    };

    if (!interp_->op_enabled_[static_cast<std::size_t>(ins.op)] && ins.op != Op::Invalid)
        return fault(FaultReason::InvalidInstruction);

    switch (ins.op) {
        case Op::Right:
            ++state_.data_ptr;
            break;
        case Op::Left:
            --state_.data_ptr;
            break;
        case Op::Inc:
            if (!touch()) return fault(FaultReason::PointerEscape);
            ++state_.cell();
            break;
        case Op::Dec:
            if (!touch()) return fault(FaultReason::PointerEscape);
            --state_.cell();
            break;
        case Op::Out:
            if (!touch()) return fault(FaultReason::PointerEscape);
            report_.output.push_back(state_.cell());
            report_.print_sites.push_back(site);
            report_.action_trace.push_back(Action::WriteOutput);
            break;
        case Op::In:
            if (!touch()) return fault(FaultReason::PointerEscape);
            if (input_pos_ < input_.size()) {
                state_.cell() = input_[input_pos_++];
            } else if (interp_->limits_.on_input_exhausted == InputExhaustion::ReadZero) {
                state_.cell() = 0;
            } else {
                finish(Termination::InputExhausted);
                return false;
            }
            report_.action_trace.push_back(Action::ReadInput);
            break;
        case Op::LoopOpen:
            if (!touch()) return fault(FaultReason::PointerEscape);
            if (state_.cell() == 0) {
                const std::size_t partner = (*frame.jumps)[frame.ip];
                // Unmatched `[` on zero skips to the end of the body being run.
                frame.ip = partner == kNoPartner ? frame.program->size() : partner + 1;
                return true;
            }
            if ((*frame.jumps)[frame.ip] == kNoPartner) return fault(FaultReason::UnmatchedBracket);
            break;
        case Op::LoopClose:
            if (!touch()) return fault(FaultReason::PointerEscape);
            if (state_.cell() != 0) {
                const std::size_t partner = (*frame.jumps)[frame.ip];
                if (partner == kNoPartner) return fault(FaultReason::UnmatchedBracket);
                frame.ip = partner + 1;
                return true;
            }
            break;
        case Op::FastInit:
            if (!touch()) return fault(FaultReason::PointerEscape);
            state_.cell() = static_cast<std::uint8_t>(16 * ins.arg);
            break;
        case Op::Store:
        case Op::Load:
            if (!touch()) return fault(FaultReason::PointerEscape);
            [[fallthrough]];
        case Op::Halt:
            if (auto t = simulate_instruction(ins, state_, interp_->simulations_)) {
                ++frame.ip;
                finish(*t);
                return false;
            }
            break;
        case Op::Call: {
            if (ins.arg >= interp_->functions_.size())
                return fault(FaultReason::InvalidInstruction);
            if (state_.call_depth >= interp_->limits_.max_call_depth)
                return fault(FaultReason::CallDepth);
            ++state_.call_depth;
            const std::size_t base = frames_.front().program->size() +
                                     interp_->function_site_offsets_[ins.arg];
            frames_.push_back(Frame{&interp_->functions_[ins.arg],
                                    &interp_->function_jumps_[ins.arg], 0, base});
            return true;
        }
        case Op::Invalid:
            return fault(FaultReason::InvalidInstruction);
    }
    ++frame.ip;
    return true;
}

}  // namespace bfgen
