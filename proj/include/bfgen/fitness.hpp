#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "bfgen/interp.hpp"
#include "bfgen/lang.hpp"

namespace bfgen {

inline constexpr double kByteScore = 256.0;

/// Sum over target positions that the output reaches of 256 - |out[i] - target[i]|.
double string_output_fitness(std::span<const std::uint8_t> output,
                             std::span<const std::uint8_t> target);

/// bonus * (target_len - |output_len - target_len|) / target_len, clamped to [0, bonus].
double length_bonus(std::size_t output_len, std::size_t target_len, double bonus = 10.0);

/// 256 - |observed - expected| on the first output byte; 0 with no output.
/// With `decimal_text` the whole output is parsed as a decimal integer instead.
double numeric_case_fitness(const ExecReport& report, int expected, bool decimal_text = false);

/// Greedy in-order match of `expected` against `trace`; per_action_bonus per match.
double sequence_bonus(std::span<const Action> trace, std::span<const Action> expected,
                      double per_action_bonus);

struct DiversityTerms {
    double cell_bonus = 4.0;
    std::size_t cell_cap = 8;  // cells beyond this earn nothing, keeps the maximum finite
    double reuse_penalty = 8.0;

    double max_score() const { return cell_bonus * static_cast<double>(cell_cap); }
    friend bool operator==(const DiversityTerms&, const DiversityTerms&) = default;
};

struct DiversityScore {
    double bonus = 0;
    double penalty = 0;
    double net() const { return bonus > penalty ? bonus - penalty : 0.0; }
};

DiversityScore diversity_score(const ExecReport& report, const DiversityTerms& terms);

struct TrainingCase {
    std::vector<std::uint8_t> input;
    std::vector<std::uint8_t> expected;

    friend bool operator==(const TrainingCase&, const TrainingCase&) = default;
};

enum class OutputScoring {
    Bytes,        // string_output_fitness against expected
    FirstByte,    // numeric_case_fitness on expected[0]
    DecimalText,  // numeric_case_fitness, output parsed as decimal text
};

struct SequenceExpectation {
    std::vector<Action> actions;
    double per_action_bonus = 0;

    friend bool operator==(const SequenceExpectation&, const SequenceExpectation&) = default;
};

struct FitnessReport {
    double score = 0;
    std::vector<double> per_case;
    std::vector<ExecReport> exec;
};

/// Task definition. The built-in evaluator sums per training case: the output
/// term, then any enabled length/sequence/diversity bonuses, minus the tick
/// limit penalty; each case is clamped at 0. target_fitness() is the exact
/// maximum of that sum.
struct FitnessSpec {
    using CustomEvaluator = std::function<FitnessReport(const Program&, const Interpreter&)>;

    std::string name;
    std::string description;
    InstructionSet instruction_set = InstructionSet::core();
    std::vector<Program> functions;
    Limits limits;
    OutputScoring scoring = OutputScoring::Bytes;
    std::vector<TrainingCase> training_cases;
    /// Re-checked on solutions only; a task counts as solved when these are perfect too.
    std::vector<TrainingCase> holdout_cases;
    std::optional<double> length_bonus;
    std::optional<SequenceExpectation> sequence;
    std::optional<DiversityTerms> diversity;
    double tick_limit_penalty = 0;

    /// Replaces the built-in evaluator. custom_target must then be set.
    CustomEvaluator custom_evaluator;
    std::optional<double> custom_target;

    double target_fitness() const;
    double case_max(const TrainingCase& c) const;
    /// Throws ConfigError for inconsistent definitions.
    void validate() const;
};

/// Binds a spec to an interpreter. Evaluation is const and thread-safe.
class Evaluator {
public:
    explicit Evaluator(FitnessSpec spec);

    FitnessReport evaluate(const Program& program) const;
    FitnessReport evaluate(const Genome& genome) const;
    /// True when every holdout case scores its maximum (vacuously true without holdouts).
    bool passes_holdout(const Program& program) const;
    bool solves(const Program& program) const;

    const FitnessSpec& spec() const { return spec_; }
    const Interpreter& interpreter() const { return interp_; }
    double target() const { return target_; }

private:
    double score_case(const TrainingCase& c, const ExecReport& r) const;

    FitnessSpec spec_;
    Interpreter interp_;
    double target_;
};

FitnessReport evaluate(const FitnessSpec& spec, const Genome& genome);

// ---------------------------------------------------------------------------
// Built-in tasks

std::vector<FitnessSpec> task_catalog();
/// Throws std::out_of_range listing available names when `name` is unknown.
FitnessSpec find_task(const std::string& name);
std::vector<std::string> task_names();

/// Fixed arithmetic training pairs (5) and held-out pairs (20); every a+b < 256.
std::vector<std::pair<int, int>> addition_training_pairs();
std::vector<std::pair<int, int>> addition_holdout_pairs();

}  // namespace bfgen
