#include "bfgen/fitness.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <unordered_set>

namespace bfgen {

double string_output_fitness(std::span<const std::uint8_t> output,
                             std::span<const std::uint8_t> target) {
    double fit = 0;
    const std::size_t n = std::min(output.size(), target.size());
    for (std::size_t i = 0; i < n; ++i) {
        const int diff = std::abs(static_cast<int>(output[i]) - static_cast<int>(target[i]));
        fit += std::clamp(kByteScore - diff, 0.0, kByteScore);
    }
    return fit;
}

double length_bonus(std::size_t output_len, std::size_t target_len, double bonus) {
    if (target_len == 0) return 0;
    const double t = static_cast<double>(target_len);
    const double off = std::abs(static_cast<double>(output_len) - t);
    return std::clamp(bonus * (t - off) / t, 0.0, bonus);
}

namespace {

std::optional<long> parse_decimal(std::span<const std::uint8_t> bytes) {
    std::string text(bytes.begin(), bytes.end());
    auto first = text.find_first_not_of(" \t\r\n");
    auto last = text.find_last_not_of(" \t\r\n");
    if (first == std::string::npos) return std::nullopt;
    long v = 0;
    const char* b = text.data() + first;
    const char* e = text.data() + last + 1;
    auto [ptr, ec] = std::from_chars(b, e, v);
    if (ec != std::errc{} || ptr != e) return std::nullopt;
    return v;
}

}  // namespace

double numeric_case_fitness(const ExecReport& report, int expected, bool decimal_text) {
    long observed = 0;
    if (decimal_text) {
        auto v = parse_decimal(report.output);
        if (!v) return 0;
        observed = *v;
    } else {
        if (report.output.empty()) return 0;
        observed = report.output.front();
    }
    const double diff = std::abs(static_cast<double>(observed) - expected);
    return std::clamp(kByteScore - diff, 0.0, kByteScore);
}

double sequence_bonus(std::span<const Action> trace, std::span<const Action> expected,
                      double per_action_bonus) {
    std::size_t matched = 0;
    for (Action a : trace) {
        if (matched == expected.size()) break;
        if (a == expected[matched]) ++matched;
    }
    return per_action_bonus * static_cast<double>(matched);
}

DiversityScore diversity_score(const ExecReport& report, const DiversityTerms& terms) {
    DiversityScore s;
    const auto cells = std::min(report.cells_touched, terms.cell_cap);
    s.bonus = terms.cell_bonus * static_cast<double>(cells);
    std::unordered_set<std::size_t> seen;
    std::size_t reused = 0;
    for (auto site : report.print_sites)
        if (!seen.insert(site).second) ++reused;
    s.penalty = terms.reuse_penalty * static_cast<double>(reused);
    return s;
}

// ---------------------------------------------------------------------------

double FitnessSpec::case_max(const TrainingCase& c) const {
    double m = scoring == OutputScoring::Bytes ? kByteScore * static_cast<double>(c.expected.size())
                                               : kByteScore;
    if (length_bonus) m += *length_bonus;
    if (sequence) m += sequence->per_action_bonus * static_cast<double>(sequence->actions.size());
    if (diversity) m += diversity->max_score();
    return m;
}

double FitnessSpec::target_fitness() const {
    if (custom_evaluator) return custom_target.value_or(0.0);
    double t = 0;
    for (const auto& c : training_cases) t += case_max(c);
    return t;
}

void FitnessSpec::validate() const {
    if (name.empty()) throw ConfigError("task name is empty");
    limits.validate();
    if (functions.size() != instruction_set.function_table_size())
        throw ConfigError("task '" + name + "' binds " + std::to_string(functions.size()) +
                          " functions, instruction set expects " +
                          std::to_string(instruction_set.function_table_size()));
    if (custom_evaluator) {
        if (!custom_target || *custom_target <= 0)
            throw ConfigError("task '" + name + "' has a custom evaluator but no positive target");
        return;
    }
    if (training_cases.empty()) throw ConfigError("task '" + name + "' has no training cases");
    auto check_cases = [&](const std::vector<TrainingCase>& cases, const char* what) {
        for (std::size_t i = 0; i < cases.size(); ++i) {
            const auto& c = cases[i];
            if (scoring != OutputScoring::Bytes && c.expected.size() != 1)
                throw ConfigError(std::string(what) + "[" + std::to_string(i) +
                                  "]: numeric scoring needs exactly one expected value");
            if (scoring == OutputScoring::Bytes && c.expected.empty() && !length_bonus)
                throw ConfigError(std::string(what) + "[" + std::to_string(i) +
                                  "]: expected output is empty");
            if (length_bonus && c.expected.empty())
                throw ConfigError(std::string(what) + "[" + std::to_string(i) +
                                  "]: length bonus needs a non-empty expected output");
        }
    };
    check_cases(training_cases, "cases");
    check_cases(holdout_cases, "holdout");
    if (length_bonus && *length_bonus < 0) throw ConfigError("length bonus must be >= 0");
    if (sequence && sequence->per_action_bonus < 0)
        throw ConfigError("sequence bonus must be >= 0");
    if (diversity && (diversity->cell_bonus < 0 || diversity->reuse_penalty < 0))
        throw ConfigError("diversity coefficients must be >= 0");
    if (tick_limit_penalty < 0) throw ConfigError("tick limit penalty must be >= 0");
    if (target_fitness() <= 0) throw ConfigError("task '" + name + "' has a zero target");
}

// ---------------------------------------------------------------------------

Evaluator::Evaluator(FitnessSpec spec)
    : spec_((spec.validate(), std::move(spec))),
      interp_(spec_.instruction_set, spec_.limits, spec_.functions),
      target_(spec_.target_fitness()) {}

double Evaluator::score_case(const TrainingCase& c, const ExecReport& r) const {
    double s = 0;
    switch (spec_.scoring) {
        case OutputScoring::Bytes: s += string_output_fitness(r.output, c.expected); break;
        case OutputScoring::FirstByte: s += numeric_case_fitness(r, c.expected.front()); break;
        case OutputScoring::DecimalText:
            s += numeric_case_fitness(r, c.expected.front(), true);
            break;
    }
    if (spec_.length_bonus) s += length_bonus(r.output.size(), c.expected.size(), *spec_.length_bonus);
    if (spec_.sequence)
        s += sequence_bonus(r.action_trace, spec_.sequence->actions,
                            spec_.sequence->per_action_bonus);
    if (spec_.diversity) s += diversity_score(r, *spec_.diversity).net();
    if (r.termination == Termination::TickLimit) s -= spec_.tick_limit_penalty;
    return std::max(0.0, s);
}

FitnessReport Evaluator::evaluate(const Program& program) const {
    if (spec_.custom_evaluator) {
        FitnessReport r = spec_.custom_evaluator(program, interp_);
        r.score = std::clamp(r.score, 0.0, target_);
        return r;
    }
    FitnessReport rep;
    rep.per_case.reserve(spec_.training_cases.size());
    rep.exec.reserve(spec_.training_cases.size());
    for (const auto& c : spec_.training_cases) {
        ExecReport r = interp_.run(program, c.input);
        const double s = score_case(c, r);
        rep.score += s;
        rep.per_case.push_back(s);
        rep.exec.push_back(std::move(r));
    }
    return rep;
}

FitnessReport Evaluator::evaluate(const Genome& genome) const {
    return evaluate(decode_genome(genome, spec_.instruction_set));
}

bool Evaluator::passes_holdout(const Program& program) const {
    for (const auto& c : spec_.holdout_cases) {
        ExecReport r = interp_.run(program, c.input);
        if (score_case(c, r) < spec_.case_max(c)) return false;
    }
    return true;
}

bool Evaluator::solves(const Program& program) const {
    return evaluate(program).score >= target_ && passes_holdout(program);
}

FitnessReport evaluate(const FitnessSpec& spec, const Genome& genome) {
    return Evaluator(spec).evaluate(genome);
}

}  // namespace bfgen
