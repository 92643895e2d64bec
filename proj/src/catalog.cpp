#include <algorithm>
#include <stdexcept>

#include "bfgen/fitness.hpp"

namespace bfgen {

namespace {

std::vector<std::uint8_t> bytes(std::string_view s) { return {s.begin(), s.end()}; }

FitnessSpec text_task(std::string name, std::string_view target, std::string description) {
    FitnessSpec s;
    s.name = std::move(name);
    s.description = std::move(description);
    s.training_cases = {TrainingCase{{}, bytes(target)}};
    return s;
}

using PairFn = int (*)(int, int);

std::vector<TrainingCase> pair_cases(const std::vector<std::pair<int, int>>& pairs, PairFn f) {
    std::vector<TrainingCase> out;
    for (auto [a, b] : pairs)
        out.push_back({{static_cast<std::uint8_t>(a), static_cast<std::uint8_t>(b)},
                       {static_cast<std::uint8_t>(f(a, b))}});
    return out;
}

FitnessSpec pair_task(std::string name, PairFn f, const std::vector<std::pair<int, int>>& train,
                      const std::vector<std::pair<int, int>>& holdout, std::string description) {
    FitnessSpec s;
    s.name = std::move(name);
    s.description = std::move(description);
    s.scoring = OutputScoring::FirstByte;
    s.training_cases = pair_cases(train, f);
    s.holdout_cases = pair_cases(holdout, f);
    return s;
}

// Ordered so that a >= b, keeping differences non-negative.
std::vector<std::pair<int, int>> ordered(std::vector<std::pair<int, int>> v) {
    for (auto& [a, b] : v)
        if (a < b) std::swap(a, b);
    return v;
}

std::vector<std::uint8_t> fibonacci_continuation(int a, int b) {
    std::vector<std::uint8_t> out;
    for (int next = a + b; next <= 255; next = a + b) {
        out.push_back(static_cast<std::uint8_t>(next));
        a = b;
        b = next;
    }
    return out;
}

}  // namespace

std::vector<std::pair<int, int>> addition_training_pairs() {
    return {{3, 5}, {17, 42}, {64, 9}, {88, 100}, {1, 37}};
}

std::vector<std::pair<int, int>> addition_holdout_pairs() {
    return {{2, 2},   {11, 90}, {45, 45}, {99, 1},  {100, 100}, {7, 63}, {23, 58},
            {81, 14}, {50, 77}, {12, 12}, {36, 91}, {5, 96},    {70, 30}, {28, 61},
            {93, 47}, {1, 1},   {60, 19}, {44, 85}, {18, 72},   {99, 99}};
}

std::vector<FitnessSpec> task_catalog() {
    std::vector<FitnessSpec> tasks;

    tasks.push_back(text_task("hi", "hi", "print \"hi\"; output after the target is ignored"));
    tasks.push_back(text_task("hello", "hello", "print \"hello\""));
    tasks.push_back(text_task("hello world", "hello world", "print \"hello world\""));
    {
        auto s = text_task("I love all humans", "I love all humans",
                           "print exactly \"I love all humans\" (length bonus 10)");
        s.length_bonus = 10.0;
        tasks.push_back(std::move(s));
    }
    {
        FitnessSpec s;
        s.name = "reverse string";
        s.description = "read bytes until a 0 byte, print them reversed";
        // The reference solution reads past the terminator, so exhausted input reads as 0.
        s.limits.on_input_exhausted = InputExhaustion::ReadZero;
        for (std::string_view w : {"hi", "dog", "tape", "bytes", "genome"}) {
            TrainingCase c;
            c.input = bytes(w);
            c.input.push_back(0);
            c.expected.assign(w.rbegin(), w.rend());
            s.training_cases.push_back(std::move(c));
        }
        for (std::string_view w : {"ok", "abc", "zebra", "crossover"}) {
            TrainingCase c;
            c.input = bytes(w);
            c.input.push_back(0);
            c.expected.assign(w.rbegin(), w.rend());
            s.holdout_cases.push_back(std::move(c));
        }
        tasks.push_back(std::move(s));
    }
    tasks.push_back(pair_task("addition", [](int a, int b) { return a + b; },
                              addition_training_pairs(), addition_holdout_pairs(),
                              "read two bytes a, b; print the byte a+b"));
    tasks.push_back(pair_task("subtraction", [](int a, int b) { return a - b; },
                              ordered(addition_training_pairs()),
                              ordered(addition_holdout_pairs()),
                              "read two bytes a >= b; print the byte a-b"));
    {
        FitnessSpec s;
        s.name = "multiply x2";
        s.description = "read a byte a <= 127; print the byte 2a";
        s.scoring = OutputScoring::FirstByte;
        for (int a : {3, 20, 51, 77, 100})
            s.training_cases.push_back({{static_cast<std::uint8_t>(a)}, {static_cast<std::uint8_t>(2 * a)}});
        for (int a : {1, 9, 33, 64, 90, 127})
            s.holdout_cases.push_back({{static_cast<std::uint8_t>(a)}, {static_cast<std::uint8_t>(2 * a)}});
        tasks.push_back(std::move(s));
    }
    {
        FitnessSpec s;
        s.name = "XOR";
        s.description = "read two bits a, b (bytes 0/1); print the byte a xor b";
        s.scoring = OutputScoring::FirstByte;
        for (int a = 0; a < 2; ++a)
            for (int b = 0; b < 2; ++b)
                s.training_cases.push_back({{static_cast<std::uint8_t>(a), static_cast<std::uint8_t>(b)},
                                            {static_cast<std::uint8_t>(a ^ b)}});
        tasks.push_back(std::move(s));
    }
    {
        FitnessSpec s;
        s.name = "if-then menu";
        s.description = "read '1', '2' or '3'; print \"hi\", \"z\" or \"bye\" exactly";
        s.length_bonus = 10.0;
        s.diversity = DiversityTerms{4.0, 4, 8.0};
        s.training_cases = {{bytes("1"), bytes("hi")}, {bytes("2"), bytes("z")},
                            {bytes("3"), bytes("bye")}};
        tasks.push_back(std::move(s));
    }
    {
        FitnessSpec s;
        s.name = "fibonacci";
        s.description =
            "extended set; read two consecutive Fibonacci numbers, print every following term up to 255";
        s.instruction_set = InstructionSet::extended(1);
        s.functions = {Program({kOpen, kDec, kLeft, kInc, kRight, kClose})};  // a: [-<+>]
        s.limits.max_ticks = 50000;
        s.length_bonus = 10.0;
        s.sequence = SequenceExpectation{{Action::ReadInput, Action::ReadInput, Action::WriteOutput}, 5.0};
        for (auto [a, b] : std::vector<std::pair<int, int>>{{0, 1}, {1, 1}, {1, 2}, {2, 3}})
            s.training_cases.push_back({{static_cast<std::uint8_t>(a), static_cast<std::uint8_t>(b)},
                                        fibonacci_continuation(a, b)});
        for (auto [a, b] : std::vector<std::pair<int, int>>{{3, 5}, {5, 8}, {13, 21}})
            s.holdout_cases.push_back({{static_cast<std::uint8_t>(a), static_cast<std::uint8_t>(b)},
                                       fibonacci_continuation(a, b)});
        tasks.push_back(std::move(s));
    }
    return tasks;
}

std::vector<std::string> task_names() {
    std::vector<std::string> names;
    for (const auto& t : task_catalog()) names.push_back(t.name);
    return names;
}

FitnessSpec find_task(const std::string& name) {
    auto tasks = task_catalog();
    for (auto& t : tasks)
        if (t.name == name) return std::move(t);
    std::string msg = "unknown task '" + name + "'; available:";
    for (const auto& t : tasks) msg += " '" + t.name + "'";
    throw std::out_of_range(msg);
}

}  // namespace bfgen
