#include <filesystem>
#include <fstream>

#include "bfgen/task_file.hpp"
#include "doctest.h"

using namespace bfgen;

namespace {

std::string field_of(const std::string& doc) {
    try {
        parse_task(doc);
    } catch (const TaskFileError& e) {
        return e.field();
    }
    return "<accepted>";
}

void check_same(const FitnessSpec& a, const FitnessSpec& b) {
    CHECK(a.name == b.name);
    CHECK(a.description == b.description);
    CHECK(a.instruction_set.name() == b.instruction_set.name());
    CHECK(a.instruction_set.size() == b.instruction_set.size());
    CHECK(a.functions == b.functions);
    CHECK(a.limits == b.limits);
    CHECK(a.scoring == b.scoring);
    CHECK(a.training_cases == b.training_cases);
    CHECK(a.holdout_cases == b.holdout_cases);
    CHECK(a.length_bonus == b.length_bonus);
    CHECK(a.sequence == b.sequence);
    CHECK(a.diversity == b.diversity);
    CHECK(a.tick_limit_penalty == b.tick_limit_penalty);
    CHECK(a.target_fitness() == b.target_fitness());
}

}  // namespace

TEST_SUITE("task_file") {

TEST_CASE("minimal text task") {
    auto s = parse_task(R"({"format":"bfgen-task","version":1,"name":"yo","target_text":"yo"})");
    CHECK(s.name == "yo");
    CHECK(s.target_fitness() == 512.0);
    CHECK(s.instruction_set.name() == "core");
    CHECK(s.limits == Limits{});
}

TEST_CASE("full task document") {
    auto s = parse_task(R"({
      "format": "bfgen-task", "version": 1, "name": "sum", "description": "add",
      "instruction_set": "extended", "functions": ["[-<+>]"],
      "limits": {"max_ticks": 900, "tape_len": 32, "max_call_depth": 4, "on_input_exhausted": "read_zero"},
      "scoring": "first_byte",
      "cases": [{"input": [1, 2], "expected": [3]}, {"input_text": "AB", "expected": [131]}],
      "holdout": [{"input": [5, 5], "expected": [10]}],
      "bonuses": {"length": 2, "sequence": {"actions": ["read", "read", "write"], "per_action": 1},
                  "diversity": {"cell_bonus": 1, "cell_cap": 3, "reuse_penalty": 2},
                  "tick_limit_penalty": 5}
    })");
    CHECK(s.functions.size() == 1);
    CHECK(s.instruction_set.function_table_size() == 1);
    CHECK(s.limits.max_ticks == 900);
    CHECK(s.limits.on_input_exhausted == InputExhaustion::ReadZero);
    CHECK(s.training_cases[1].input == std::vector<std::uint8_t>{'A', 'B'});
    CHECK(s.holdout_cases.size() == 1);
    CHECK(s.target_fitness() == 2 * (256.0 + 2 + 3 + 3));
    CHECK(s.tick_limit_penalty == 5);
}

TEST_CASE("errors name the offending field") {
    const std::string head = R"({"format":"bfgen-task","version":1,"name":"t",)";
    CHECK(field_of("{") == "document");
    CHECK(field_of("[]") == "document");
    CHECK(field_of(R"({"version":1,"name":"t","target_text":"a"})") == "format");
    CHECK(field_of(R"({"format":"bfgen-task","version":9,"name":"t","target_text":"a"})") == "version");
    CHECK(field_of(R"({"format":"bfgen-task","version":1,"target_text":"a"})") == "name");
    CHECK(field_of(head + R"("target_text":"a","colour":1})") == "colour");
    CHECK(field_of(head + R"("target_text":""})") == "target_text");
    CHECK(field_of(head + R"("target_text":"a","cases":[]})") == "cases");
    CHECK(field_of(head + R"("cases":[]})") == "cases");
    CHECK(field_of(head + R"("cases":[{"expected":[1, 300]}]})") == "cases[0].expected[1]");
    CHECK(field_of(head + R"("cases":[{"input":[1]},{"expected":"x"}]})") == "cases[0].expected");
    CHECK(field_of(head + R"("cases":[{"expected_text":"a","extra":1}]})") == "cases[0].extra");
    CHECK(field_of(head + R"("target_text":"a","scoring":"fuzzy"})") == "scoring");
    CHECK(field_of(head + R"("target_text":"a","instruction_set":"huge"})") == "instruction_set");
    CHECK(field_of(head + R"("target_text":"a","functions":["+"]})") == "functions");
    CHECK(field_of(head + R"("target_text":"a","instruction_set":"extended","functions":["+?"]})") ==
          "functions[0]");
    CHECK(field_of(head + R"("target_text":"a","limits":{"max_ticks":0}})") == "limits.max_ticks");
    CHECK(field_of(head + R"("target_text":"a","limits":{"on_input_exhausted":"maybe"}})") ==
          "limits.on_input_exhausted");
    CHECK(field_of(head + R"("target_text":"a","bonuses":{"length":-1}})") == "bonuses.length");
    CHECK(field_of(head + R"("target_text":"a","bonuses":{"sequence":{"actions":["jump"],"per_action":1}}})") ==
          "bonuses.sequence.actions[0]");
    CHECK(field_of(head + R"("target_text":"a","bonuses":{"diversity":{"cell_cap":0}}})") ==
          "bonuses.diversity.cell_cap");
    CHECK(field_of(head + R"("scoring":"first_byte","cases":[{"expected":[1,2]}]})") == "document");
    CHECK(field_of(head + R"("target_text":"a","description":3})") == "description");
}

TEST_CASE("every catalog task round-trips through a document") {
    for (const auto& t : task_catalog()) {
        CAPTURE(t.name);
        check_same(parse_task(dump_task(t)), t);
    }
}

TEST_CASE("load from disk") {
    const auto path = std::filesystem::temp_directory_path() / "bfgen_task_test.json";
    {
        std::ofstream out(path);
        out << dump_task(find_task("XOR"));
    }
    check_same(load_task_file(path), find_task("XOR"));
    std::filesystem::remove(path);
    CHECK_THROWS(load_task_file(path));
}

TEST_CASE("custom evaluators cannot be written") {
    FitnessSpec s;
    s.name = "c";
    s.custom_target = 1;
    s.custom_evaluator = [](const Program&, const Interpreter&) { return FitnessReport{}; };
    CHECK_THROWS_AS(dump_task(s), std::invalid_argument);
}

}
