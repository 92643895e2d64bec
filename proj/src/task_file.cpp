#include "bfgen/task_file.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

namespace bfgen {

using nlohmann::json;

namespace {

constexpr const char* kFormat = "bfgen-task";

void check_keys(const json& obj, const std::string& where, const std::set<std::string>& allowed) {
    for (const auto& [k, v] : obj.items())
        if (!allowed.count(k))
            throw TaskFileError(where.empty() ? k : where + "." + k, "unknown key");
}

const json& require(const json& obj, const std::string& key, const std::string& where) {
    auto it = obj.find(key);
    if (it == obj.end()) throw TaskFileError(where.empty() ? key : where + "." + key, "missing");
    return *it;
}

double number(const json& v, const std::string& field, double min = 0) {
    if (!v.is_number()) throw TaskFileError(field, "expected a number");
    const double d = v.get<double>();
    if (d < min) throw TaskFileError(field, "must be >= " + std::to_string(min));
    return d;
}

std::uint64_t positive_int(const json& v, const std::string& field) {
    if (!v.is_number_integer() || v.get<long long>() < 1)
        throw TaskFileError(field, "expected a positive integer");
    return v.get<std::uint64_t>();
}

std::vector<std::uint8_t> byte_list(const json& obj, const std::string& key,
                                    const std::string& where) {
    const std::string text_key = key + "_text";
    const bool has_list = obj.contains(key);
    const bool has_text = obj.contains(text_key);
    if (has_list == has_text)
        throw TaskFileError(where + "." + key, "give exactly one of '" + key + "' or '" + text_key + "'");
    if (has_text) {
        const auto& t = obj.at(text_key);
        if (!t.is_string()) throw TaskFileError(where + "." + text_key, "expected a string");
        auto s = t.get<std::string>();
        return {s.begin(), s.end()};
    }
    const auto& arr = obj.at(key);
    if (!arr.is_array()) throw TaskFileError(where + "." + key, "expected an array of bytes");
    std::vector<std::uint8_t> out;
    for (std::size_t i = 0; i < arr.size(); ++i) {
        const auto& b = arr[i];
        if (!b.is_number_integer() || b.get<long long>() < 0 || b.get<long long>() > 255)
            throw TaskFileError(where + "." + key + "[" + std::to_string(i) + "]",
                                "expected an integer 0-255");
        out.push_back(static_cast<std::uint8_t>(b.get<int>()));
    }
    return out;
}

std::vector<TrainingCase> cases(const json& arr, const std::string& where) {
    if (!arr.is_array()) throw TaskFileError(where, "expected an array of cases");
    std::vector<TrainingCase> out;
    for (std::size_t i = 0; i < arr.size(); ++i) {
        const std::string at = where + "[" + std::to_string(i) + "]";
        const auto& c = arr[i];
        if (!c.is_object()) throw TaskFileError(at, "expected an object");
        check_keys(c, at, {"input", "input_text", "expected", "expected_text"});
        TrainingCase tc;
        if (c.contains("input") || c.contains("input_text")) tc.input = byte_list(c, "input", at);
        tc.expected = byte_list(c, "expected", at);
        out.push_back(std::move(tc));
    }
    return out;
}

std::string optional_string(const json& obj, const std::string& key, const std::string& fallback) {
    if (!obj.contains(key)) return fallback;
    if (!obj[key].is_string()) throw TaskFileError(key, "expected a string");
    return obj[key].get<std::string>();
}

Action action(const json& v, const std::string& field) {
    if (v == "read") return Action::ReadInput;
    if (v == "write") return Action::WriteOutput;
    throw TaskFileError(field, "expected \"read\" or \"write\"");
}

json bytes_json(const std::vector<std::uint8_t>& b) {
    bool printable = !b.empty();
    for (auto c : b) printable = printable && c >= 0x20 && c < 0x7F;
    return printable ? json(std::string(b.begin(), b.end())) : json(b);
}

json case_json(const TrainingCase& c) {
    json j;
    auto in = bytes_json(c.input);
    if (!c.input.empty()) j[in.is_string() ? "input_text" : "input"] = in;
    auto ex = bytes_json(c.expected);
    j[ex.is_string() ? "expected_text" : "expected"] = ex;
    return j;
}

}  // namespace

FitnessSpec parse_task(const std::string& json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw TaskFileError("document", std::string("not valid JSON: ") + e.what());
    }
    if (!doc.is_object()) throw TaskFileError("document", "expected a JSON object");
    check_keys(doc, "", {"format", "version", "name", "description", "instruction_set", "functions",
                         "limits", "scoring", "target_text", "cases", "holdout", "bonuses"});

    if (require(doc, "format", "") != kFormat)
        throw TaskFileError("format", std::string("expected \"") + kFormat + "\"");
    const auto& ver = require(doc, "version", "");
    if (!ver.is_number_integer() || ver.get<int>() != kTaskFileVersion)
        throw TaskFileError("version", "unsupported version (this build reads " +
                                           std::to_string(kTaskFileVersion) + ")");

    FitnessSpec s;
    const auto& name = require(doc, "name", "");
    if (!name.is_string() || name.get<std::string>().empty())
        throw TaskFileError("name", "expected a non-empty string");
    s.name = name.get<std::string>();
    if (doc.contains("description")) {
        if (!doc["description"].is_string()) throw TaskFileError("description", "expected a string");
        s.description = doc["description"].get<std::string>();
    }

    std::vector<std::string> fn_src;
    if (doc.contains("functions")) {
        const auto& f = doc["functions"];
        if (!f.is_array()) throw TaskFileError("functions", "expected an array of program strings");
        for (std::size_t i = 0; i < f.size(); ++i) {
            if (!f[i].is_string())
                throw TaskFileError("functions[" + std::to_string(i) + "]", "expected a string");
            fn_src.push_back(f[i].get<std::string>());
        }
    }
    const std::string set_name = optional_string(doc, "instruction_set", "core");
    if (set_name == "core") {
        if (!fn_src.empty()) throw TaskFileError("functions", "function calls need the extended set");
        s.instruction_set = InstructionSet::core();
    } else if (set_name == "extended") {
        if (fn_src.size() > kMaxFunctions) throw TaskFileError("functions", "at most 26 functions");
        s.instruction_set = InstructionSet::extended(fn_src.size());
    } else {
        throw TaskFileError("instruction_set", "expected \"core\" or \"extended\"");
    }
    for (std::size_t i = 0; i < fn_src.size(); ++i) {
        try {
            s.functions.push_back(parse_source(fn_src[i], s.instruction_set, ParseMode::Strict));
        } catch (const ParseError& e) {
            throw TaskFileError("functions[" + std::to_string(i) + "]", e.what());
        }
    }

    if (doc.contains("limits")) {
        const auto& l = doc["limits"];
        if (!l.is_object()) throw TaskFileError("limits", "expected an object");
        check_keys(l, "limits", {"max_ticks", "tape_len", "max_call_depth", "on_input_exhausted"});
        if (l.contains("max_ticks")) s.limits.max_ticks = positive_int(l["max_ticks"], "limits.max_ticks");
        if (l.contains("tape_len")) s.limits.tape_len = positive_int(l["tape_len"], "limits.tape_len");
        if (l.contains("max_call_depth"))
            s.limits.max_call_depth = positive_int(l["max_call_depth"], "limits.max_call_depth");
        if (l.contains("on_input_exhausted")) {
            const auto& v = l["on_input_exhausted"];
            if (v == "terminate") s.limits.on_input_exhausted = InputExhaustion::Terminate;
            else if (v == "read_zero") s.limits.on_input_exhausted = InputExhaustion::ReadZero;
            else throw TaskFileError("limits.on_input_exhausted", "expected \"terminate\" or \"read_zero\"");
        }
    }

    const std::string scoring = optional_string(doc, "scoring", "bytes");
    if (scoring == "bytes") s.scoring = OutputScoring::Bytes;
    else if (scoring == "first_byte") s.scoring = OutputScoring::FirstByte;
    else if (scoring == "decimal_text") s.scoring = OutputScoring::DecimalText;
    else throw TaskFileError("scoring", "expected \"bytes\", \"first_byte\" or \"decimal_text\"");

    const bool has_target = doc.contains("target_text");
    const bool has_cases = doc.contains("cases");
    if (has_target == has_cases)
        throw TaskFileError("cases", "give exactly one of 'target_text' or 'cases'");
    if (has_target) {
        const auto& t = doc["target_text"];
        if (!t.is_string() || t.get<std::string>().empty())
            throw TaskFileError("target_text", "expected a non-empty string");
        auto str = t.get<std::string>();
        s.training_cases = {TrainingCase{{}, {str.begin(), str.end()}}};
    } else {
        s.training_cases = cases(doc["cases"], "cases");
        if (s.training_cases.empty()) throw TaskFileError("cases", "at least one case is required");
    }
    if (doc.contains("holdout")) s.holdout_cases = cases(doc["holdout"], "holdout");

    if (doc.contains("bonuses")) {
        const auto& b = doc["bonuses"];
        if (!b.is_object()) throw TaskFileError("bonuses", "expected an object");
        check_keys(b, "bonuses", {"length", "sequence", "diversity", "tick_limit_penalty"});
        if (b.contains("length")) s.length_bonus = number(b["length"], "bonuses.length");
        if (b.contains("sequence")) {
            const auto& q = b["sequence"];
            if (!q.is_object()) throw TaskFileError("bonuses.sequence", "expected an object");
            check_keys(q, "bonuses.sequence", {"actions", "per_action"});
            const auto& acts = require(q, "actions", "bonuses.sequence");
            if (!acts.is_array()) throw TaskFileError("bonuses.sequence.actions", "expected an array");
            SequenceExpectation seq;
            for (std::size_t i = 0; i < acts.size(); ++i)
                seq.actions.push_back(
                    action(acts[i], "bonuses.sequence.actions[" + std::to_string(i) + "]"));
            seq.per_action_bonus =
                number(require(q, "per_action", "bonuses.sequence"), "bonuses.sequence.per_action");
            s.sequence = std::move(seq);
        }
        if (b.contains("diversity")) {
            const auto& d = b["diversity"];
            if (!d.is_object()) throw TaskFileError("bonuses.diversity", "expected an object");
            check_keys(d, "bonuses.diversity", {"cell_bonus", "cell_cap", "reuse_penalty"});
            DiversityTerms t;
            if (d.contains("cell_bonus")) t.cell_bonus = number(d["cell_bonus"], "bonuses.diversity.cell_bonus");
            if (d.contains("cell_cap")) t.cell_cap = positive_int(d["cell_cap"], "bonuses.diversity.cell_cap");
            if (d.contains("reuse_penalty"))
                t.reuse_penalty = number(d["reuse_penalty"], "bonuses.diversity.reuse_penalty");
            s.diversity = t;
        }
        if (b.contains("tick_limit_penalty"))
            s.tick_limit_penalty = number(b["tick_limit_penalty"], "bonuses.tick_limit_penalty");
    }

    try {
        s.validate();
    } catch (const ConfigError& e) {
        throw TaskFileError("document", e.what());
    }
    return s;
}

FitnessSpec load_task_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read task file " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_task(ss.str());
}

std::string dump_task(const FitnessSpec& spec) {
    if (spec.custom_evaluator)
        throw std::invalid_argument("task '" + spec.name + "' uses a custom evaluator");
    json j;
    j["format"] = kFormat;
    j["version"] = kTaskFileVersion;
    j["name"] = spec.name;
    if (!spec.description.empty()) j["description"] = spec.description;
    j["instruction_set"] = spec.instruction_set.name();
    if (!spec.functions.empty()) {
        j["functions"] = json::array();
        for (const auto& f : spec.functions) j["functions"].push_back(f.source());
    }
    j["limits"] = {{"max_ticks", spec.limits.max_ticks},
                   {"tape_len", spec.limits.tape_len},
                   {"max_call_depth", spec.limits.max_call_depth},
                   {"on_input_exhausted", spec.limits.on_input_exhausted == InputExhaustion::ReadZero
                                              ? "read_zero"
                                              : "terminate"}};
    j["scoring"] = spec.scoring == OutputScoring::Bytes       ? "bytes"
                   : spec.scoring == OutputScoring::FirstByte ? "first_byte"
                                                              : "decimal_text";
    j["cases"] = json::array();
    for (const auto& c : spec.training_cases) j["cases"].push_back(case_json(c));
    if (!spec.holdout_cases.empty()) {
        j["holdout"] = json::array();
        for (const auto& c : spec.holdout_cases) j["holdout"].push_back(case_json(c));
    }
    json b = json::object();
    if (spec.length_bonus) b["length"] = *spec.length_bonus;
    if (spec.sequence) {
        json acts = json::array();
        for (auto a : spec.sequence->actions) acts.push_back(to_string(a));
        b["sequence"] = {{"actions", acts}, {"per_action", spec.sequence->per_action_bonus}};
    }
    if (spec.diversity)
        b["diversity"] = {{"cell_bonus", spec.diversity->cell_bonus},
                          {"cell_cap", spec.diversity->cell_cap},
                          {"reuse_penalty", spec.diversity->reuse_penalty}};
    if (spec.tick_limit_penalty > 0) b["tick_limit_penalty"] = spec.tick_limit_penalty;
    if (!b.empty()) j["bonuses"] = b;
    return j.dump(2);
}

}  // namespace bfgen
