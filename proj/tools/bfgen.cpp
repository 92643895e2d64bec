// bfgen: synthesize tape-language programs, run them, resume long runs.

#include <atomic>
#include <csignal>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <iterator>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "bfgen/fitness.hpp"
#include "bfgen/ga.hpp"
#include "bfgen/interp.hpp"
#include "bfgen/lang.hpp"
#include "bfgen/task_file.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace bfgen;

namespace {

enum Exit { kOk = 0, kBudget = 1, kUsage = 2, kIo = 3 };

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::atomic<bool> g_interrupted{false};

extern "C" void on_sigint(int) { g_interrupted = true; }

std::string read_file(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw IoError("cannot read " + p.string());
    return {std::istreambuf_iterator<char>(in), {}};
}

void write_file(const fs::path& p, const std::string& text) {
    const fs::path tmp = p.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot write " + tmp.string());
        out << text;
        if (!out.flush()) throw IoError("write failed for " + tmp.string());
    }
    std::error_code ec;
    fs::rename(tmp, p, ec);
    if (ec) throw IoError("cannot replace " + p.string() + ": " + ec.message());
}

std::string fmt(double v, int prec = 3) {
    std::ostringstream os;
    os << std::fixed << std::setprecision(prec) << v;
    return os.str();
}

std::string number(double v) {
    std::ostringstream os;
    os << v;
    return os.str();
}

// ---------------------------------------------------------------------------
// Program files: plain source, optional `;` header lines.
//   ; extended
//   ; function <source>      (binds a, b, ... in order)
//   ; max-ticks <n>
//   ; on-eof zero

struct ProgramFile {
    std::string source;
    bool extended = false;
    std::vector<std::string> functions;
    std::optional<std::uint64_t> max_ticks;
    bool eof_zero = false;
};

ProgramFile parse_program_file(const std::string& text) {
    ProgramFile pf;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        const auto first = line.find_first_not_of(" \t\r");
        if (first != std::string::npos && line[first] == ';') {
            std::istringstream words(line.substr(first + 1));
            std::string key;
            words >> key;
            if (key == "extended") pf.extended = true;
            else if (key == "function") {
                std::string body;
                words >> body;
                pf.functions.push_back(body);
                pf.extended = true;
            } else if (key == "max-ticks") {
                std::uint64_t n = 0;
                if (words >> n) pf.max_ticks = n;
            } else if (key == "on-eof") {
                std::string v;
                words >> v;
                pf.eof_zero = v == "zero";
            }
            continue;
        }
        pf.source += line;
        pf.source += '\n';
    }
    return pf;
}

std::string program_file_text(const FitnessSpec& spec, const Program& solution) {
    std::string out;
    if (spec.instruction_set.is_extended()) {
        out += "; extended\n";
        for (const auto& f : spec.functions) out += "; function " + f.source() + "\n";
    }
    if (spec.limits.max_ticks != Limits{}.max_ticks)
        out += "; max-ticks " + std::to_string(spec.limits.max_ticks) + "\n";
    if (spec.limits.on_input_exhausted == InputExhaustion::ReadZero) out += "; on-eof zero\n";
    return out + solution.source() + "\n";
}

// ---------------------------------------------------------------------------
// Run artifacts

struct Artifacts {
    fs::path solution, checkpoint, log;

    static Artifacts under(const fs::path& out) {
        return {out, fs::path(out.string() + ".checkpoint.json"), fs::path(out.string() + ".log.tsv")};
    }
    json to_json() const {
        return {{"solution", solution.string()}, {"checkpoint", checkpoint.string()}, {"log", log.string()}};
    }
    static Artifacts from_json(const json& j) {
        return {j.at("solution").get<std::string>(), j.at("checkpoint").get<std::string>(),
                j.at("log").get<std::string>()};
    }
};

constexpr const char* kLogHeader =
    "generation\tbest_fitness\tmean_fitness\tbest_program_len_executed\twall_clock_s\n";

class RunLog {
public:
    RunLog(const fs::path& p, bool append) {
        out_.open(p, append ? std::ios::app : std::ios::trunc);
        if (!out_) throw IoError("cannot open run log " + p.string());
        if (!append) out_ << kLogHeader << std::flush;
    }
    void record(const GenerationStats& s) {
        out_ << s.generation << '\t' << number(s.best_fitness) << '\t' << number(s.mean_fitness) << '\t'
             << s.best_ticks << '\t' << fmt(s.wall_clock_s) << '\n';
        out_.flush();
    }

private:
    std::ofstream out_;
};

/// Fails early (before any evolution) when an artifact path cannot be written.
void probe_writable(const fs::path& p) {
    const bool existed = fs::exists(p);
    std::ofstream probe(p, std::ios::app);
    if (!probe) throw IoError("output path not writable: " + p.string());
    probe.close();
    if (!existed) fs::remove(p);
}

// ---------------------------------------------------------------------------

struct GaFlags {
    std::optional<std::uint64_t> seed, max_generations, checkpoint_every, max_ticks;
    std::optional<std::size_t> pop_size, genome_len;
    std::optional<unsigned> threads;
    bool quiet = false;
};

void add_ga_flags(CLI::App* cmd, GaFlags& f) {
    cmd->add_option("--seed", f.seed, "RNG seed");
    cmd->add_option("--pop-size", f.pop_size, "Population size")->check(CLI::PositiveNumber);
    cmd->add_option("--genome-len", f.genome_len, "Genes per genome")->check(CLI::PositiveNumber);
    cmd->add_option("--max-generations", f.max_generations, "Generation budget")->check(CLI::PositiveNumber);
    cmd->add_option("--threads", f.threads, "Evaluation threads (0 = all cores)");
    cmd->add_option("--checkpoint-every", f.checkpoint_every, "Checkpoint period in generations");
    cmd->add_flag("-q,--quiet", f.quiet, "No progress lines on stderr");
}

EvolveHooks make_hooks(RunLog& log, const Artifacts& art, bool quiet, const std::string& task_ref) {
    EvolveHooks hooks;
    hooks.task_ref = task_ref;
    hooks.checkpoint_extra = json{{"artifacts", art.to_json()}}.dump();
    hooks.on_generation = [&log, quiet](const GenerationStats& s, const Population&) {
        log.record(s);
        if (!quiet && s.generation % 10000 == 0)
            std::cerr << "generation " << s.generation << "  best " << number(s.best_fitness) << "  mean "
                      << fmt(s.mean_fitness, 1) << "  " << fmt(s.wall_clock_s, 1) << " s\n";
    };
    hooks.checkpoint_sink = [path = art.checkpoint](const Checkpoint& c) { write_file(path, c.to_text()); };
    hooks.on_warning = [](const std::string& w) { std::cerr << "warning: " << w << "\n"; };
    hooks.should_stop = [] { return g_interrupted.load(); };
    return hooks;
}

int finish(const FitnessSpec& spec, const EvolveResult& r, const Artifacts& art) {
    const Program best = decode_genome(r.best.genome, spec.instruction_set);
    if (r.reason == HaltReason::Success) {
        write_file(art.solution, program_file_text(spec, best));
        std::cout << best.source() << "\n"
                  << "Name: " << spec.name << "\n"
                  << "Duration: " << fmt(r.elapsed_s, 1) << " s\n"
                  << "Generations: " << r.generations << "\n";
        return kOk;
    }
    std::cerr << "stopped: " << to_string(r.reason) << " after " << r.generations << " generations, best fitness "
              << number(r.best.fitness) << " of " << number(spec.target_fitness()) << "\n"
              << "best so far: " << best.source() << "\n"
              << "checkpoint: " << art.checkpoint.string() << "\n";
    return kBudget;
}

// ---------------------------------------------------------------------------

int cmd_synthesize(const std::string& task_name, const std::string& task_file, const fs::path& out,
                   bool extended, const GaFlags& f) {
    if (task_name.empty() == task_file.empty())
        throw UsageError("give exactly one of a task name or --task-file");
    FitnessSpec spec;
    if (!task_file.empty()) {
        if (!fs::exists(task_file)) throw IoError("task file not found: " + task_file);
        spec = load_task_file(task_file);
    } else {
        try {
            spec = find_task(task_name);
        } catch (const std::out_of_range& e) {
            throw UsageError(e.what());
        }
    }
    if (f.max_ticks) spec.limits.max_ticks = *f.max_ticks;
    if (extended && !spec.instruction_set.is_extended())
        spec.instruction_set = InstructionSet::extended(spec.functions.size());
    spec.validate();

    GaConfig cfg;
    if (f.seed) cfg.rng_seed = *f.seed;
    if (f.pop_size) cfg.pop_size = *f.pop_size;
    if (f.genome_len) cfg.genome_len = *f.genome_len;
    if (f.max_generations) cfg.max_generations = *f.max_generations;
    if (f.threads) cfg.threads = *f.threads;
    if (f.checkpoint_every) cfg.checkpoint_every = *f.checkpoint_every;
    cfg.validate();

    const Artifacts art = Artifacts::under(out.empty() ? fs::path("solution.bf") : out);
    for (const auto& p : {art.solution, art.checkpoint, art.log}) probe_writable(p);
    RunLog log(art.log, false);

    const auto hooks = make_hooks(log, art, f.quiet, dump_task(spec));
    const auto result = evolve(spec, cfg, hooks);
    return finish(spec, result, art);
}

int cmd_resume(const fs::path& ckpt_path, const GaFlags& f) {
    const Checkpoint ckpt = Checkpoint::from_text(read_file(ckpt_path));
    FitnessSpec spec;
    try {
        spec = parse_task(ckpt.task);
    } catch (const TaskFileError& e) {
        throw CheckpointError(std::string("checkpoint task is damaged: ") + e.what());
    }
    Artifacts art;
    try {
        art = Artifacts::from_json(json::parse(ckpt.extra).at("artifacts"));
    } catch (const json::exception&) {
        art = Artifacts::under(fs::path(ckpt_path).replace_extension("").replace_extension(""));
    }
    art.checkpoint = ckpt_path;

    GaConfig cfg = ckpt.config;
    auto same = [](const char* flag, auto given, auto stored) {
        if (given && *given != stored)
            throw ConfigError(std::string(flag) + " conflicts with the checkpoint (" + std::to_string(stored) + ")");
    };
    same("--genome-len", f.genome_len, cfg.genome_len);
    same("--pop-size", f.pop_size, cfg.pop_size);
    same("--seed", f.seed, cfg.rng_seed);
    if (f.max_ticks && *f.max_ticks != spec.limits.max_ticks)
        throw ConfigError("--max-ticks conflicts with the checkpoint (" + std::to_string(spec.limits.max_ticks) + ")");
    if (f.max_generations) cfg.max_generations = *f.max_generations;
    if (f.threads) cfg.threads = *f.threads;
    if (f.checkpoint_every) cfg.checkpoint_every = *f.checkpoint_every;

    for (const auto& p : {art.solution, art.checkpoint, art.log}) probe_writable(p);
    RunLog log(art.log, true);
    const auto hooks = make_hooks(log, art, f.quiet, ckpt.task);
    const auto result = resume(spec, ckpt, cfg, hooks);
    return finish(spec, result, art);
}

int cmd_run(const fs::path& file, bool extended, std::optional<std::uint64_t> max_ticks, bool strict,
            bool eof_zero) {
    const ProgramFile pf = parse_program_file(read_file(file));
    const bool ext = extended || pf.extended;
    const InstructionSet set = ext ? InstructionSet::extended(pf.functions.size()) : InstructionSet::core();
    const ParseMode mode = strict ? ParseMode::Strict : ParseMode::Lenient;
    std::vector<Program> functions;
    for (const auto& f : pf.functions) functions.push_back(parse_source(f, set, mode));
    const Program program = parse_source(pf.source, set, mode);

    Limits limits;
    if (pf.max_ticks) limits.max_ticks = *pf.max_ticks;
    if (max_ticks) limits.max_ticks = *max_ticks;
    if (pf.eof_zero || eof_zero) limits.on_input_exhausted = InputExhaustion::ReadZero;

    std::string in{std::istreambuf_iterator<char>(std::cin), {}};
    const std::vector<std::uint8_t> input(in.begin(), in.end());
    const ExecReport r = Interpreter(set, limits, functions).run(program, input);

    std::cout.write(reinterpret_cast<const char*>(r.output.data()), static_cast<std::streamsize>(r.output.size()));
    std::cout.flush();
    std::cerr << "termination: " << to_string(r.termination);
    if (r.fault) std::cerr << " (" << to_string(r.fault->reason) << " at " << r.fault->position << ")";
    std::cerr << "\nticks: " << r.ticks_used << "\n";
    return r.ok() ? kOk : kBudget;
}

int cmd_tasks(bool as_json) {
    json rows = json::array();
    for (const auto& t : task_catalog()) {
        rows.push_back({{"name", t.name},
                        {"instruction_set", t.instruction_set.name()},
                        {"target_fitness", t.target_fitness()},
                        {"training_cases", t.training_cases.size()},
                        {"holdout_cases", t.holdout_cases.size()},
                        {"description", t.description}});
    }
    if (as_json) {
        std::cout << rows.dump(2) << "\n";
        return kOk;
    }
    std::cout << std::left << std::setw(20) << "name" << std::setw(10) << "set" << std::setw(10) << "target"
              << "description\n";
    for (const auto& r : rows)
        std::cout << std::setw(20) << r["name"].get<std::string>() << std::setw(10)
                  << r["instruction_set"].get<std::string>() << std::setw(10)
                  << number(r["target_fitness"].get<double>()) << r["description"].get<std::string>() << "\n";
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Evolve tape-language programs with a genetic algorithm"};
    app.require_subcommand(1);

    GaFlags ga;
    std::string task_name, task_file, out;
    bool extended = false;
    auto* syn = app.add_subcommand("synthesize", "Evolve a program for a task");
    syn->add_option("task", task_name, "Built-in task name (see `tasks`)");
    syn->add_option("--task-file", task_file, "JSON task definition");
    syn->add_option("--out", out, "Solution path; checkpoint and log are written next to it");
    syn->add_option("--max-ticks", ga.max_ticks, "Instruction budget per run")->check(CLI::PositiveNumber);
    syn->add_flag("--extended", extended, "Evolve over the extended instruction set");
    add_ga_flags(syn, ga);

    std::string program_file;
    std::optional<std::uint64_t> run_ticks;
    bool run_ext = false, strict = false, eof_zero = false;
    auto* run = app.add_subcommand("run", "Execute a program with stdin as input");
    run->add_option("program", program_file, "Program file")->required();
    run->add_flag("--extended", run_ext, "Accept extended instructions");
    run->add_option("--max-ticks", run_ticks, "Instruction budget")->check(CLI::PositiveNumber);
    run->add_flag("--strict", strict, "Reject characters outside the instruction set");
    run->add_flag("--read-zero", eof_zero, "Read 0 once input runs out instead of stopping");

    std::string ckpt;
    GaFlags rga;
    auto* res = app.add_subcommand("resume", "Continue a run from its checkpoint");
    res->add_option("checkpoint", ckpt, "Checkpoint file")->required();
    res->add_option("--max-ticks", rga.max_ticks, "Must match the checkpoint");
    add_ga_flags(res, rga);

    bool as_json = false;
    auto* tasks = app.add_subcommand("tasks", "List built-in tasks");
    tasks->add_flag("--json", as_json, "Machine-readable listing");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kOk : kUsage;
    }

    std::signal(SIGINT, on_sigint);
    try {
        if (*syn) return cmd_synthesize(task_name, task_file, out, extended, ga);
        if (*run) return cmd_run(program_file, run_ext, run_ticks, strict, eof_zero);
        if (*res) return cmd_resume(ckpt, rga);
        if (*tasks) return cmd_tasks(as_json);
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kIo;
    } catch (const TaskFileError& e) {
        std::cerr << "error: task file: " << e.what() << "\n";
        return kUsage;
    } catch (const CheckpointError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kIo;
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kIo;
    }
    return kUsage;
}
