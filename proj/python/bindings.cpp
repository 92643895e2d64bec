#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "bfgen/fitness.hpp"
#include "bfgen/ga.hpp"
#include "bfgen/interp.hpp"
#include "bfgen/lang.hpp"
#include "bfgen/task_file.hpp"

namespace py = pybind11;
using namespace bfgen;

namespace {

std::vector<std::uint8_t> to_bytes(const py::bytes& b) {
    const std::string s = b;
    return {s.begin(), s.end()};
}

py::bytes from_bytes(const std::vector<std::uint8_t>& v) {
    return py::bytes(reinterpret_cast<const char*>(v.data()), v.size());
}

InstructionSet set_for(bool extended, std::size_t functions) {
    return extended || functions ? InstructionSet::extended(functions) : InstructionSet::core();
}

FitnessSpec task_from(const std::string& name_or_json) {
    if (!name_or_json.empty() && name_or_json.front() == '{') return parse_task(name_or_json);
    try {
        return find_task(name_or_json);
    } catch (const std::out_of_range& e) {
        throw py::key_error(e.what());
    }
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Genetic-algorithm synthesis of tape-language programs";

    py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
    py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<TaskFileError>(m, "TaskFileError", PyExc_ValueError);
    py::register_exception<CheckpointError>(m, "CheckpointError", PyExc_ValueError);

    py::enum_<Termination>(m, "Termination")
        .value("Completed", Termination::Completed)
        .value("TickLimit", Termination::TickLimit)
        .value("Fault", Termination::Fault)
        .value("InputExhausted", Termination::InputExhausted)
        .value("Halted", Termination::Halted);

    py::class_<ExecReport>(m, "ExecReport")
        .def_property_readonly("output", [](const ExecReport& r) { return from_bytes(r.output); })
        .def_readonly("termination", &ExecReport::termination)
        .def_readonly("ticks_used", &ExecReport::ticks_used)
        .def_readonly("cells_touched", &ExecReport::cells_touched)
        .def_readonly("print_sites", &ExecReport::print_sites)
        .def_property_readonly("fault_position",
                               [](const ExecReport& r) -> py::object {
                                   return r.fault ? py::cast(r.fault->position) : py::none();
                               })
        .def_property_readonly("fault_reason",
                               [](const ExecReport& r) -> py::object {
                                   return r.fault ? py::cast(to_string(r.fault->reason)) : py::none();
                               })
        .def("ok", &ExecReport::ok)
        .def("__repr__", [](const ExecReport& r) {
            return "<ExecReport " + to_string(r.termination) + " ticks=" + std::to_string(r.ticks_used) +
                   " output=" + std::to_string(r.output.size()) + " bytes>";
        });

    m.def(
        "run",
        [](const std::string& source, const py::bytes& input, std::uint64_t max_ticks, bool extended,
           const std::vector<std::string>& functions, bool read_zero) {
            const auto set = set_for(extended, functions.size());
            std::vector<Program> fns;
            for (const auto& f : functions) fns.push_back(parse_source(f, set));
            Limits limits;
            limits.max_ticks = max_ticks;
            if (read_zero) limits.on_input_exhausted = InputExhaustion::ReadZero;
            const auto in = to_bytes(input);
            py::gil_scoped_release nogil;
            return Interpreter(set, limits, fns).run(parse_source(source, set), in);
        },
        py::arg("source"), py::arg("input") = py::bytes(), py::arg("max_ticks") = 5000,
        py::arg("extended") = false, py::arg("functions") = std::vector<std::string>{},
        py::arg("read_zero") = false, "Execute program text (lenient parse) on input bytes.");

    m.def(
        "decode",
        [](const std::vector<double>& genes, bool extended, std::size_t functions) {
            return decode_genome(Genome{genes}, set_for(extended, functions)).source();
        },
        py::arg("genes"), py::arg("extended") = false, py::arg("functions") = 0,
        "Decode genes in (0,1] to program text.");

    m.def(
        "encode",
        [](const std::string& source, bool extended, std::size_t functions) {
            const auto set = set_for(extended, functions);
            return encode_program(parse_source(source, set, ParseMode::Strict), set).genes;
        },
        py::arg("source"), py::arg("extended") = false, py::arg("functions") = 0,
        "Encode program text as range-midpoint genes.");

    m.def("task_names", &task_names);

    m.def(
        "task_info",
        [](const std::string& task) {
            const auto s = task_from(task);
            py::dict d;
            d["name"] = s.name;
            d["description"] = s.description;
            d["instruction_set"] = s.instruction_set.name();
            d["target_fitness"] = s.target_fitness();
            d["training_cases"] = s.training_cases.size();
            d["holdout_cases"] = s.holdout_cases.size();
            d["document"] = dump_task(s);
            return d;
        },
        py::arg("task"), "Catalog entry for a task name or task document.");

    m.def(
        "evaluate",
        [](const std::string& task, const std::string& source) {
            const Evaluator ev(task_from(task));
            const auto prog = parse_source(source, ev.spec().instruction_set);
            py::gil_scoped_release nogil;
            auto rep = ev.evaluate(prog);
            return std::make_tuple(rep.score, rep.per_case, ev.solves(prog));
        },
        py::arg("task"), py::arg("source"), "Returns (score, per_case, solved).");

    py::class_<EvolveResult>(m, "EvolveResult")
        .def_property_readonly("fitness", [](const EvolveResult& r) { return r.best.fitness; })
        .def_property_readonly("genes", [](const EvolveResult& r) { return r.best.genome.genes; })
        .def_property_readonly("reason", [](const EvolveResult& r) { return to_string(r.reason); })
        .def_readonly("generations", &EvolveResult::generations)
        .def_readonly("elapsed_s", &EvolveResult::elapsed_s)
        .def_property_readonly("checkpoint", [](const EvolveResult& r) { return r.final_checkpoint.to_text(); });

    auto make_config = [](std::uint64_t seed, std::size_t pop_size, std::size_t genome_len,
                          std::optional<std::uint64_t> max_generations, unsigned threads) {
        GaConfig cfg;
        cfg.rng_seed = seed;
        cfg.pop_size = pop_size;
        cfg.genome_len = genome_len;
        cfg.max_generations = max_generations;
        cfg.threads = threads;
        return cfg;
    };

    using Progress = std::function<void(std::uint64_t, double, double)>;
    auto hooks_for = [](const std::string& task_doc, const std::optional<Progress>& progress) {
        EvolveHooks h;
        h.task_ref = task_doc;
        if (progress) {
            h.on_generation = [cb = *progress](const GenerationStats& s, const Population&) {
                py::gil_scoped_acquire gil;
                cb(s.generation, s.best_fitness, s.mean_fitness);
            };
        }
        // Ctrl-C ends the run with reason "Stopped"; the checkpoint can be resumed
        h.should_stop = [] {
            py::gil_scoped_acquire gil;
            if (PyErr_CheckSignals() == 0) return false;
            PyErr_Clear();
            return true;
        };
        return h;
    };

    m.def(
        "evolve",
        [make_config, hooks_for](const std::string& task, std::uint64_t seed, std::size_t pop_size,
                                 std::size_t genome_len, std::optional<std::uint64_t> max_generations,
                                 unsigned threads, std::optional<Progress> progress) {
            const auto spec = task_from(task);
            const auto cfg = make_config(seed, pop_size, genome_len, max_generations, threads);
            const auto hooks = hooks_for(dump_task(spec), progress);
            py::gil_scoped_release nogil;
            return evolve(spec, cfg, hooks);
        },
        py::arg("task"), py::arg("seed") = 0, py::arg("pop_size") = 100, py::arg("genome_len") = 100,
        py::arg("max_generations") = py::none(), py::arg("threads") = 0, py::arg("progress") = py::none(),
        "Evolve until solved or the generation budget runs out.");

    m.def(
        "resume",
        [hooks_for](const std::string& checkpoint_text, std::optional<std::uint64_t> max_generations,
                    unsigned threads, std::optional<Progress> progress) {
            const auto ckpt = Checkpoint::from_text(checkpoint_text);
            const auto spec = parse_task(ckpt.task);
            GaConfig cfg = ckpt.config;
            cfg.max_generations = max_generations;
            cfg.threads = threads;
            const auto hooks = hooks_for(ckpt.task, progress);
            py::gil_scoped_release nogil;
            return resume(spec, ckpt, cfg, hooks);
        },
        py::arg("checkpoint"), py::arg("max_generations") = py::none(), py::arg("threads") = 0,
        py::arg("progress") = py::none(), "Continue a run from checkpoint text.");
}
