#include <nlohmann/json.hpp>

#include "bfgen/ga.hpp"

namespace bfgen {

using nlohmann::json;

namespace {

constexpr const char* kFormat = "bfgen-checkpoint";

json genome_json(const Genome& g) { return json(g.genes); }

Genome genome_from(const json& j, std::size_t expected_len, const std::string& what) {
    if (!j.is_array()) throw CheckpointError(what + " is not a gene list");
    Genome g;
    g.genes.reserve(j.size());
    for (const auto& v : j) {
        if (!v.is_number()) throw CheckpointError(what + " contains a non-numeric gene");
        const double d = v.get<double>();
        if (!is_valid_gene(d)) throw CheckpointError(what + " contains a gene outside (0,1]");
        g.genes.push_back(d);
    }
    if (g.size() != expected_len)
        throw CheckpointError(what + " has " + std::to_string(g.size()) + " genes, expected " +
                              std::to_string(expected_len));
    return g;
}

}  // namespace

std::string Checkpoint::to_text() const {
    json cfg = {{"pop_size", config.pop_size},
                {"genome_len", config.genome_len},
                {"crossover_rate", config.crossover_rate},
                {"mutation_rate", config.mutation_rate},
                {"elitism_count", config.elitism_count},
                {"max_generations", config.max_generations ? json(*config.max_generations) : json()},
                {"rng_seed", config.rng_seed},
                {"threads", config.threads},
                {"checkpoint_every", config.checkpoint_every}};
    json j;
    j["format"] = kFormat;
    j["version"] = version;
    j["task"] = task;
    j["config"] = cfg;
    j["generation"] = generation;
    j["rng_state"] = rng_state;
    j["elapsed_s"] = elapsed_s;
    j["extra"] = extra;
    j["best"] = genome_json(best);
    j["genomes"] = json::array();
    for (const auto& g : genomes) j["genomes"].push_back(genome_json(g));
    return j.dump() + "\n";
}

Checkpoint Checkpoint::from_text(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error&) {
        throw CheckpointError("checkpoint is truncated or not valid JSON");
    }
    try {
        if (!j.is_object() || j.value("format", "") != kFormat)
            throw CheckpointError("not a checkpoint document");
        Checkpoint c;
        c.version = j.at("version").get<int>();
        if (c.version != kCheckpointVersion)
            throw CheckpointError("unsupported checkpoint version " + std::to_string(c.version) +
                                  " (this build reads " + std::to_string(kCheckpointVersion) + ")");
        c.task = j.at("task").get<std::string>();
        const auto& cfg = j.at("config");
        c.config.pop_size = cfg.at("pop_size").get<std::size_t>();
        c.config.genome_len = cfg.at("genome_len").get<std::size_t>();
        c.config.crossover_rate = cfg.at("crossover_rate").get<double>();
        c.config.mutation_rate = cfg.at("mutation_rate").get<double>();
        c.config.elitism_count = cfg.at("elitism_count").get<std::size_t>();
        if (!cfg.at("max_generations").is_null())
            c.config.max_generations = cfg.at("max_generations").get<std::uint64_t>();
        c.config.rng_seed = cfg.at("rng_seed").get<std::uint64_t>();
        c.config.threads = cfg.at("threads").get<unsigned>();
        c.config.checkpoint_every = cfg.at("checkpoint_every").get<std::uint64_t>();
        try {
            c.config.validate();
        } catch (const std::exception& e) {
            throw CheckpointError(std::string("checkpoint config invalid: ") + e.what());
        }
        c.generation = j.at("generation").get<std::uint64_t>();
        c.rng_state = j.at("rng_state").get<std::string>();
        Rng probe;
        try {
            probe.restore(c.rng_state);
        } catch (const std::exception&) {
            throw CheckpointError("checkpoint RNG state is damaged");
        }
        c.elapsed_s = j.at("elapsed_s").get<double>();
        c.extra = j.at("extra").get<std::string>();
        c.best = genome_from(j.at("best"), c.config.genome_len, "best genome");
        const auto& gs = j.at("genomes");
        if (!gs.is_array() || gs.size() != c.config.pop_size)
            throw CheckpointError("checkpoint population size does not match its config");
        for (std::size_t i = 0; i < gs.size(); ++i)
            c.genomes.push_back(genome_from(gs[i], c.config.genome_len, "genome " + std::to_string(i)));
        return c;
    } catch (const json::exception& e) {
        throw CheckpointError(std::string("checkpoint field missing or mistyped: ") + e.what());
    }
}

}  // namespace bfgen
