#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "bfgen/fitness.hpp"
#include "bfgen/lang.hpp"

namespace bfgen {

struct GaConfig {
    std::size_t pop_size = 100;
    std::size_t genome_len = 100;
    double crossover_rate = 0.9;
    double mutation_rate = 0.02;
    std::size_t elitism_count = 1;
    std::optional<std::uint64_t> max_generations;  // nullopt: run until solved
    std::uint64_t rng_seed = 0;
    /// Evaluation threads; 0 means hardware concurrency. Never changes results.
    unsigned threads = 0;
    /// Emit a checkpoint every N generations; 0 disables periodic checkpoints.
    std::uint64_t checkpoint_every = 0;

    /// Throws ConfigError on violated invariants.
    void validate() const;
    friend bool operator==(const GaConfig&, const GaConfig&) = default;
};

/// 64-bit Mersenne Twister with a textual state for checkpoints.
class Rng {
public:
    explicit Rng(std::uint64_t seed = 0) : engine_(seed) {}

    /// Uniform on (0,1] with 53-bit resolution.
    double unit();
    /// Uniform integer in [0, n).
    std::uint64_t below(std::uint64_t n);
    /// Uniform integer in [lo, hi].
    std::uint64_t between(std::uint64_t lo, std::uint64_t hi) { return lo + below(hi - lo + 1); }
    bool chance(double p) { return p >= 1.0 || (p > 0.0 && unit() <= p); }

    std::string state() const;
    void restore(const std::string& state);

    friend bool operator==(const Rng&, const Rng&) = default;

private:
    std::mt19937_64 engine_;
};

struct Individual {
    Genome genome;
    double fitness = 0;
    FitnessReport report;
};

struct Population {
    std::vector<Individual> members;
    std::uint64_t generation = 0;
    Individual best;
};

using GenomeEvaluator = std::function<FitnessReport(const Genome&)>;

/// Unevaluated population of uniformly random genomes, generation 0.
Population init_population(const GaConfig& cfg, Rng& rng);

/// Index drawn with probability fitness_i / sum; uniform when the sum is 0.
std::size_t roulette_select(std::span<const Individual> members, Rng& rng);

Genome crossover(const Genome& a, const Genome& b, Rng& rng, const GaConfig& cfg);
Genome mutate(Genome genome, Rng& rng, const GaConfig& cfg);

/// Evaluates members in parallel. An evaluator exception scores that member 0.
void evaluate_members(std::span<Individual> members, const GenomeEvaluator& eval, unsigned threads);

/// Recomputes `best` from the members; keeps the previous best on ties.
void update_best(Population& pop);

/// One generation: elites copied verbatim, the rest bred by roulette pairs,
/// crossover and mutation from a single RNG stream, then evaluated.
Population epoch(const Population& pop, const GenomeEvaluator& eval, const GaConfig& cfg, Rng& rng);

// ---------------------------------------------------------------------------
// Long runs

struct GenerationStats {
    std::uint64_t generation = 0;
    double best_fitness = 0;
    double mean_fitness = 0;
    std::uint64_t best_ticks = 0;  // instructions executed by the best program, all cases
    double wall_clock_s = 0;
};

inline constexpr int kCheckpointVersion = 1;

/// Everything needed to continue a run exactly. `task` is an opaque task
/// reference (built-in name or full task document) owned by the caller.
struct Checkpoint {
    int version = kCheckpointVersion;
    std::string task;
    GaConfig config;
    std::uint64_t generation = 0;
    std::string rng_state;
    std::vector<Genome> genomes;
    Genome best;
    double elapsed_s = 0;
    std::string extra;  // free-form caller data (JSON text), round-tripped as is

    std::string to_text() const;
    /// Throws CheckpointError on version mismatch or damaged content.
    static Checkpoint from_text(const std::string& text);
};

class CheckpointError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class HaltReason { Success, Budget, Stopped };
std::string to_string(HaltReason r);

struct EvolveHooks {
    std::function<void(const GenerationStats&, const Population&)> on_generation;
    /// Periodic and final checkpoints. A throw is reported through on_warning.
    std::function<void(const Checkpoint&)> checkpoint_sink;
    std::function<void(const std::string&)> on_warning;
    /// Polled once per generation; returning true stops with HaltReason::Stopped.
    std::function<bool()> should_stop;
    /// Task reference copied into checkpoints.
    std::string task_ref;
    std::string checkpoint_extra;
};

struct EvolveResult {
    Individual best;
    HaltReason reason = HaltReason::Budget;
    std::uint64_t generations = 0;
    double elapsed_s = 0;
    Checkpoint final_checkpoint;
};

/// Runs generations until the best member reaches the target and passes the
/// holdout cases (Success) or the generation budget is spent (Budget).
/// `seeds` replace the first random genomes at generation 0.
EvolveResult evolve(const FitnessSpec& spec, const GaConfig& cfg, const EvolveHooks& hooks = {},
                    const std::vector<Genome>& seeds = {});

/// Continues from a checkpoint. `cfg` may change budget, threads and
/// checkpoint cadence only; anything that alters the trajectory is rejected.
EvolveResult resume(const FitnessSpec& spec, const Checkpoint& from, const GaConfig& cfg,
                    const EvolveHooks& hooks = {});

}  // namespace bfgen
