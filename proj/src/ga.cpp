#include "bfgen/ga.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <numeric>
#include <sstream>
#include <thread>

namespace bfgen {

void GaConfig::validate() const {
    if (pop_size < 1) throw ConfigError("pop_size must be >= 1");
    if (genome_len < 1) throw ConfigError("genome_len must be >= 1");
    if (elitism_count >= pop_size)
        throw ConfigError("elitism_count must be < pop_size (no room for offspring)");
    if (!(crossover_rate >= 0 && crossover_rate <= 1))
        throw ConfigError("crossover_rate must be in [0,1]");
    if (!(mutation_rate >= 0 && mutation_rate <= 1))
        throw ConfigError("mutation_rate must be in [0,1]");
    if (max_generations && *max_generations < 1)
        throw ConfigError("max_generations must be >= 1");
}

// ---------------------------------------------------------------------------

double Rng::unit() {
    // 53 random bits mapped to {1, ..., 2^53} / 2^53.
    return static_cast<double>((engine_() >> 11) + 1) * 0x1.0p-53;
}

std::uint64_t Rng::below(std::uint64_t n) {
    if (n <= 1) return 0;
    const std::uint64_t threshold = (0 - n) % n;
    for (;;) {
        const std::uint64_t x = engine_();
        if (x >= threshold) return x % n;
    }
}

std::string Rng::state() const {
    std::ostringstream os;
    os << engine_;
    return os.str();
}

void Rng::restore(const std::string& state) {
    std::istringstream is(state);
    std::mt19937_64 e;
    is >> e;
    if (is.fail()) throw std::invalid_argument("malformed RNG state");
    engine_ = e;
}

// ---------------------------------------------------------------------------

Population init_population(const GaConfig& cfg, Rng& rng) {
    cfg.validate();
    Population pop;
    pop.members.resize(cfg.pop_size);
    for (auto& m : pop.members) {
        m.genome.genes.resize(cfg.genome_len);
        for (auto& g : m.genome.genes) g = rng.unit();
    }
    return pop;
}

std::size_t roulette_select(std::span<const Individual> members, Rng& rng) {
    double total = 0;
    for (const auto& m : members) total += m.fitness;
    if (!(total > 0)) return static_cast<std::size_t>(rng.below(members.size()));
    // spin in (0, total]; first member whose cumulative sum reaches it wins
    const double spin = rng.unit() * total;
    double acc = 0;
    for (std::size_t i = 0; i < members.size(); ++i) {
        acc += members[i].fitness;
        if (members[i].fitness > 0 && acc >= spin) return i;
    }
    // rounding left the spin above the final sum: take the last positive member
    for (std::size_t i = members.size(); i-- > 0;)
        if (members[i].fitness > 0) return i;
    return 0;
}

Genome crossover(const Genome& a, const Genome& b, Rng& rng, const GaConfig& cfg) {
    if (a.size() != b.size()) throw std::invalid_argument("crossover of unequal genome lengths");
    const std::size_t len = a.size();
    if (len < 2 || !rng.chance(cfg.crossover_rate)) return a;
    const auto cut = static_cast<std::size_t>(rng.between(1, len - 1));
    Genome child;
    child.genes.reserve(len);
    child.genes.insert(child.genes.end(), a.genes.begin(), a.genes.begin() + static_cast<std::ptrdiff_t>(cut));
    child.genes.insert(child.genes.end(), b.genes.begin() + static_cast<std::ptrdiff_t>(cut), b.genes.end());
    return child;
}

Genome mutate(Genome genome, Rng& rng, const GaConfig& cfg) {
    if (cfg.mutation_rate <= 0) return genome;
    for (auto& g : genome.genes)
        if (rng.chance(cfg.mutation_rate)) g = rng.unit();
    return genome;
}

void evaluate_members(std::span<Individual> members, const GenomeEvaluator& eval, unsigned threads) {
    auto one = [&](Individual& m) {
        try {
            m.report = eval(m.genome);
            m.fitness = std::max(0.0, m.report.score);
        } catch (...) {
            m.report = {};
            m.fitness = 0;
        }
    };
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, members.size()));
    if (threads <= 1) {
        for (auto& m : members) one(m);
        return;
    }
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < members.size(); i = next++) one(members[i]);
    };
    std::vector<std::jthread> pool;
    pool.reserve(threads - 1);
    for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
    worker();
}

void update_best(Population& pop) {
    const Individual* top = nullptr;
    for (const auto& m : pop.members)
        if (!top || m.fitness > top->fitness) top = &m;
    if (top && (pop.best.genome.genes.empty() || top->fitness > pop.best.fitness)) pop.best = *top;
}

Population epoch(const Population& pop, const GenomeEvaluator& eval, const GaConfig& cfg, Rng& rng) {
    const std::size_t n = pop.members.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
        return pop.members[x].fitness > pop.members[y].fitness;
    });

    Population next;
    next.generation = pop.generation + 1;
    next.best = pop.best;
    next.members.reserve(n);
    const std::size_t elites = std::min(cfg.elitism_count, n);
    for (std::size_t i = 0; i < elites; ++i) next.members.push_back(pop.members[order[i]]);

    for (std::size_t i = elites; i < n; ++i) {
        const auto& a = pop.members[roulette_select(pop.members, rng)];
        const auto& b = pop.members[roulette_select(pop.members, rng)];
        Individual child;
        child.genome = mutate(crossover(a.genome, b.genome, rng, cfg), rng, cfg);
        next.members.push_back(std::move(child));
    }
    evaluate_members(std::span(next.members).subspan(elites), eval, cfg.threads);
    update_best(next);
    return next;
}

// ---------------------------------------------------------------------------

std::string to_string(HaltReason r) {
    switch (r) {
        case HaltReason::Success: return "Success";
        case HaltReason::Budget: return "Budget";
        case HaltReason::Stopped: return "Stopped";
    }
    return "?";
}

namespace {

using Clock = std::chrono::steady_clock;

GenerationStats stats_of(const Population& pop, double wall) {
    GenerationStats s;
    s.generation = pop.generation;
    s.best_fitness = pop.best.fitness;
    double sum = 0;
    for (const auto& m : pop.members) sum += m.fitness;
    s.mean_fitness = pop.members.empty() ? 0 : sum / static_cast<double>(pop.members.size());
    for (const auto& r : pop.best.report.exec) s.best_ticks += r.ticks_used;
    s.wall_clock_s = wall;
    return s;
}

Checkpoint snapshot(const Population& pop, const Rng& rng, const GaConfig& cfg,
                    const EvolveHooks& hooks, double elapsed) {
    Checkpoint c;
    c.task = hooks.task_ref;
    c.config = cfg;
    c.generation = pop.generation;
    c.rng_state = rng.state();
    c.genomes.reserve(pop.members.size());
    for (const auto& m : pop.members) c.genomes.push_back(m.genome);
    c.best = pop.best.genome;
    c.elapsed_s = elapsed;
    c.extra = hooks.checkpoint_extra;
    return c;
}

void emit(const EvolveHooks& hooks, const Checkpoint& c) {
    if (!hooks.checkpoint_sink) return;
    try {
        hooks.checkpoint_sink(c);
    } catch (const std::exception& e) {
        if (hooks.on_warning) hooks.on_warning(std::string("checkpoint not written: ") + e.what());
    }
}

/// Highest-fitness member at target that also passes the holdout cases.
const Individual* find_solution(const Population& pop, const Evaluator& ev) {
    const Individual* found = nullptr;
    std::vector<const Genome*> rejected;
    for (const auto& m : pop.members) {
        if (m.fitness < ev.target()) continue;
        if (found && m.fitness <= found->fitness) continue;
        if (std::any_of(rejected.begin(), rejected.end(), [&](const Genome* g) { return *g == m.genome; }))
            continue;
        if (ev.passes_holdout(decode_genome(m.genome, ev.spec().instruction_set)))
            found = &m;
        else
            rejected.push_back(&m.genome);
    }
    return found;
}

EvolveResult run_loop(const Evaluator& ev, Population pop, Rng rng, const GaConfig& cfg,
                      const EvolveHooks& hooks, double elapsed_before, bool resumed) {
    const auto start = Clock::now();
    auto elapsed = [&] {
        return elapsed_before + std::chrono::duration<double>(Clock::now() - start).count();
    };
    const GenomeEvaluator eval = [&ev](const Genome& g) { return ev.evaluate(g); };

    EvolveResult result;
    bool report = !resumed;
    for (;;) {
        if (report && hooks.on_generation) hooks.on_generation(stats_of(pop, elapsed()), pop);
        if (const Individual* sol = find_solution(pop, ev)) {
            result.best = *sol;
            result.reason = HaltReason::Success;
            break;
        }
        if (cfg.max_generations && pop.generation >= *cfg.max_generations) {
            result.reason = HaltReason::Budget;
            break;
        }
        if (hooks.should_stop && hooks.should_stop()) {
            result.reason = HaltReason::Stopped;
            break;
        }
        if (report && cfg.checkpoint_every > 0 && pop.generation > 0 &&
            pop.generation % cfg.checkpoint_every == 0)
            emit(hooks, snapshot(pop, rng, cfg, hooks, elapsed()));
        pop = epoch(pop, eval, cfg, rng);
        report = true;
    }
    if (result.reason != HaltReason::Success) result.best = pop.best;
    result.generations = pop.generation;
    result.elapsed_s = elapsed();
    result.final_checkpoint = snapshot(pop, rng, cfg, hooks, result.elapsed_s);
    emit(hooks, result.final_checkpoint);
    return result;
}

}  // namespace

EvolveResult evolve(const FitnessSpec& spec, const GaConfig& cfg, const EvolveHooks& hooks,
                    const std::vector<Genome>& seeds) {
    cfg.validate();
    if (!(spec.target_fitness() > 0)) throw ConfigError("target fitness must be > 0");
    const Evaluator ev(spec);
    Rng rng(cfg.rng_seed);
    Population pop = init_population(cfg, rng);
    if (seeds.size() > pop.members.size()) throw ConfigError("more seed genomes than population");
    for (std::size_t i = 0; i < seeds.size(); ++i) {
        if (seeds[i].size() != cfg.genome_len)
            throw ConfigError("seed genome " + std::to_string(i) + " has length " +
                              std::to_string(seeds[i].size()) + ", expected " +
                              std::to_string(cfg.genome_len));
        if (!std::all_of(seeds[i].genes.begin(), seeds[i].genes.end(), is_valid_gene))
            throw DomainError("seed genome " + std::to_string(i) + " has genes outside (0,1]");
        pop.members[i].genome = seeds[i];
    }
    evaluate_members(pop.members, [&ev](const Genome& g) { return ev.evaluate(g); }, cfg.threads);
    update_best(pop);
    return run_loop(ev, std::move(pop), rng, cfg, hooks, 0.0, false);
}

EvolveResult resume(const FitnessSpec& spec, const Checkpoint& from, const GaConfig& cfg,
                    const EvolveHooks& hooks) {
    cfg.validate();
    const GaConfig& old = from.config;
    auto reject = [](const std::string& field) {
        throw ConfigError("cannot change " + field + " when resuming a checkpoint");
    };
    if (cfg.pop_size != old.pop_size) reject("pop_size");
    if (cfg.genome_len != old.genome_len) reject("genome_len");
    if (cfg.crossover_rate != old.crossover_rate) reject("crossover_rate");
    if (cfg.mutation_rate != old.mutation_rate) reject("mutation_rate");
    if (cfg.elitism_count != old.elitism_count) reject("elitism_count");
    if (cfg.rng_seed != old.rng_seed) reject("rng_seed");

    const Evaluator ev(spec);
    Rng rng;
    try {
        rng.restore(from.rng_state);
    } catch (const std::exception&) {
        throw CheckpointError("checkpoint RNG state is damaged");
    }
    Population pop;
    pop.generation = from.generation;
    pop.members.resize(from.genomes.size());
    for (std::size_t i = 0; i < from.genomes.size(); ++i) pop.members[i].genome = from.genomes[i];
    evaluate_members(pop.members, [&ev](const Genome& g) { return ev.evaluate(g); }, cfg.threads);
    pop.best.genome = from.best;
    pop.best.report = ev.evaluate(from.best);
    pop.best.fitness = std::max(0.0, pop.best.report.score);
    update_best(pop);
    return run_loop(ev, std::move(pop), rng, cfg, hooks, from.elapsed_s, true);
}

}  // namespace bfgen
