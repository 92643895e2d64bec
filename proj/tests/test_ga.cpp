#include <memory>
#include <set>

#include "bfgen/ga.hpp"
#include "doctest.h"
#include "stats.hpp"

using namespace bfgen;

namespace {

GenomeEvaluator by_task(const std::string& name) {
    auto ev = std::make_shared<Evaluator>(find_task(name));
    return [ev](const Genome& g) { return ev->evaluate(g); };
}

Population seeded(const GaConfig& cfg, Rng& rng, const GenomeEvaluator& eval) {
    auto pop = init_population(cfg, rng);
    evaluate_members(pop.members, eval, 1);
    update_best(pop);
    return pop;
}

std::vector<double> trajectory(const FitnessSpec& spec, GaConfig cfg) {
    std::vector<double> out;
    EvolveHooks h;
    h.on_generation = [&](const GenerationStats& s, const Population&) {
        out.push_back(s.best_fitness);
        out.push_back(s.mean_fitness);
    };
    evolve(spec, cfg, h);
    return out;
}

}  // namespace

TEST_SUITE("ga") {

TEST_CASE("rng") {
    Rng a(5), b(5);
    for (int i = 0; i < 1000; ++i) {
        const double u = a.unit();
        CHECK(u > 0.0);
        CHECK(u <= 1.0);
        CHECK(u == b.unit());
        CHECK(a.below(7) < 7);
        b.below(7);
    }
    CHECK(a.below(1) == 0);
    CHECK(a.between(3, 3) == 3);
    CHECK(a.chance(1.0));
    CHECK_FALSE(a.chance(0.0));

    Rng c(1);
    c.restore(a.state());
    CHECK(c == a);
    CHECK(c.unit() == a.unit());
    CHECK_THROWS(c.restore("not a state"));
}

TEST_CASE("config validation") {
    GaConfig cfg;
    CHECK_NOTHROW(cfg.validate());
    cfg.pop_size = 1;
    cfg.elitism_count = 1;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    cfg = {};
    cfg.mutation_rate = 1.5;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    cfg = {};
    cfg.crossover_rate = -0.1;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    cfg = {};
    cfg.genome_len = 0;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    cfg = {};
    cfg.max_generations = 0;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
}

TEST_CASE("init population") {
    GaConfig cfg;
    cfg.pop_size = 7;
    cfg.genome_len = 13;
    Rng rng(1);
    auto pop = init_population(cfg, rng);
    CHECK(pop.members.size() == 7);
    CHECK(pop.generation == 0);
    for (const auto& m : pop.members) {
        CHECK(m.genome.size() == 13);
        for (double g : m.genome.genes) CHECK(is_valid_gene(g));
    }
}

TEST_CASE("crossover joins a prefix of one parent to the suffix of the other") {
    GaConfig cfg;
    cfg.crossover_rate = 1.0;
    Genome a{std::vector<double>(8, 0.1)}, b{std::vector<double>(8, 0.9)};
    Rng rng(3);
    std::set<std::size_t> cuts;
    for (int i = 0; i < 500; ++i) {
        auto child = crossover(a, b, rng, cfg);
        REQUIRE(child.size() == 8);
        std::size_t cut = 0;
        while (cut < 8 && child.genes[cut] == 0.1) ++cut;
        for (std::size_t k = cut; k < 8; ++k) CHECK(child.genes[k] == 0.9);
        CHECK(cut >= 1);
        CHECK(cut <= 7);
        cuts.insert(cut);
    }
    CHECK(cuts.size() == 7);

    cfg.crossover_rate = 0.0;
    CHECK(crossover(a, b, rng, cfg) == a);
    CHECK_THROWS(crossover(a, Genome{{0.5}}, rng, cfg));
}

TEST_CASE("mutation") {
    GaConfig cfg;
    Rng rng(4);
    Genome g{std::vector<double>(100, 0.5)};
    cfg.mutation_rate = 0.0;
    CHECK(mutate(g, rng, cfg) == g);
    cfg.mutation_rate = 1.0;
    auto all = mutate(g, rng, cfg);
    for (std::size_t i = 0; i < 100; ++i) {
        CHECK(all.genes[i] != 0.5);
        CHECK(is_valid_gene(all.genes[i]));
    }
    auto d = stats::mutation_changes(8, 2000, 100, 0.02);
    CHECK(d.within(3.0));
}

TEST_CASE("roulette selection") {
    CHECK(stats::roulette_p(12, 10000) > 0.01);

    std::vector<Individual> zero(5);
    Rng rng(9);
    std::vector<int> counts(5, 0);
    for (int i = 0; i < 5000; ++i) ++counts[roulette_select(zero, rng)];
    for (int c : counts) CHECK(c > 800);

    std::vector<Individual> one(4);
    one[2].fitness = 3;
    for (int i = 0; i < 200; ++i) CHECK(roulette_select(one, rng) == 2);
}

TEST_CASE("decoded genes are uniform") {
    CHECK(stats::decode_worst_z(21, 200000, InstructionSet::core()) <= 3.0);
}

TEST_CASE("evaluator failures score zero") {
    std::vector<Individual> m(3);
    int calls = 0;
    GenomeEvaluator eval = [&](const Genome&) -> FitnessReport {
        if (++calls == 2) throw std::runtime_error("boom");
        FitnessReport r;
        r.score = 5;
        return r;
    };
    evaluate_members(m, eval, 1);
    CHECK(m[0].fitness == 5);
    CHECK(m[1].fitness == 0);
    CHECK(m[2].fitness == 5);
}

TEST_CASE("elitism keeps the best and never loses fitness") {
    GaConfig cfg;
    cfg.pop_size = 40;
    cfg.threads = 1;
    Rng rng(17);
    auto eval = by_task("hi");
    auto pop = seeded(cfg, rng, eval);
    double best = pop.best.fitness;
    for (int gen = 0; gen < 60; ++gen) {
        double top = 0;
        const Genome* top_genome = nullptr;
        for (const auto& m : pop.members)
            if (!top_genome || m.fitness > top) top = m.fitness, top_genome = &m.genome;
        auto next = epoch(pop, eval, cfg, rng);
        CHECK(next.generation == pop.generation + 1);
        CHECK(next.members.size() == pop.members.size());
        CHECK(next.members[0].genome == *top_genome);
        CHECK(next.members[0].fitness == top);
        CHECK(next.best.fitness >= best);
        best = next.best.fitness;
        pop = std::move(next);
    }
}

TEST_CASE("constant fitness still breeds") {
    GaConfig cfg;
    cfg.pop_size = 10;
    cfg.genome_len = 5;
    Rng rng(2);
    GenomeEvaluator flat = [](const Genome&) { return FitnessReport{1.0, {}, {}}; };
    auto pop = seeded(cfg, rng, flat);
    for (int i = 0; i < 5; ++i) pop = epoch(pop, flat, cfg, rng);
    CHECK(pop.generation == 5);
    for (const auto& m : pop.members) CHECK(m.fitness == 1.0);
}

TEST_CASE("same seed gives the same trajectory at any thread count") {
    auto spec = find_task("hi");
    GaConfig cfg;
    cfg.max_generations = 40;
    cfg.rng_seed = 99;
    cfg.threads = 1;
    const auto one = trajectory(spec, cfg);
    CHECK(trajectory(spec, cfg) == one);
    cfg.threads = 4;
    CHECK(trajectory(spec, cfg) == one);
    cfg.rng_seed = 100;
    CHECK(trajectory(spec, cfg) != one);
}

TEST_CASE("a pre-solved seed genome succeeds at generation 0") {
    auto spec = find_task("hi");
    auto prog = parse_source("++++++++[>+++++++++++++<-]>.+.", spec.instruction_set);
    GaConfig cfg;
    cfg.genome_len = prog.size();
    cfg.threads = 1;
    auto r = evolve(spec, cfg, {}, {encode_program(prog, spec.instruction_set)});
    CHECK(r.reason == HaltReason::Success);
    CHECK(r.generations == 0);
    CHECK(decode_genome(r.best.genome, spec.instruction_set) == prog);
    CHECK(r.best.fitness == 512.0);

    CHECK_THROWS_AS(evolve(spec, GaConfig{}, {}, {encode_program(prog, spec.instruction_set)}), ConfigError);
}

TEST_CASE("budget, stop and logging") {
    auto spec = find_task("addition");
    GaConfig cfg;
    cfg.max_generations = 10;
    cfg.threads = 1;
    cfg.checkpoint_every = 4;
    std::vector<std::uint64_t> gens;
    std::vector<std::uint64_t> ckpts;
    EvolveHooks h;
    h.on_generation = [&](const GenerationStats& s, const Population&) { gens.push_back(s.generation); };
    h.checkpoint_sink = [&](const Checkpoint& c) { ckpts.push_back(c.generation); };
    auto r = evolve(spec, cfg, h);
    CHECK(r.reason == HaltReason::Budget);
    CHECK(r.generations == 10);
    REQUIRE(gens.size() == 11);
    for (std::size_t i = 0; i < gens.size(); ++i) CHECK(gens[i] == i);
    CHECK(ckpts == std::vector<std::uint64_t>{4, 8, 10});
    CHECK(r.final_checkpoint.generation == 10);

    int polls = 0;
    EvolveHooks stop;
    stop.should_stop = [&] { return ++polls == 3; };
    cfg.max_generations.reset();
    auto s = evolve(spec, cfg, stop);
    CHECK(s.reason == HaltReason::Stopped);
    CHECK(s.generations == 2);

    std::vector<std::string> warnings;
    EvolveHooks bad;
    bad.checkpoint_sink = [](const Checkpoint&) { throw std::runtime_error("disk full"); };
    bad.on_warning = [&](const std::string& w) { warnings.push_back(w); };
    cfg.max_generations = 2;
    CHECK_NOTHROW(evolve(spec, cfg, bad));
    CHECK(warnings.size() == 1);
}

TEST_CASE("short run on hi improves fitness") {
    auto spec = find_task("hi");
    GaConfig cfg;
    cfg.max_generations = 300;
    cfg.rng_seed = 1;
    double first = -1, last = -1;
    EvolveHooks h;
    h.on_generation = [&](const GenerationStats& s, const Population&) {
        if (first < 0) first = s.best_fitness;
        last = s.best_fitness;
    };
    auto r = evolve(spec, cfg, h);
    CHECK(last >= first);
    CHECK(last > 256);
    CHECK(r.best.fitness == last);
}

}
