#pragma once

// Statistical checks on the GA operators, shared by the unit and acceptance suites.

#include <boost/math/distributions/chi_squared.hpp>
#include <cmath>
#include <vector>

#include "bfgen/ga.hpp"

namespace stats {

/// Upper-tail p-value of Pearson's chi-square for observed vs expected counts.
inline double chi_square_p(const std::vector<double>& observed, const std::vector<double>& expected) {
    double x2 = 0;
    for (std::size_t i = 0; i < observed.size(); ++i) {
        const double d = observed[i] - expected[i];
        x2 += d * d / expected[i];
    }
    boost::math::chi_squared dist(static_cast<double>(observed.size() - 1));
    return boost::math::cdf(boost::math::complement(dist, x2));
}

/// Roulette draws over a fixed fitness vector (one zero-fitness member).
inline double roulette_p(std::uint64_t seed, int draws) {
    const std::vector<double> fitness{1, 2, 3, 4, 10, 0, 5, 25};
    std::vector<bfgen::Individual> members(fitness.size());
    double total = 0;
    for (std::size_t i = 0; i < fitness.size(); ++i) {
        members[i].fitness = fitness[i];
        total += fitness[i];
    }
    bfgen::Rng rng(seed);
    std::vector<double> counts(fitness.size(), 0);
    for (int i = 0; i < draws; ++i) counts[bfgen::roulette_select(members, rng)] += 1;
    if (counts[5] != 0) return 0.0;
    std::vector<double> obs, exp;
    for (std::size_t i = 0; i < fitness.size(); ++i) {
        if (fitness[i] == 0) continue;
        obs.push_back(counts[i]);
        exp.push_back(draws * fitness[i] / total);
    }
    return chi_square_p(obs, exp);
}

struct Deviation {
    double observed = 0;
    double expected = 0;
    double sigma = 0;
    bool within(double k) const { return std::abs(observed - expected) <= k * sigma; }
};

/// Total genes changed by `trials` mutations against Binomial(trials * len, rate).
inline Deviation mutation_changes(std::uint64_t seed, int trials, std::size_t len, double rate) {
    bfgen::GaConfig cfg;
    cfg.genome_len = len;
    cfg.mutation_rate = rate;
    bfgen::Rng rng(seed);
    bfgen::Genome g;
    g.genes.assign(len, 0.5);
    Deviation d;
    for (int t = 0; t < trials; ++t) {
        const auto m = bfgen::mutate(g, rng, cfg);
        for (std::size_t i = 0; i < len; ++i) d.observed += m.genes[i] != g.genes[i];
    }
    const double n = static_cast<double>(trials) * static_cast<double>(len);
    d.expected = n * rate;
    d.sigma = std::sqrt(n * rate * (1 - rate));
    return d;
}

/// Largest |count - mean| / sigma over instructions, for genes drawn by Rng::unit.
inline double decode_worst_z(std::uint64_t seed, int samples, const bfgen::InstructionSet& set) {
    bfgen::Rng rng(seed);
    std::vector<double> counts(set.size(), 0);
    for (int i = 0; i < samples; ++i) counts[*set.index_of(bfgen::decode_gene(rng.unit(), set))] += 1;
    const double p = 1.0 / static_cast<double>(set.size());
    const double mean = samples * p;
    const double sigma = std::sqrt(samples * p * (1 - p));
    double worst = 0;
    for (double c : counts) worst = std::max(worst, std::abs(c - mean) / sigma);
    return worst;
}

}  // namespace stats
