/**
 * Monte Carlo estimates of the probability that a rationalised Gaussian
 * sample has a unique Fréchet mean.
 */

#ifndef POLYMEAN_EXPERIMENTS_HPP
#define POLYMEAN_EXPERIMENTS_HPP

#include <cstdint>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "polymean/frechet.hpp"

namespace polymean {

/** splitmix64 finalizer. */
std::uint64_t mix64(std::uint64_t x);

/** Per-trial seed: h = seed, then h = mix64(h ^ (v + 0x9e3779b97f4a7c15)) for v = k, n, trial. */
std::uint64_t trial_seed(std::uint64_t seed, std::uint64_t k, std::uint64_t n, std::uint64_t trial);

/** Uniform in (0, 1] with 53 random bits, a pure function of (key, counter). */
double counter_uniform(std::uint64_t key, std::uint64_t counter);

/**
 * n points of N(0, I_k) by Box–Muller on counter_uniform(seed, .), each
 * coordinate rounded to the nearest multiple of 2^-denominator_bits.
 */
Sample sample_gaussian_rational(std::size_t k, std::size_t n, std::uint64_t seed, unsigned denominator_bits = 53);

struct ExperimentConfig
{
    std::string norm = "linf";          // "linf", "l1", or a norm file (fixes k)
    std::vector<std::size_t> ks{2};
    std::size_t n_from = 2;
    std::size_t n_to = 10;
    std::size_t trials = 100;
    std::uint64_t seed = 1;
    unsigned denominator_bits = 53;
    bool force = false;                 // lift the k <= 6, n <= 12 guard
    unsigned threads = 1;
    bool timing = false;                // record wall time; otherwise elapsed_ms is 0
};

/** key=value lines (norm, k, n_from, n_to, trials, seed, denominator_bits, force, threads, timing); '#' comments. */
ExperimentConfig parse_experiment_config(std::istream& in);

struct ExperimentCell
{
    std::string norm;
    std::size_t k = 0;
    std::size_t n = 0;
    std::size_t trials = 0;
    std::size_t unique_count = 0;
    std::vector<std::size_t> dim_histogram;     // index = Fréchet mean set dimension, length k + 1
    std::uint64_t elapsed_ms = 0;

    double proportion() const { return trials ? static_cast<double>(unique_count) / trials : 0.0; }
    bool operator==(const ExperimentCell&) const = default;
};

struct ExperimentResult
{
    std::vector<ExperimentCell> cells;          // ordered by (k, n)
    bool operator==(const ExperimentResult&) const = default;
};

/** Throws std::invalid_argument on an invalid config or when the scale guard trips without force. */
ExperimentResult run_uniqueness_experiment(const ExperimentConfig& cfg);

/** Header norm,k,n,trials,unique_count,dim0..dimK,elapsed_ms with K the largest k; LF line ends. */
void emit_csv(const ExperimentResult& result, std::ostream& out);
ExperimentResult parse_csv(std::istream& in);

/** SVG line plot of unique proportion against n, one series per (norm, k). */
void emit_plot(const ExperimentResult& result, std::ostream& out);

}   // namespace polymean

#endif
