#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "stegano/errors.hpp"
#include "stegano/roi.hpp"

namespace stegano {

// Address of one luma sample: frame index, column x, row y.
struct PixelRef {
    std::uint32_t frame = 0;
    int x = 0;
    int y = 0;

    bool operator==(const PixelRef&) const = default;
};

// One candidate pixel offered to the engine. index is the pixel's position
// in the frame's original candidate list and is the tie-break everywhere.
struct GaCandidate {
    std::size_t index = 0;
    PixelPos pos;
    std::uint8_t luma = 0;
};

// A GA individual: a candidate pixel whose luma value evolves as a real.
struct Chromosome {
    std::size_t candidate_index = 0;
    PixelPos pos;
    std::uint8_t original_luma = 0;
    double value = 0.0;
};

struct GaParams {
    int population_size = 16;
    int max_generations = 64;
    double crossover_rate = 0.5;
    double mutation_rate = 0.05;
    std::uint64_t seed = 0;
};

struct GaResult {
    std::size_t candidate_index = 0;
    PixelPos pos;
    std::uint8_t final_value = 0;
    int generations_used = 0;
    bool converged = false;
};

// |target - round(value)|; lower is better.
int fitness(std::uint8_t target, const Chromosome& chrom);

// Seedable uniform helpers. All engine randomness flows through these so a
// fixed seed gives identical runs on every toolchain.
double unit_draw(std::mt19937_64& rng);                          // [0, 1)
std::uint64_t bounded_draw(std::mt19937_64& rng, std::uint64_t n);  // [0, n)

// Rank-weighted sample of population_size chromosomes without replacement.
// Candidates tied on fitness share a weight, so an all-equal pool degrades
// to a uniform draw.
std::vector<Chromosome> init_population(std::span<const GaCandidate> candidates, std::uint8_t target,
                                        const GaParams& params, std::mt19937_64& rng);

// Indices of the two parents: the three fittest are found (ties to the lower
// candidate index) and two of them are drawn uniformly.
std::pair<std::size_t, std::size_t> select_parents(std::span<const Chromosome> population,
                                                   std::uint8_t target, std::mt19937_64& rng);

// Moves value halfway toward the target: value + rate * (target - value).
double crossover(double value, std::uint8_t target, double rate = 0.5);

// With probability rate, returns value ± rate * value (sign from rng),
// clamped to [0, 255]; otherwise returns value unchanged.
double mutate(double value, std::mt19937_64& rng, double rate = 0.05);

// Full per-byte search over the frame's unused candidates.
GaResult run_ga(std::span<const GaCandidate> candidates, std::uint8_t target, const GaParams& params,
                std::mt19937_64& rng);

// Stream splitter for per-frame rng sub-seeds.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream);

}  // namespace stegano
