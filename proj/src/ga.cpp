#include "stegano/ga.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace stegano {

namespace {

double clamp_luma(double v) {
    return std::clamp(v, 0.0, 255.0);
}

std::uint8_t rounded_luma(double v) {
    return static_cast<std::uint8_t>(std::llround(clamp_luma(v)));
}

// (fitness, candidate index, slot) gives every comparison a total order.
struct SlotKey {
    int fit;
    std::size_t candidate_index;
    std::size_t slot;

    bool operator<(const SlotKey& o) const {
        if (fit != o.fit) return fit < o.fit;
        if (candidate_index != o.candidate_index) return candidate_index < o.candidate_index;
        return slot < o.slot;
    }
};

SlotKey key_of(std::span<const Chromosome> pop, std::uint8_t target, std::size_t slot) {
    return {fitness(target, pop[slot]), pop[slot].candidate_index, slot};
}

std::size_t best_slot(std::span<const Chromosome> pop, std::uint8_t target) {
    std::size_t best = 0;
    SlotKey best_key = key_of(pop, target, 0);
    for (std::size_t s = 1; s < pop.size(); ++s) {
        const SlotKey k = key_of(pop, target, s);
        if (k < best_key) {
            best = s;
            best_key = k;
        }
    }
    return best;
}

}  // namespace

int fitness(std::uint8_t target, const Chromosome& chrom) {
    return std::abs(int(target) - int(rounded_luma(chrom.value)));
}

double unit_draw(std::mt19937_64& rng) {
    return double(rng() >> 11) * 0x1.0p-53;
}

std::uint64_t bounded_draw(std::mt19937_64& rng, std::uint64_t n) {
    return rng() % n;
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
    auto splitmix = [](std::uint64_t x) {
        x += 0x9e3779b97f4a7c15ULL;
        x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
        x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
        return x ^ (x >> 31);
    };
    return splitmix(seed ^ splitmix(stream));
}

std::vector<Chromosome> init_population(std::span<const GaCandidate> candidates, std::uint8_t target,
                                        const GaParams& params, std::mt19937_64& rng) {
    if (candidates.empty()) throw CapacityError("ga: candidate pool exhausted");
    if (params.population_size < 1) throw ArgumentError("ga: population_size must be >= 1");

    auto make = [&](const GaCandidate& c) {
        return Chromosome{c.index, c.pos, c.luma, double(c.luma)};
    };

    const std::size_t n = candidates.size();
    if (n <= std::size_t(params.population_size)) {
        std::vector<Chromosome> all;
        all.reserve(n);
        for (const auto& c : candidates) all.push_back(make(c));
        return all;
    }

    // Rank weights: weight = n - (#strictly fitter candidates). Ties share a
    // weight, so equal-fitness pools reduce to a uniform draw.
    std::array<std::uint32_t, 257> below{};
    std::vector<int> fit(n);
    for (std::size_t i = 0; i < n; ++i) {
        fit[i] = std::abs(int(target) - int(candidates[i].luma));
        ++below[fit[i] + 1];
    }
    for (int f = 1; f <= 256; ++f) below[f] += below[f - 1];

    std::vector<double> cumulative(n);
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        total += double(n - below[fit[i]]);
        cumulative[i] = total;
    }

    std::vector<Chromosome> population;
    population.reserve(std::size_t(params.population_size));
    std::vector<bool> taken(n, false);
    while (population.size() < std::size_t(params.population_size)) {
        const double t = unit_draw(rng) * total;
        const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), t);
        std::size_t pick = std::min(std::size_t(it - cumulative.begin()), n - 1);
        if (taken[pick]) continue;  // redraw: without-replacement semantics
        taken[pick] = true;
        population.push_back(make(candidates[pick]));
    }
    return population;
}

std::pair<std::size_t, std::size_t> select_parents(std::span<const Chromosome> population,
                                                   std::uint8_t target, std::mt19937_64& rng) {
    if (population.size() < 2) throw CapacityError("ga: population too small for parent selection");
    if (population.size() == 2) return {0, 1};

    std::array<std::size_t, 3> top{};
    std::array<SlotKey, 3> keys{};
    std::size_t filled = 0;
    for (std::size_t s = 0; s < population.size(); ++s) {
        const SlotKey k = key_of(population, target, s);
        if (filled < 3) {
            top[filled] = s;
            keys[filled] = k;
            ++filled;
            for (std::size_t i = filled - 1; i > 0 && keys[i] < keys[i - 1]; --i) {
                std::swap(keys[i], keys[i - 1]);
                std::swap(top[i], top[i - 1]);
            }
        } else if (k < keys[2]) {
            keys[2] = k;
            top[2] = s;
            for (std::size_t i = 2; i > 0 && keys[i] < keys[i - 1]; --i) {
                std::swap(keys[i], keys[i - 1]);
                std::swap(top[i], top[i - 1]);
            }
        }
    }

    const std::size_t first = bounded_draw(rng, 3);
    const std::size_t second_of_two = bounded_draw(rng, 2);
    std::array<std::size_t, 2> rest{};
    std::size_t r = 0;
    for (std::size_t i = 0; i < 3; ++i) {
        if (i != first) rest[r++] = i;
    }
    return {top[first], top[rest[second_of_two]]};
}

double crossover(double value, std::uint8_t target, double rate) {
    return clamp_luma(value + rate * (double(target) - value));
}

double mutate(double value, std::mt19937_64& rng, double rate) {
    if (unit_draw(rng) >= rate) return value;
    const double delta = rate * value;
    const bool plus = bounded_draw(rng, 2) == 0;
    return clamp_luma(plus ? value + delta : value - delta);
}

GaResult run_ga(std::span<const GaCandidate> candidates, std::uint8_t target, const GaParams& params,
                std::mt19937_64& rng) {
    std::vector<Chromosome> population = init_population(candidates, target, params, rng);

    auto result_from = [&](std::size_t slot, int generation) {
        const Chromosome& c = population[slot];
        return GaResult{c.candidate_index, c.pos, rounded_luma(c.value), generation,
                        fitness(target, c) == 0};
    };

    for (int gen = 0;; ++gen) {
        const std::size_t best = best_slot(population, target);
        if (fitness(target, population[best]) == 0 || gen == params.max_generations) {
            return result_from(best, gen);
        }

        if (population.size() == 1) {
            // Degenerate pool: self-crossover, keep the child only when it
            // does not regress (preserves the monotone elite).
            Chromosome child = population[0];
            child.value = mutate(crossover(child.value, target, params.crossover_rate), rng,
                                 params.mutation_rate);
            if (fitness(target, child) <= fitness(target, population[0])) population[0] = child;
            continue;
        }

        const auto [p1, p2] = select_parents(population, target, rng);
        Chromosome c1 = population[p1];
        Chromosome c2 = population[p2];
        c1.value = mutate(crossover(c1.value, target, params.crossover_rate), rng, params.mutation_rate);
        c2.value = mutate(crossover(c2.value, target, params.crossover_rate), rng, params.mutation_rate);

        // Children replace the two worst slots; the best slot is never touched.
        std::array<std::size_t, 2> slots{};
        std::size_t slot_count = 0;
        {
            std::vector<std::size_t> order(population.size());
            for (std::size_t s = 0; s < population.size(); ++s) order[s] = s;
            std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
                return key_of(population, target, b) < key_of(population, target, a);
            });
            for (std::size_t s : order) {
                if (s == best) continue;
                slots[slot_count++] = s;
                if (slot_count == 2) break;
            }
        }

        // Better child lands in the worst slot.
        const bool c1_first =
            fitness(target, c1) < fitness(target, c2) ||
            (fitness(target, c1) == fitness(target, c2) && c1.candidate_index <= c2.candidate_index);
        const Chromosome& first_child = c1_first ? c1 : c2;
        const Chromosome& second_child = c1_first ? c2 : c1;
        population[slots[0]] = first_child;
        if (slot_count > 1) population[slots[1]] = second_child;
    }
}

}  // namespace stegano
