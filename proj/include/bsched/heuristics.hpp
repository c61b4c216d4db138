#pragma once

#include <cstdint>
#include <vector>

#include "bsched/core.hpp"
#include "bsched/rng.hpp"

namespace bsched {

// Priority permutation of job ids; decoded by release-aware list scheduling.
using Chromosome = std::vector<int>;

struct GaConfig {
  int population = 50;
  int generations = 200;
  double crossover_rate = 0.9;
  double mutation_rate = 0.1;
  int tournament = 3;
  std::uint64_t seed = 0;
  bool seed_spt = true;  // inject the SPT-order chromosome into generation 0
};

// Shortest processing time first: jobs ascending by (p, id), each placed on
// the machine with minimum availability, started at max(r, availability).
Schedule spt_schedule(const Instance& inst);
std::vector<int> spt_order(const Instance& inst);

// Take jobs in chromosome order; each goes to the machine minimizing
// max(r, availability), ties by lowest index. Always feasible.
Schedule decode_chromosome(const Instance& inst, const Chromosome& chrom);

// Two-stage crossover: keep parent1's jobs that start before the cut time
// (in parent1's order), append the rest in parent2's relative order.
Chromosome crossover_with_cut(const Instance& inst, const Chromosome& parent1,
                              const Chromosome& parent2, double cut_time);
// Same, with the cut drawn uniformly from [0, cmax(parent1)].
Chromosome crossover_tsx_lox(const Instance& inst, const Chromosome& parent1,
                             const Chromosome& parent2, Rng& rng);

// With probability pm, swaps two distinct positions.
Chromosome mutate(const Chromosome& chrom, double pm, Rng& rng);

struct GaResult {
  Schedule schedule;
  double cmax = 0;
  std::vector<double> trace;  // best cmax per generation (index 0 = initial pop)
};

GaResult ga_schedule(const Instance& inst, const GaConfig& cfg);

}  // namespace bsched
