#pragma once

#include <cstdint>
#include <vector>

#include "bsched/core.hpp"

namespace bsched {

struct Budget {
  std::uint64_t max_nodes = 10'000'000;
  double time_limit_s = 60.0;
};

// max( sum_j p_j / m , max_j (r_j + p_j) )
double lower_bound(const Instance& inst);

struct ExactResult {
  Schedule schedule;
  double cmax = 0;
  bool proved_optimal = false;
  std::uint64_t nodes_explored = 0;
  double elapsed_s = 0;
  double lower_bound_at_root = 0;
};

// Exhaustive oracle: every machine assignment (m^n leaves) crossed with
// every per-machine order, the latter enumerated implicitly by a
// subset DP (optimal completion of a job set = min over last jobs).
// Greedy timing for a fixed assignment+order is optimal, so the discrete
// enumeration covers the full solution space. Refuses n > guard.
ExactResult brute_force(const Instance& inst, int guard_max_n = 10);

// Depth-first branch and bound. Jobs are committed in earliest-release
// order, one machine choice per level (per-machine ERD order is optimal
// for makespan, so machine choice is the only discrete decision).
// Machine symmetry is broken by first-use order. Pruning against the
// incumbent uses max(mean remaining load, busiest machine, latest
// remaining r_j + p_j). Incumbent is seeded with SPT.
ExactResult solve_exact(const Instance& inst, const Budget& budget = {});

}  // namespace bsched
