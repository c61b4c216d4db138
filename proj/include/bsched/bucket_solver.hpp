#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "bsched/bucket.hpp"
#include "bsched/exact.hpp"

namespace bsched {

struct BucketResult {
  BucketSolution solution;
  double cmax = 0;
  bool proved_bucket_optimal = false;
  std::uint64_t nodes_explored = 0;  // complete assignments evaluated
  double elapsed_s = 0;
  std::optional<double> gap_vs_exact;  // filled by analysis / --with-exact
};

// Branch and bound over per-job (machine, bucket) pairs. Children are
// ordered exact-buckets-first, then by bucket index, machines ascending;
// leaves are evaluated by decode(). Branches are pruned on bucket overflow
// of the partial decode and on the partial lower bound
// max(lower_bound(inst), busiest committed machine) reaching the incumbent.
// The incumbent is warm-started from the projected SPT schedule when that
// projection is bucket-feasible. Intra-bucket sequencing is fixed by the
// decode dispatch rule, which keeps the search space at (m*B)^n instead of
// (B^n * n!).
BucketResult solve_bucket(const Instance& inst, const BucketGrid& grid,
                          const Budget& budget = {});

struct VariableCounts {
  long long time_indexed = 0;   // n * m * (ceil(T) + 1)
  long long bucket_indexed = 0; // n * m * B
  double reduction = 0;         // 1 - bucket/time
};

VariableCounts count_variables(const Instance& inst, const BucketGrid& grid);

enum class MilpForm { time_indexed, bucket_indexed };

// CPLEX-LP text model. form=time materializes binaries x_j_m_t on the
// integral grid t = 0..ceil(T) with assignment/release/makespan/capacity
// rows; form=bucket uses x_j_m_b plus one continuous offset d_j in
// [0, 1 - psi_j] with S_j = sum b*delta*x + delta*d_j. Deterministic row
// and column order; capacity rows with fewer than two terms are omitted.
std::string milp_text(const Instance& inst, const BucketGrid* grid, MilpForm form);
void export_milp(const Instance& inst, const BucketGrid* grid, MilpForm form,
                 const std::string& path);

}  // namespace bsched
