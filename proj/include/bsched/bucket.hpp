#pragma once

#include <optional>
#include <vector>

#include "bsched/core.hpp"

namespace bsched {

// Temporal discretization of [0, T] into B = floor(T/delta) + 1 buckets of
// width delta. kappa partitions bucket indices into exact anchors
// (b mod kappa == 0) and approximate buckets. psi_j = p_j / sum_k p_k is the
// per-job precision sensitivity; the offset map clamps intra-bucket
// positions to [0, 1 - psi_j], reserving the top psi_j slice.
struct BucketGrid {
  double T = 0;
  double delta = 1;
  int B = 1;
  int kappa = 1;
  std::vector<double> psi;          // one per job, sums to 1
  std::vector<int> exact_buckets;   // {b : b mod kappa == 0}
  std::vector<int> approx_buckets;  // complement within [0, B)
  bool phi_enabled = true;          // --no-phi ablation sets psi -> 0 in range checks

  bool is_exact(int b) const { return b % kappa == 0; }
  // Upper bound on the intra-bucket start fraction for a job.
  double offset_cap(int job) const { return phi_enabled ? 1.0 - psi[static_cast<size_t>(job)] : 1.0; }
  // Latest admissible start inside bucket b for a job.
  double bucket_deadline(int job, int b) const { return (b + offset_cap(job)) * delta; }
};

struct GridOptions {
  std::optional<double> delta;  // default: geometric mean of processing times
  std::optional<int> kappa;     // default: ceil(log2(max p / min p)), >= 1
  bool allow_single_bucket = false;
  bool phi = true;
};

double default_delta(const Instance& inst);  // (prod p_j)^(1/n)
int default_kappa(const Instance& inst);     // ceil(log2(max p / min p)), clamped to >= 1

// Throws refusal_error when delta > T without allow_single_bucket, and
// input_error for nonpositive delta / kappa < 1.
BucketGrid build_grid(const Instance& inst, const GridOptions& opt = {});

struct BucketCoord {
  int bucket = 0;
  double offset = 0;  // compressed fraction, in [0, 1 - psi_j]
};

// Bucket transform of a time point for a given job: index floor(t/delta)
// plus the clamped intra-bucket fraction. Throws std::domain_error outside
// [0, T].
BucketCoord bucket_of(const BucketGrid& grid, double t, int job);

// profile[b] - profile[b-1]; throws std::domain_error for b <= 0 or out of
// range.
double bucket_difference(const std::vector<double>& profile, int b);

struct JobPlacement {
  int machine = -1;  // -1 = unassigned (partial assignments during search)
  int bucket = 0;
  double delta1 = 0;  // in [0, alpha_j], alpha_j = (1 - psi_j)/2
  double delta2 = 0;  // in [0, beta_j],  beta_j  = (1 - psi_j)/2
};

struct BucketAssignment {
  std::vector<JobPlacement> placements;  // indexed by job id

  static BucketAssignment empty(int n);
  bool complete() const;
};

struct BucketSolution {
  BucketAssignment assignment;
  Schedule schedule;      // decoded start times (assigned jobs only)
  bool feasible = false;  // all assigned jobs start inside their bucket window
  int offending_job = -1; // first job pushed past its bucket deadline
  double cmax = 0;
};

// Recovers start times from a (machine, bucket) assignment. Per machine,
// jobs run in (bucket, release, processing time, id) order; each start is
// max(release, bucket anchor, predecessor completion). A start past
// (b + 1 - psi_j) * delta makes the assignment bucket-infeasible; that is
// reported as data, not an error. Offsets delta1/delta2 are recovered by
// splitting the start fraction at alpha_j.
BucketSolution decode(const Instance& inst, const BucketGrid& grid,
                      const BucketAssignment& asn);

struct ProjectionResult {
  BucketSolution solution;
  double makespan_delta = 0;            // decoded cmax - original cmax
  double max_displacement = 0;          // max_j (original start - decoded start)
  std::vector<double> displacement;     // per job, always in [0, delta)
};

// Maps a feasible schedule into bucket space: keeps machines, sets
// b_j = floor(S_j/delta), then re-decodes with each machine's job order
// taken from the original starts. Feasible input only.
ProjectionResult project_schedule(const Instance& inst, const BucketGrid& grid,
                                  const Schedule& sched);

}  // namespace bsched
