#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "bsched/bucket.hpp"
#include "bsched/exact.hpp"

namespace bsched {

// All search-space accounting lives in the log10 domain to stay finite.
struct ComplexityReport {
  double log10_time_indexed = 0;   // n * log10(T)
  double log10_bucket = 0;         // n * log10(B)
  double log10_speedup = 0;        // difference of the two
  double log10_assignment = 0;     // n * log10(2)
  double log10_sequencing = 0;     // log10(n!)
  double precision_redundancy = 0; // n * ln(max p / min p) / T
};

ComplexityReport complexity_report(const Instance& inst, const BucketGrid& grid);
// B may be fractional here; used to reproduce reported arithmetic verbatim.
ComplexityReport complexity_from_params(int n, double T, double B,
                                        double p_ratio = 1.0);

// Certified ratio ceiling 1 + kappa*delta/cmax_opt + 1/B.
double gap_bound(double kappa, double delta, double cmax_opt, double B);

enum class SizeTier { small, medium, large };
std::string to_string(SizeTier t);

struct InstanceFeatures {
  double cv_p = 0;                  // population sigma(p) / mean(p)
  double release_span_fraction = 0; // (max r - min r) / T
  double release_concentration = 0; // share of jobs with r <= 0.1 T
  CvClass cv_class = CvClass::low;
  ReleaseClass release_class = ReleaseClass::moderate;
  SizeTier size_tier = SizeTier::small;
};

InstanceFeatures characterize_instance(const Instance& inst);

struct SweepRow {
  double param = 0;  // delta or kappa
  int B = 0;
  double cmax = 0;
  std::optional<double> gap_pct;  // vs oracle, when known
  double utilization = 0;
  double elapsed_s = 0;
  long long vars = 0;            // delta sweep
  double exact_share_pct = 0;    // kappa sweep
  double approx_share_pct = 0;
  double log10_speedup = 0;
};

struct DeltaSweepResult {
  std::vector<SweepRow> rows;
  // Smallest-B delta whose gap stays within eps of the oracle; the realized
  // precision-aware pick over the sweep set. Falls back to the min-gap row
  // when nothing qualifies, min-cmax when no oracle is known.
  std::optional<double> delta_selected;
};

DeltaSweepResult sweep_delta(const Instance& inst, const std::vector<double>& deltas,
                             std::optional<double> oracle_cmax, const Budget& budget = {},
                             double eps_gap = 0.05, std::optional<int> kappa = {},
                             bool phi = true);

std::vector<SweepRow> sweep_kappa(const Instance& inst, const std::vector<int>& kappas,
                                  std::optional<double> oracle_cmax,
                                  const Budget& budget = {},
                                  std::optional<double> delta = {}, bool phi = true);

struct TierResult {
  int n = 0;
  int m = 0;
  int reps = 0;
  int gap_count = 0;  // reps where the exact oracle completed
  double gap_pct_mean = 0;
  double util_mean = 0;
  double log10_speedup_mean = 0;
  double success_rate_pct = 0;  // share of reps proved bucket-optimal in budget
  double elapsed_mean_s = 0;
};

// One row per (n, m) tier; instances drawn with the benchmark defaults
// (p in [10, 50], low cv, dense releases), seeds derived from `seed`.
// The gap column is computed only where the exact solve proves optimality
// within the guard.
std::vector<TierResult> scalability_run(const std::vector<std::pair<int, int>>& tiers,
                                        int reps, std::uint64_t seed,
                                        const Budget& budget = {},
                                        int exact_guard_n = 12);

GenSpec tier_genspec(int n, int m, std::uint64_t seed);

}  // namespace bsched
