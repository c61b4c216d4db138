#include "bsched/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <numeric>
#include <thread>

#include "bsched/bucket_solver.hpp"
#include "bsched/rng.hpp"

namespace bsched {

ComplexityReport complexity_from_params(int n, double T, double B, double p_ratio) {
  if (n < 1 || T <= 0 || B <= 0 || p_ratio < 1)
    throw input_error("complexity: n, T, B must be positive and p_ratio >= 1");
  ComplexityReport rep;
  rep.log10_time_indexed = n * std::log10(T);
  rep.log10_bucket = n * std::log10(B);
  rep.log10_speedup = rep.log10_time_indexed - rep.log10_bucket;
  rep.log10_assignment = n * std::log10(2.0);
  rep.log10_sequencing = std::lgamma(n + 1.0) / std::log(10.0);
  rep.precision_redundancy = n * std::log(p_ratio) / T;
  return rep;
}

ComplexityReport complexity_report(const Instance& inst, const BucketGrid& grid) {
  return complexity_from_params(inst.n(), inst.T, grid.B,
                                inst.max_p() / inst.min_p());
}

double gap_bound(double kappa, double delta, double cmax_opt, double B) {
  if (cmax_opt <= 0) throw std::domain_error("gap_bound: cmax_opt must be > 0");
  if (kappa <= 0 || delta <= 0 || B <= 0)
    throw std::domain_error("gap_bound: kappa, delta, B must be > 0");
  return 1.0 + kappa * delta / cmax_opt + 1.0 / B;
}

std::string to_string(SizeTier t) {
  switch (t) {
    case SizeTier::small: return "small";
    case SizeTier::medium: return "medium";
    case SizeTier::large: return "large";
  }
  return "?";
}

InstanceFeatures characterize_instance(const Instance& inst) {
  inst.validate();
  InstanceFeatures f;
  const int n = inst.n();

  double mean = 0;
  for (const auto& j : inst.jobs) mean += j.p;
  mean /= n;
  double var = 0;
  for (const auto& j : inst.jobs) var += (j.p - mean) * (j.p - mean);
  f.cv_p = mean > 0 ? std::sqrt(var / n) / mean : 0;

  double r_min = inst.jobs.front().r, r_max = inst.jobs.front().r;
  int concentrated = 0;
  for (const auto& j : inst.jobs) {
    r_min = std::min(r_min, j.r);
    r_max = std::max(r_max, j.r);
    if (j.r <= 0.1 * inst.T + kTimeEps) ++concentrated;
  }
  f.release_span_fraction = (r_max - r_min) / inst.T;
  f.release_concentration = static_cast<double>(concentrated) / n;

  // the unclassified cv band (0.6, 0.8) folds into "high"
  f.cv_class = f.cv_p < 0.3 ? CvClass::low
                            : (f.cv_p <= 0.6 ? CvClass::medium : CvClass::high);
  if (f.release_concentration >= 0.8)
    f.release_class = ReleaseClass::dense;
  else if (f.release_span_fraction > 0.5)
    f.release_class = ReleaseClass::sparse;
  else
    f.release_class = ReleaseClass::moderate;
  f.size_tier = n <= 50 ? SizeTier::small
                        : (n <= 100 ? SizeTier::medium : SizeTier::large);
  return f;
}

namespace {

SweepRow solve_row(const Instance& inst, const BucketGrid& grid,
                   std::optional<double> oracle_cmax, const Budget& budget) {
  SweepRow row;
  row.B = grid.B;
  const BucketResult res = solve_bucket(inst, grid, budget);
  row.elapsed_s = res.elapsed_s;
  if (res.solution.feasible) {
    row.cmax = res.cmax;
    row.utilization = compute_metrics(inst, res.solution.schedule, &grid).utilization;
    if (oracle_cmax && *oracle_cmax > 0)
      row.gap_pct = 100.0 * (res.cmax - *oracle_cmax) / *oracle_cmax;
  } else {
    row.cmax = std::numeric_limits<double>::quiet_NaN();
    row.utilization = 0;
  }
  row.vars = count_variables(inst, grid).bucket_indexed;
  row.log10_speedup = complexity_report(inst, grid).log10_speedup;
  return row;
}

}  // namespace

DeltaSweepResult sweep_delta(const Instance& inst, const std::vector<double>& deltas,
                             std::optional<double> oracle_cmax, const Budget& budget,
                             double eps_gap, std::optional<int> kappa, bool phi) {
  DeltaSweepResult out;
  for (double d : deltas) {
    if (d <= 0) throw input_error("sweep_delta: deltas must be > 0");
    GridOptions opt;
    opt.delta = d;
    opt.kappa = kappa;
    opt.phi = phi;
    opt.allow_single_bucket = true;  // sweeps are allowed to visit the degenerate end
    const BucketGrid grid = build_grid(inst, opt);
    SweepRow row = solve_row(inst, grid, oracle_cmax, budget);
    row.param = d;
    out.rows.push_back(row);
  }

  // precision-aware pick: smallest B whose gap is within eps; ties prefer
  // the coarser grid
  const SweepRow* best = nullptr;
  for (const auto& row : out.rows) {
    if (!row.gap_pct || std::isnan(row.cmax)) continue;
    if (*row.gap_pct > 100.0 * eps_gap + kTimeEps) continue;
    if (!best || row.B < best->B || (row.B == best->B && row.param > best->param))
      best = &row;
  }
  if (!best) {  // fall back to the best-quality row
    for (const auto& row : out.rows) {
      if (std::isnan(row.cmax)) continue;
      const double key_new = row.gap_pct.value_or(row.cmax);
      const double key_old = best ? best->gap_pct.value_or(best->cmax) : 0;
      if (!best || key_new < key_old) best = &row;
    }
  }
  if (best) out.delta_selected = best->param;
  return out;
}

std::vector<SweepRow> sweep_kappa(const Instance& inst, const std::vector<int>& kappas,
                                  std::optional<double> oracle_cmax,
                                  const Budget& budget, std::optional<double> delta,
                                  bool phi) {
  std::vector<SweepRow> rows;
  for (int k : kappas) {
    if (k < 1) throw input_error("sweep_kappa: kappa must be >= 1");
    GridOptions opt;
    opt.delta = delta;
    opt.kappa = k;
    opt.phi = phi;
    const BucketGrid grid = build_grid(inst, opt);
    SweepRow row = solve_row(inst, grid, oracle_cmax, budget);
    row.param = k;
    row.exact_share_pct =
        100.0 * static_cast<double>(grid.exact_buckets.size()) / grid.B;
    row.approx_share_pct =
        100.0 * static_cast<double>(grid.approx_buckets.size()) / grid.B;
    rows.push_back(row);
  }
  return rows;
}

GenSpec tier_genspec(int n, int m, std::uint64_t seed) {
  GenSpec spec;
  spec.n = n;
  spec.m = m;
  spec.p_min = 10;
  spec.p_max = 50;
  spec.cv_target = CvClass::low;
  spec.release_class = ReleaseClass::dense;
  spec.seed = seed;
  return spec;
}

std::vector<TierResult> scalability_run(const std::vector<std::pair<int, int>>& tiers,
                                        int reps, std::uint64_t seed,
                                        const Budget& budget, int exact_guard_n) {
  if (reps < 1) throw input_error("scalability_run: reps must be >= 1");

  struct RepOutcome {
    std::optional<double> gap_pct;
    double util = 0;
    double log10_speedup = 0;
    bool success = false;
    double elapsed = 0;
  };

  std::vector<TierResult> table;
  for (size_t tier_idx = 0; tier_idx < tiers.size(); ++tier_idx) {
    const auto [n, m] = tiers[tier_idx];
    auto run_rep = [&, n = n, m = m](int rep) {
      RepOutcome out;
      const GenSpec spec = tier_genspec(
          n, m, mix_seed(seed, tier_idx * 1000 + static_cast<size_t>(rep)));
      const Instance inst = generate_instance(spec);
      const BucketGrid grid = build_grid(inst);
      const BucketResult bucket = solve_bucket(inst, grid, budget);
      out.success = bucket.proved_bucket_optimal && bucket.solution.feasible;
      out.elapsed = bucket.elapsed_s;
      out.log10_speedup = complexity_report(inst, grid).log10_speedup;
      if (bucket.solution.feasible)
        out.util =
            compute_metrics(inst, bucket.solution.schedule, &grid).utilization;
      if (n <= exact_guard_n) {
        const ExactResult exact = solve_exact(inst, budget);
        if (exact.proved_optimal && bucket.solution.feasible && exact.cmax > 0)
          out.gap_pct = 100.0 * (bucket.cmax - exact.cmax) / exact.cmax;
      }
      return out;
    };

    // reps are independent; run them on a small pool, aggregate in order
    std::vector<RepOutcome> outcomes(static_cast<size_t>(reps));
    const unsigned workers =
        std::max(1u, std::min(std::thread::hardware_concurrency(), 8u));
    for (int base = 0; base < reps; base += static_cast<int>(workers)) {
      std::vector<std::future<RepOutcome>> futs;
      for (int rep = base; rep < std::min(reps, base + static_cast<int>(workers));
           ++rep)
        futs.push_back(std::async(std::launch::async, run_rep, rep));
      for (size_t k = 0; k < futs.size(); ++k)
        outcomes[static_cast<size_t>(base) + k] = futs[k].get();
    }

    TierResult tier;
    tier.n = n;
    tier.m = m;
    tier.reps = reps;
    for (const auto& o : outcomes) {
      if (o.gap_pct) {
        tier.gap_pct_mean += *o.gap_pct;
        ++tier.gap_count;
      }
      tier.util_mean += o.util;
      tier.log10_speedup_mean += o.log10_speedup;
      tier.success_rate_pct += o.success ? 100.0 : 0.0;
      tier.elapsed_mean_s += o.elapsed;
    }
    if (tier.gap_count > 0) tier.gap_pct_mean /= tier.gap_count;
    tier.util_mean /= reps;
    tier.log10_speedup_mean /= reps;
    tier.success_rate_pct /= reps;
    tier.elapsed_mean_s /= reps;
    table.push_back(tier);
  }
  return table;
}

}  // namespace bsched
