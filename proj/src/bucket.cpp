#include "bsched/bucket.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace bsched {

namespace {

// ceil with a snap so that values a hair above an integer (float noise on
// an intended exact power) do not bump up a whole step.
int ceil_snapped(double x) {
  const double r = std::round(x);
  if (std::abs(x - r) < 1e-9) return static_cast<int>(r);
  return static_cast<int>(std::ceil(x));
}

// Splits t into (bucket, fraction) on a grid of width delta, snapping to
// the boundary when t/delta sits within tolerance of an integer.
void split_time(double t, double delta, int* bucket, double* fraction) {
  const double q = t / delta;
  const double r = std::round(q);
  if (std::abs(q - r) < 1e-9 * std::max(1.0, std::abs(q))) {
    *bucket = static_cast<int>(r);
    *fraction = 0.0;
    return;
  }
  *bucket = static_cast<int>(std::floor(q));
  *fraction = q - std::floor(q);
}

}  // namespace

double default_delta(const Instance& inst) {
  double acc = 0;
  for (const auto& j : inst.jobs) acc += std::log(j.p);
  return std::exp(acc / inst.n());
}

int default_kappa(const Instance& inst) {
  const double ratio = inst.max_p() / inst.min_p();
  return std::max(1, ceil_snapped(std::log2(ratio)));
}

BucketGrid build_grid(const Instance& inst, const GridOptions& opt) {
  inst.validate();
  BucketGrid grid;
  grid.T = inst.T;
  grid.delta = opt.delta.value_or(default_delta(inst));
  grid.kappa = opt.kappa.value_or(default_kappa(inst));
  grid.phi_enabled = opt.phi;

  if (grid.delta <= 0) throw input_error("grid: delta must be > 0");
  if (grid.kappa < 1) throw input_error("grid: kappa must be >= 1");
  if (grid.delta > grid.T && !opt.allow_single_bucket)
    throw refusal_error("grid: delta " + format_num(grid.delta) + " exceeds horizon " +
                        format_num(grid.T) +
                        " (single-bucket grid; pass the override to allow it)");

  grid.B = static_cast<int>(std::floor(grid.T / grid.delta)) + 1;

  const double total = inst.total_p();
  grid.psi.resize(static_cast<size_t>(inst.n()));
  for (int i = 0; i < inst.n(); ++i)
    grid.psi[static_cast<size_t>(i)] = inst.jobs[static_cast<size_t>(i)].p / total;

  for (int b = 0; b < grid.B; ++b)
    (grid.is_exact(b) ? grid.exact_buckets : grid.approx_buckets).push_back(b);
  return grid;
}

BucketCoord bucket_of(const BucketGrid& grid, double t, int job) {
  if (t < -kTimeEps || t > grid.T + kTimeEps)
    throw std::domain_error("bucket_of: t = " + format_num(t) + " outside [0, " +
                            format_num(grid.T) + "]");
  t = std::clamp(t, 0.0, grid.T);
  BucketCoord c;
  double f = 0;
  split_time(t, grid.delta, &c.bucket, &f);
  if (c.bucket >= grid.B) {  // t == T on an exact boundary
    c.bucket = grid.B - 1;
    f = t / grid.delta - c.bucket;
  }
  c.offset = std::min(f, grid.offset_cap(job));
  return c;
}

double bucket_difference(const std::vector<double>& profile, int b) {
  if (b < 1 || b >= static_cast<int>(profile.size()))
    throw std::domain_error("bucket_difference: index " + std::to_string(b) +
                            " out of range [1, " + std::to_string(profile.size()) + ")");
  return profile[static_cast<size_t>(b)] - profile[static_cast<size_t>(b - 1)];
}

BucketAssignment BucketAssignment::empty(int n) {
  BucketAssignment a;
  a.placements.assign(static_cast<size_t>(n), JobPlacement{});
  return a;
}

bool BucketAssignment::complete() const {
  return std::all_of(placements.begin(), placements.end(),
                     [](const JobPlacement& p) { return p.machine >= 0; });
}

namespace {

struct MachineQueue {
  std::vector<int> jobs;  // processing order
};

// Shared decode core: per machine, walk jobs in `order`, chain starts, check
// the bucket window, recover the offset split.
BucketSolution decode_ordered(const Instance& inst, const BucketGrid& grid,
                              const BucketAssignment& asn,
                              const std::vector<MachineQueue>& queues) {
  BucketSolution sol;
  sol.assignment = asn;
  sol.feasible = true;
  for (int mach = 0; mach < inst.m; ++mach) {
    double avail = 0;
    for (int id : queues[static_cast<size_t>(mach)].jobs) {
      const Job& job = inst.jobs[static_cast<size_t>(id)];
      JobPlacement& pl = sol.assignment.placements[static_cast<size_t>(id)];
      const double anchor = pl.bucket * grid.delta;
      // Start times live on the 1e-6 time grid like every other time value,
      // so makespans stay exactly comparable across solvers; the anchor is
      // snapped upward onto the grid.
      const double start = std::max({job.r, quantize6_up(anchor), avail});
      const double deadline = grid.bucket_deadline(id, pl.bucket);
      if (start > deadline + kTimeEps && sol.feasible) {
        sol.feasible = false;
        sol.offending_job = id;
      }
      const double cap = grid.offset_cap(id);
      const double alpha = cap / 2;
      const double f = std::clamp((start - anchor) / grid.delta, 0.0, cap);
      pl.delta1 = std::min(f, alpha);
      pl.delta2 = f - pl.delta1;
      sol.schedule.entries.push_back({id, mach, start});
      avail = quantize6(start + job.p);
      sol.cmax = std::max(sol.cmax, avail);
    }
  }
  std::sort(sol.schedule.entries.begin(), sol.schedule.entries.end(),
            [](const ScheduleEntry& a, const ScheduleEntry& b) {
              return a.job_id < b.job_id;
            });
  return sol;
}

}  // namespace

BucketSolution decode(const Instance& inst, const BucketGrid& grid,
                      const BucketAssignment& asn) {
  std::vector<MachineQueue> queues(static_cast<size_t>(inst.m));
  for (int id = 0; id < inst.n(); ++id) {
    const JobPlacement& pl = asn.placements[static_cast<size_t>(id)];
    if (pl.machine < 0) continue;
    queues[static_cast<size_t>(pl.machine)].jobs.push_back(id);
  }
  // dispatch rule: bucket, then earliest release, shortest p, lowest id
  for (auto& q : queues)
    std::sort(q.jobs.begin(), q.jobs.end(), [&](int a, int b) {
      const auto& pa = asn.placements[static_cast<size_t>(a)];
      const auto& pb = asn.placements[static_cast<size_t>(b)];
      if (pa.bucket != pb.bucket) return pa.bucket < pb.bucket;
      const Job& ja = inst.jobs[static_cast<size_t>(a)];
      const Job& jb = inst.jobs[static_cast<size_t>(b)];
      if (ja.r != jb.r) return ja.r < jb.r;
      if (ja.p != jb.p) return ja.p < jb.p;
      return a < b;
    });
  return decode_ordered(inst, grid, asn, queues);
}

ProjectionResult project_schedule(const Instance& inst, const BucketGrid& grid,
                                  const Schedule& sched) {
  const double original_cmax = cmax_of(inst, sched);

  BucketAssignment asn = BucketAssignment::empty(inst.n());
  std::vector<MachineQueue> queues(static_cast<size_t>(inst.m));
  std::vector<const ScheduleEntry*> by_start;
  for (const auto& e : sched.entries) by_start.push_back(&e);
  std::sort(by_start.begin(), by_start.end(),
            [](const ScheduleEntry* a, const ScheduleEntry* b) {
              if (a->start != b->start) return a->start < b->start;
              return a->job_id < b->job_id;
            });
  std::vector<double> original_start(static_cast<size_t>(inst.n()), 0.0);
  for (const ScheduleEntry* e : by_start) {
    BucketCoord c = bucket_of(grid, e->start, e->job_id);
    asn.placements[static_cast<size_t>(e->job_id)] = {e->machine, c.bucket, 0, 0};
    queues[static_cast<size_t>(e->machine)].jobs.push_back(e->job_id);
    original_start[static_cast<size_t>(e->job_id)] = e->start;
  }

  ProjectionResult res;
  res.solution = decode_ordered(inst, grid, asn, queues);
  res.makespan_delta = res.solution.cmax - original_cmax;
  res.displacement.assign(static_cast<size_t>(inst.n()), 0.0);
  for (const auto& e : res.solution.schedule.entries) {
    const double d = original_start[static_cast<size_t>(e.job_id)] - e.start;
    res.displacement[static_cast<size_t>(e.job_id)] = d;
    res.max_displacement = std::max(res.max_displacement, std::abs(d));
  }
  return res;
}

}  // namespace bsched
