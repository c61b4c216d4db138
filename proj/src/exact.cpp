#include "bsched/exact.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>

#include "bsched/heuristics.hpp"

namespace bsched {

namespace {

constexpr double kPruneEps = 1e-12;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

// Jobs in earliest-release order (ties by id); the branching order of both
// exact searches.
std::vector<int> release_order(const Instance& inst) {
  std::vector<int> order(static_cast<size_t>(inst.n()));
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    const Job& ja = inst.jobs[static_cast<size_t>(a)];
    const Job& jb = inst.jobs[static_cast<size_t>(b)];
    if (ja.r != jb.r) return ja.r < jb.r;
    return a < b;
  });
  return order;
}

// Greedy timing of a fixed per-machine sequence.
Schedule schedule_from_sequences(const Instance& inst,
                                 const std::vector<std::vector<int>>& seqs) {
  Schedule sched;
  for (int mach = 0; mach < static_cast<int>(seqs.size()); ++mach) {
    double avail = 0;
    for (int id : seqs[static_cast<size_t>(mach)]) {
      const Job& job = inst.jobs[static_cast<size_t>(id)];
      const double start = std::max(job.r, avail);
      sched.entries.push_back({id, mach, start});
      avail = quantize6(start + job.p);
    }
  }
  std::sort(sched.entries.begin(), sched.entries.end(),
            [](const ScheduleEntry& a, const ScheduleEntry& b) {
              return a.job_id < b.job_id;
            });
  return sched;
}

}  // namespace

double lower_bound(const Instance& inst) {
  double bound = inst.total_p() / inst.m;
  for (const auto& j : inst.jobs) bound = std::max(bound, j.r + j.p);
  return bound;
}

ExactResult brute_force(const Instance& inst, int guard_max_n) {
  inst.validate();
  const int n = inst.n();
  if (n > guard_max_n)
    throw refusal_error("brute_force: n = " + std::to_string(n) +
                        " exceeds the oracle guard (" + std::to_string(guard_max_n) +
                        "); raise the guard explicitly to force it");

  const auto t0 = Clock::now();
  const int full = 1 << n;

  // dp[mask]: optimal single-machine makespan of the job set `mask`,
  // minimized over every processing order; last[mask] reconstructs one.
  std::vector<double> dp(static_cast<size_t>(full),
                         std::numeric_limits<double>::infinity());
  std::vector<int> last(static_cast<size_t>(full), -1);
  dp[0] = 0;
  for (int mask = 1; mask < full; ++mask) {
    for (int j = 0; j < n; ++j) {
      if (!(mask & (1 << j))) continue;
      const Job& job = inst.jobs[static_cast<size_t>(j)];
      const double c =
          quantize6(std::max(dp[static_cast<size_t>(mask ^ (1 << j))], job.r) + job.p);
      if (c < dp[static_cast<size_t>(mask)]) {
        dp[static_cast<size_t>(mask)] = c;
        last[static_cast<size_t>(mask)] = j;
      }
    }
  }

  // Enumerate machine assignments job by job; machines are identical, so
  // each job may only open the next unused machine (first-use order).
  ExactResult res;
  res.lower_bound_at_root = lower_bound(inst);
  res.cmax = std::numeric_limits<double>::infinity();
  std::vector<int> masks(static_cast<size_t>(inst.m), 0);
  std::vector<int> best_masks;
  std::uint64_t leaves = 0;

  auto dfs = [&](auto&& self, int job, int used) -> void {
    if (job == n) {
      ++leaves;
      double cmax = 0;
      for (int mach = 0; mach < inst.m; ++mach)
        cmax = std::max(cmax, dp[static_cast<size_t>(masks[static_cast<size_t>(mach)])]);
      if (cmax < res.cmax) {
        res.cmax = cmax;
        best_masks.assign(masks.begin(), masks.end());
      }
      return;
    }
    const int limit = std::min(inst.m - 1, used);
    for (int mach = 0; mach <= limit; ++mach) {
      masks[static_cast<size_t>(mach)] |= 1 << job;
      self(self, job + 1, std::max(used, mach + 1));
      masks[static_cast<size_t>(mach)] &= ~(1 << job);
    }
  };
  dfs(dfs, 0, 0);

  std::vector<std::vector<int>> seqs(static_cast<size_t>(inst.m));
  for (int mach = 0; mach < inst.m; ++mach) {
    std::vector<int> rev;
    for (int mask = best_masks[static_cast<size_t>(mach)]; mask != 0;) {
      const int j = last[static_cast<size_t>(mask)];
      rev.push_back(j);
      mask ^= 1 << j;
    }
    seqs[static_cast<size_t>(mach)].assign(rev.rbegin(), rev.rend());
  }
  res.schedule = canonicalize_schedule(inst, schedule_from_sequences(inst, seqs));
  res.proved_optimal = true;
  res.nodes_explored = leaves;
  res.elapsed_s = seconds_since(t0);
  return res;
}

ExactResult solve_exact(const Instance& inst, const Budget& budget) {
  inst.validate();
  const auto t0 = Clock::now();
  const int n = inst.n();
  const int m = inst.m;
  const std::vector<int> order = release_order(inst);

  // suffix data over the branching order, for the partial bound
  std::vector<double> suffix_p(static_cast<size_t>(n) + 1, 0.0);
  std::vector<double> suffix_rp(static_cast<size_t>(n) + 1, 0.0);
  for (int k = n - 1; k >= 0; --k) {
    const Job& job = inst.jobs[static_cast<size_t>(order[static_cast<size_t>(k)])];
    suffix_p[static_cast<size_t>(k)] = suffix_p[static_cast<size_t>(k) + 1] + job.p;
    suffix_rp[static_cast<size_t>(k)] =
        std::max(suffix_rp[static_cast<size_t>(k) + 1], job.r + job.p);
  }

  ExactResult res;
  res.lower_bound_at_root = lower_bound(inst);

  const Schedule spt = spt_schedule(inst);
  res.schedule = spt;
  res.cmax = cmax_of(inst, spt);

  std::vector<double> avail(static_cast<size_t>(m), 0.0);
  std::vector<int> assigned(static_cast<size_t>(n), 0);  // branching index -> machine
  std::vector<int> best_assigned;
  std::uint64_t nodes = 0;
  bool aborted = false;

  if (res.cmax <= res.lower_bound_at_root + kPruneEps) {
    // incumbent already meets the root bound
    res.proved_optimal = true;
    res.elapsed_s = seconds_since(t0);
    return res;
  }

  auto dfs = [&](auto&& self, int k, int used) -> void {
    if (aborted) return;
    if (k == n) {
      const double cmax = *std::max_element(avail.begin(), avail.end());
      if (cmax < res.cmax - kPruneEps) {
        res.cmax = cmax;
        best_assigned.assign(assigned.begin(), assigned.end());
      }
      return;
    }
    const Job& job = inst.jobs[static_cast<size_t>(order[static_cast<size_t>(k)])];
    const int limit = std::min(m - 1, used);
    for (int mach = 0; mach <= limit; ++mach) {
      // identical availability means an identical subtree
      bool dominated = false;
      for (int prev = 0; prev < mach; ++prev)
        if (avail[static_cast<size_t>(prev)] == avail[static_cast<size_t>(mach)]) {
          dominated = true;
          break;
        }
      if (dominated) continue;

      if (++nodes >= budget.max_nodes ||
          ((nodes & 1023) == 0 && seconds_since(t0) > budget.time_limit_s)) {
        aborted = true;
        return;
      }

      const double saved = avail[static_cast<size_t>(mach)];
      avail[static_cast<size_t>(mach)] = quantize6(std::max(job.r, saved) + job.p);
      assigned[static_cast<size_t>(k)] = mach;

      double total_avail = 0, max_avail = 0;
      for (double a : avail) {
        total_avail += a;
        max_avail = std::max(max_avail, a);
      }
      const double bound =
          std::max({max_avail,
                    (total_avail + suffix_p[static_cast<size_t>(k) + 1]) / m,
                    suffix_rp[static_cast<size_t>(k) + 1]});
      if (bound < res.cmax - kPruneEps)
        self(self, k + 1, std::max(used, mach + 1));
      avail[static_cast<size_t>(mach)] = saved;
      if (aborted) return;
    }
  };
  dfs(dfs, 0, 0);

  if (!best_assigned.empty()) {
    std::vector<std::vector<int>> seqs(static_cast<size_t>(m));
    for (int k = 0; k < n; ++k)
      seqs[static_cast<size_t>(best_assigned[static_cast<size_t>(k)])].push_back(
          order[static_cast<size_t>(k)]);
    res.schedule = schedule_from_sequences(inst, seqs);
  }
  res.schedule = canonicalize_schedule(inst, res.schedule);
  res.proved_optimal = !aborted;
  res.nodes_explored = nodes;
  res.elapsed_s = seconds_since(t0);
  return res;
}

}  // namespace bsched
