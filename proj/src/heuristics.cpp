#include "bsched/heuristics.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

namespace bsched {

std::vector<int> spt_order(const Instance& inst) {
  std::vector<int> order(static_cast<size_t>(inst.n()));
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    const double pa = inst.jobs[static_cast<size_t>(a)].p;
    const double pb = inst.jobs[static_cast<size_t>(b)].p;
    if (pa != pb) return pa < pb;
    return a < b;
  });
  return order;
}

Schedule spt_schedule(const Instance& inst) {
  std::vector<double> avail(static_cast<size_t>(inst.m), 0.0);
  Schedule sched;
  for (int id : spt_order(inst)) {
    const int mach = static_cast<int>(
        std::min_element(avail.begin(), avail.end()) - avail.begin());
    const Job& job = inst.jobs[static_cast<size_t>(id)];
    const double start = std::max(job.r, avail[static_cast<size_t>(mach)]);
    sched.entries.push_back({id, mach, start});
    // completions stay on the 1e-6 time grid; see core.cpp quantize6
    avail[static_cast<size_t>(mach)] = quantize6(start + job.p);
  }
  std::sort(sched.entries.begin(), sched.entries.end(),
            [](const ScheduleEntry& a, const ScheduleEntry& b) {
              return a.job_id < b.job_id;
            });
  return sched;
}

Schedule decode_chromosome(const Instance& inst, const Chromosome& chrom) {
  std::vector<double> avail(static_cast<size_t>(inst.m), 0.0);
  Schedule sched;
  for (int id : chrom) {
    const Job& job = inst.jobs[static_cast<size_t>(id)];
    int best = 0;
    double best_start = std::numeric_limits<double>::infinity();
    for (int mach = 0; mach < inst.m; ++mach) {
      const double s = std::max(job.r, avail[static_cast<size_t>(mach)]);
      if (s < best_start) {
        best_start = s;
        best = mach;
      }
    }
    sched.entries.push_back({id, best, best_start});
    avail[static_cast<size_t>(best)] = quantize6(best_start + job.p);
  }
  std::sort(sched.entries.begin(), sched.entries.end(),
            [](const ScheduleEntry& a, const ScheduleEntry& b) {
              return a.job_id < b.job_id;
            });
  return sched;
}

namespace {

void check_same_jobs(const Chromosome& a, const Chromosome& b) {
  Chromosome sa = a, sb = b;
  std::sort(sa.begin(), sa.end());
  std::sort(sb.begin(), sb.end());
  if (sa != sb) throw input_error("crossover: parents permute different job sets");
}

}  // namespace

Chromosome crossover_with_cut(const Instance& inst, const Chromosome& parent1,
                              const Chromosome& parent2, double cut_time) {
  check_same_jobs(parent1, parent2);
  const Schedule s1 = decode_chromosome(inst, parent1);
  std::vector<bool> keep(static_cast<size_t>(inst.n()), false);
  for (const auto& e : s1.entries)
    if (e.start < cut_time) keep[static_cast<size_t>(e.job_id)] = true;

  Chromosome child;
  child.reserve(parent1.size());
  for (int id : parent1)
    if (keep[static_cast<size_t>(id)]) child.push_back(id);
  for (int id : parent2)
    if (!keep[static_cast<size_t>(id)]) child.push_back(id);
  return child;
}

Chromosome crossover_tsx_lox(const Instance& inst, const Chromosome& parent1,
                             const Chromosome& parent2, Rng& rng) {
  const double cmax = cmax_of(inst, decode_chromosome(inst, parent1));
  return crossover_with_cut(inst, parent1, parent2, rng.uniform(0.0, cmax));
}

Chromosome mutate(const Chromosome& chrom, double pm, Rng& rng) {
  Chromosome out = chrom;
  if (out.size() < 2) return out;
  if (rng.uniform() < pm) {
    const int n = static_cast<int>(out.size());
    const int i = rng.uniform_int(0, n - 1);
    int j = rng.uniform_int(0, n - 2);
    if (j >= i) ++j;
    std::swap(out[static_cast<size_t>(i)], out[static_cast<size_t>(j)]);
  }
  return out;
}

GaResult ga_schedule(const Instance& inst, const GaConfig& cfg) {
  if (cfg.population < 2) throw input_error("ga: population must be >= 2");
  if (cfg.generations < 1) throw input_error("ga: generations must be >= 1");

  Rng rng(cfg.seed);
  const int n = inst.n();
  const int pop_size = cfg.population;

  struct Member {
    Chromosome chrom;
    double fitness;
  };
  auto evaluate = [&](const Chromosome& c) {
    return cmax_of(inst, decode_chromosome(inst, c));
  };
  // fitness first, chromosome lexicographic as the deterministic tie-break
  auto better = [](const Member& a, const Member& b) {
    if (a.fitness != b.fitness) return a.fitness < b.fitness;
    return a.chrom < b.chrom;
  };

  std::vector<Member> pop;
  pop.reserve(static_cast<size_t>(pop_size));
  Chromosome base(static_cast<size_t>(n));
  std::iota(base.begin(), base.end(), 0);
  for (int k = 0; k < pop_size; ++k) {
    Chromosome c = (k == 0 && cfg.seed_spt) ? spt_order(inst) : base;
    if (!(k == 0 && cfg.seed_spt)) rng.shuffle(c);
    pop.push_back({c, evaluate(c)});
  }

  auto best_of = [&]() {
    return *std::min_element(pop.begin(), pop.end(), better);
  };

  GaResult result;
  result.trace.push_back(best_of().fitness);

  auto tournament = [&]() -> const Member& {
    int winner = rng.uniform_int(0, pop_size - 1);
    for (int k = 1; k < cfg.tournament; ++k) {
      const int cand = rng.uniform_int(0, pop_size - 1);
      if (better(pop[static_cast<size_t>(cand)], pop[static_cast<size_t>(winner)]))
        winner = cand;
    }
    return pop[static_cast<size_t>(winner)];
  };

  for (int g = 0; g < cfg.generations; ++g) {
    std::vector<Member> offspring;
    offspring.reserve(static_cast<size_t>(pop_size));
    for (int k = 0; k < pop_size; ++k) {
      const Member& a = tournament();
      const Member& b = tournament();
      Chromosome child = (rng.uniform() < cfg.crossover_rate)
                             ? crossover_tsx_lox(inst, a.chrom, b.chrom, rng)
                             : a.chrom;
      child = mutate(child, cfg.mutation_rate, rng);
      offspring.push_back({std::move(child), 0});
      offspring.back().fitness = evaluate(offspring.back().chrom);
    }
    // elitist survival: best P of parents plus offspring
    pop.insert(pop.end(), std::make_move_iterator(offspring.begin()),
               std::make_move_iterator(offspring.end()));
    std::sort(pop.begin(), pop.end(), better);
    pop.resize(static_cast<size_t>(pop_size));
    result.trace.push_back(pop.front().fitness);
  }

  result.schedule = decode_chromosome(inst, pop.front().chrom);
  result.cmax = pop.front().fitness;
  return result;
}

}  // namespace bsched
