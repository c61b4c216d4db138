#include "bsched/bucket_solver.hpp"

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

}  // namespace

BucketResult solve_bucket(const Instance& inst, const BucketGrid& grid,
                          const Budget& budget) {
  inst.validate();
  const auto t0 = Clock::now();
  const int n = inst.n();
  const int m = inst.m;
  const std::vector<int> order = release_order(inst);
  const double root_lb = lower_bound(inst);

  // candidate buckets per job: exact anchors first, then approximate,
  // both ascending; buckets whose window closes before the release are out
  std::vector<std::vector<int>> candidates(static_cast<size_t>(n));
  for (int id = 0; id < n; ++id) {
    auto& list = candidates[static_cast<size_t>(id)];
    const double r = inst.jobs[static_cast<size_t>(id)].r;
    for (int b : grid.exact_buckets)
      if (grid.bucket_deadline(id, b) + kTimeEps >= r) list.push_back(b);
    const size_t exact_count = list.size();
    for (int b : grid.approx_buckets)
      if (grid.bucket_deadline(id, b) + kTimeEps >= r) list.push_back(b);
    std::sort(list.begin(), list.begin() + static_cast<std::ptrdiff_t>(exact_count));
    std::sort(list.begin() + static_cast<std::ptrdiff_t>(exact_count), list.end());
  }

  BucketResult res;
  res.cmax = std::numeric_limits<double>::infinity();
  res.solution.feasible = false;

  // warm start: SPT projected into the grid, re-decoded under the solver's
  // dispatch semantics
  {
    const ProjectionResult proj = project_schedule(inst, grid, spt_schedule(inst));
    if (proj.solution.feasible) {
      BucketSolution warm = decode(inst, grid, proj.solution.assignment);
      if (warm.feasible) {
        res.solution = warm;
        res.cmax = warm.cmax;
      }
    }
  }

  BucketAssignment asn = BucketAssignment::empty(n);
  std::uint64_t expansions = 0;  // work counter, limited by the budget
  std::uint64_t leaves = 0;      // complete assignments evaluated
  bool aborted = false;

  auto dfs = [&](auto&& self, int k, int used) -> void {
    if (aborted) return;
    const int id = order[static_cast<size_t>(k)];
    const int machine_limit = std::min(m - 1, used);
    for (int b : candidates[static_cast<size_t>(id)]) {
      for (int mach = 0; mach <= machine_limit; ++mach) {
        if (++expansions >= budget.max_nodes ||
            ((expansions & 1023) == 0 && seconds_since(t0) > budget.time_limit_s)) {
          aborted = true;
          return;
        }
        asn.placements[static_cast<size_t>(id)] = {mach, b, 0, 0};
        BucketSolution partial = decode(inst, grid, asn);
        if (partial.feasible) {
          // partial cmax is the busiest committed machine
          const double bound = std::max(root_lb, partial.cmax);
          if (k + 1 == n) {
            ++leaves;
            if (partial.cmax < res.cmax - kPruneEps) {
              res.cmax = partial.cmax;
              res.solution = partial;
            }
          } else if (bound < res.cmax - kPruneEps) {
            self(self, k + 1, std::max(used, mach + 1));
          }
        }
        asn.placements[static_cast<size_t>(id)].machine = -1;
        if (aborted) return;
      }
    }
  };
  if (n > 0) dfs(dfs, 0, 0);

  res.proved_bucket_optimal = !aborted;
  res.nodes_explored = leaves;
  res.elapsed_s = seconds_since(t0);
  return res;
}

VariableCounts count_variables(const Instance& inst, const BucketGrid& grid) {
  VariableCounts c;
  const long long t_int = static_cast<long long>(std::ceil(inst.T));
  c.time_indexed = static_cast<long long>(inst.n()) * inst.m * (t_int + 1);
  c.bucket_indexed = static_cast<long long>(inst.n()) * inst.m * grid.B;
  c.reduction = 1.0 - static_cast<double>(c.bucket_indexed) /
                          static_cast<double>(c.time_indexed);
  return c;
}

// ---- LP export ---------------------------------------------------------------

namespace {

// term accumulator with fixed wrapping so exports are byte-stable
class RowWriter {
 public:
  explicit RowWriter(std::string* out) : out_(out) {}

  void begin(const std::string& name) {
    line_ = " " + name + ":";
    terms_ = 0;
  }

  void term(double coeff, const std::string& var) {
    std::string t;
    if (coeff >= 0)
      t = (terms_ == 0 ? "" : "+ ");
    else {
      t = "- ";
      coeff = -coeff;
    }
    if (coeff != 1.0) t += format_num(coeff) + " ";
    t += var;
    if (terms_ > 0 && terms_ % 6 == 0) {
      *out_ += line_ + "\n";
      line_ = "   ";
    }
    line_ += " " + t;
    ++terms_;
  }

  void end(const std::string& relation, double rhs) {
    *out_ += line_ + " " + relation + " " + format_num(rhs) + "\n";
  }

  int terms() const { return terms_; }

 private:
  std::string* out_;
  std::string line_;
  int terms_ = 0;
};

std::string var_x(int j, int mach, char dim, int t) {
  return "x_j" + std::to_string(j) + "_m" + std::to_string(mach) + "_" + dim +
         std::to_string(t);
}

void emit_time_form(const Instance& inst, std::string& out) {
  const int n = inst.n();
  const int m = inst.m;
  const int t_max = static_cast<int>(std::ceil(inst.T));

  out += "Subject To\n";
  RowWriter row(&out);
  for (int j = 0; j < n; ++j) {
    row.begin("assign_j" + std::to_string(j));
    for (int mach = 0; mach < m; ++mach)
      for (int t = 0; t <= t_max; ++t) row.term(1.0, var_x(j, mach, 't', t));
    row.end("=", 1.0);
  }
  for (int j = 0; j < n; ++j)
    for (int mach = 0; mach < m; ++mach) {
      row.begin("mk_j" + std::to_string(j) + "_m" + std::to_string(mach));
      for (int t = 0; t <= t_max; ++t)
        row.term(t + inst.jobs[static_cast<size_t>(j)].p, var_x(j, mach, 't', t));
      row.term(-1.0, "Cmax");
      row.end("<=", 0.0);
    }
  // capacity: occupancy windows use ceil(p) integral slots; rows with a
  // single term are vacuous and omitted
  for (int mach = 0; mach < m; ++mach)
    for (int t = 0; t <= t_max; ++t) {
      std::vector<std::pair<int, int>> terms;  // (job, slot)
      for (int j = 0; j < n; ++j) {
        const int span =
            std::max(1, static_cast<int>(std::ceil(
                            inst.jobs[static_cast<size_t>(j)].p - kTimeEps)));
        for (int s = std::max(0, t - span + 1); s <= t; ++s) terms.push_back({j, s});
      }
      if (terms.size() < 2) continue;
      row.begin("cap_m" + std::to_string(mach) + "_t" + std::to_string(t));
      for (auto [j, s] : terms) row.term(1.0, var_x(j, mach, 't', s));
      row.end("<=", 1.0);
    }

  out += "Bounds\n";
  for (int j = 0; j < n; ++j)
    for (int mach = 0; mach < m; ++mach)
      for (int t = 0; t <= t_max; ++t)
        if (t + kTimeEps < inst.jobs[static_cast<size_t>(j)].r)
          out += " " + var_x(j, mach, 't', t) + " = 0\n";

  out += "Binaries\n";
  std::string line;
  int count = 0;
  for (int j = 0; j < n; ++j)
    for (int mach = 0; mach < m; ++mach)
      for (int t = 0; t <= t_max; ++t) {
        line += " " + var_x(j, mach, 't', t);
        if (++count % 6 == 0) {
          out += line + "\n";
          line.clear();
        }
      }
  if (!line.empty()) out += line + "\n";
}

void emit_bucket_form(const Instance& inst, const BucketGrid& grid, std::string& out) {
  const int n = inst.n();
  const int m = inst.m;
  const int B = grid.B;

  out += "Subject To\n";
  RowWriter row(&out);
  for (int j = 0; j < n; ++j) {
    row.begin("assign_j" + std::to_string(j));
    for (int mach = 0; mach < m; ++mach)
      for (int b = 0; b < B; ++b) row.term(1.0, var_x(j, mach, 'b', b));
    row.end("=", 1.0);
  }
  // S_j = sum_b (b*delta) x_jmb + delta * d_j
  for (int j = 0; j < n; ++j) {
    row.begin("sdef_j" + std::to_string(j));
    row.term(1.0, "S_j" + std::to_string(j));
    for (int mach = 0; mach < m; ++mach)
      for (int b = 1; b < B; ++b) row.term(-b * grid.delta, var_x(j, mach, 'b', b));
    row.term(-grid.delta, "d_j" + std::to_string(j));
    row.end("=", 0.0);
  }
  for (int j = 0; j < n; ++j) {
    const Job& job = inst.jobs[static_cast<size_t>(j)];
    if (job.r > 0) {
      row.begin("rel_j" + std::to_string(j));
      row.term(1.0, "S_j" + std::to_string(j));
      row.end(">=", job.r);
    }
  }
  for (int j = 0; j < n; ++j) {
    row.begin("mk_j" + std::to_string(j));
    row.term(1.0, "Cmax");
    row.term(-1.0, "S_j" + std::to_string(j));
    row.end(">=", inst.jobs[static_cast<size_t>(j)].p);
  }
  // bucket-granular capacity: a job starting in bucket s occupies
  // s .. s + ceil(p/delta) - 1
  for (int mach = 0; mach < m; ++mach)
    for (int b = 0; b < B; ++b) {
      std::vector<std::pair<int, int>> terms;
      for (int j = 0; j < n; ++j) {
        const int span = std::max(
            1, static_cast<int>(std::ceil(
                   inst.jobs[static_cast<size_t>(j)].p / grid.delta - kTimeEps)));
        for (int s = std::max(0, b - span + 1); s <= b; ++s) terms.push_back({j, s});
      }
      if (terms.size() < 2) continue;
      row.begin("cap_m" + std::to_string(mach) + "_b" + std::to_string(b));
      for (auto [j, s] : terms) row.term(1.0, var_x(j, mach, 'b', s));
      row.end("<=", 1.0);
    }

  out += "Bounds\n";
  for (int j = 0; j < n; ++j)
    out += " d_j" + std::to_string(j) + " <= " +
           format_num(grid.offset_cap(j)) + "\n";

  out += "Binaries\n";
  std::string line;
  int count = 0;
  for (int j = 0; j < n; ++j)
    for (int mach = 0; mach < m; ++mach)
      for (int b = 0; b < B; ++b) {
        line += " " + var_x(j, mach, 'b', b);
        if (++count % 6 == 0) {
          out += line + "\n";
          line.clear();
        }
      }
  if (!line.empty()) out += line + "\n";
}

}  // namespace

std::string milp_text(const Instance& inst, const BucketGrid* grid, MilpForm form) {
  inst.validate();
  if (form == MilpForm::bucket_indexed && grid == nullptr)
    throw input_error("milp export: bucket form requires a grid");

  std::string out;
  out += "\\ bucketsched model\n";
  out += "\\ form=" + std::string(form == MilpForm::time_indexed ? "time" : "bucket");
  out += " n=" + std::to_string(inst.n()) + " m=" + std::to_string(inst.m) +
         " T=" + format_num(inst.T);
  if (form == MilpForm::bucket_indexed)
    out += " delta=" + format_num(grid->delta) + " B=" + std::to_string(grid->B);
  out += "\n";
  out += "Minimize\n obj: Cmax\n";
  if (form == MilpForm::time_indexed)
    emit_time_form(inst, out);
  else
    emit_bucket_form(inst, *grid, out);
  out += "End\n";
  return out;
}

void export_milp(const Instance& inst, const BucketGrid* grid, MilpForm form,
                 const std::string& path) {
  write_file_atomic(path, milp_text(inst, grid, form));
}

}  // namespace bsched
