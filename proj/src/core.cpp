#include "bsched/core.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>

#include "bsched/bucket.hpp"
#include "bsched/rng.hpp"
#include "json.hpp"

namespace bsched {

double Instance::total_p() const {
  double s = 0;
  for (const auto& j : jobs) s += j.p;
  return s;
}

double Instance::max_p() const {
  double v = 0;
  for (const auto& j : jobs) v = std::max(v, j.p);
  return v;
}

double Instance::min_p() const {
  double v = jobs.empty() ? 0 : jobs.front().p;
  for (const auto& j : jobs) v = std::min(v, j.p);
  return v;
}

double Instance::max_release() const {
  double v = 0;
  for (const auto& j : jobs) v = std::max(v, j.r);
  return v;
}

double Instance::default_horizon(const std::vector<Job>& jobs) {
  double max_r = 0, sum_p = 0;
  for (const auto& j : jobs) {
    max_r = std::max(max_r, j.r);
    sum_p += j.p;
  }
  return quantize6_up(max_r + sum_p);
}

void Instance::validate() const {
  if (jobs.empty()) throw input_error("instance must have n >= 1 jobs");
  if (m < 1) throw input_error("instance must have m >= 1 machines");
  if (T <= 0) throw input_error("horizon T must be positive");
  std::vector<bool> seen(jobs.size(), false);
  for (const auto& j : jobs) {
    if (j.p <= 0) throw input_error("job " + std::to_string(j.id) + ": p must be > 0");
    if (j.r < 0) throw input_error("job " + std::to_string(j.id) + ": r must be >= 0");
    if (j.id < 0 || j.id >= n())
      throw input_error("job ids must be 0..n-1, got " + std::to_string(j.id));
    if (seen[static_cast<size_t>(j.id)])
      throw input_error("duplicate job id " + std::to_string(j.id));
    seen[static_cast<size_t>(j.id)] = true;
    if (j.r + j.p > T + kTimeEps)
      throw input_error("job " + std::to_string(j.id) +
                        ": r + p exceeds horizon T");
  }
}

std::string to_string(ReleaseClass c) {
  switch (c) {
    case ReleaseClass::sparse: return "sparse";
    case ReleaseClass::moderate: return "moderate";
    case ReleaseClass::dense: return "dense";
  }
  return "?";
}

std::string to_string(CvClass c) {
  switch (c) {
    case CvClass::low: return "low";
    case CvClass::medium: return "medium";
    case CvClass::high: return "high";
  }
  return "?";
}

ReleaseClass release_class_from_string(const std::string& s) {
  if (s == "sparse") return ReleaseClass::sparse;
  if (s == "moderate") return ReleaseClass::moderate;
  if (s == "dense") return ReleaseClass::dense;
  throw input_error("unknown release class: " + s);
}

CvClass cv_class_from_string(const std::string& s) {
  if (s == "low") return CvClass::low;
  if (s == "medium") return CvClass::medium;
  if (s == "high") return CvClass::high;
  throw input_error("unknown cv class: " + s);
}

const ScheduleEntry* Schedule::find(int job_id) const {
  for (const auto& e : entries)
    if (e.job_id == job_id) return &e;
  return nullptr;
}

// ---- generator --------------------------------------------------------------

namespace {

double population_sd(const std::vector<double>& v, double mean) {
  if (v.size() < 2) return 0;
  double acc = 0;
  for (double x : v) acc += (x - mean) * (x - mean);
  return std::sqrt(acc / static_cast<double>(v.size()));
}

double mean_of(const std::vector<double>& v) {
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

// Center CV of each class band (bands: low < 0.3, medium 0.3..0.6,
// high > 0.6 after folding the unclassified 0.6..0.8 band into high).
double target_cv(CvClass c) {
  switch (c) {
    case CvClass::low: return 0.15;
    case CvClass::medium: return 0.45;
    case CvClass::high: return 0.95;
  }
  return 0.45;
}

// Lognormal base draw, then repeated affine recalibration to the target
// sample CV with a positivity clamp. The clamp rarely fires for cv <= 1, so
// a handful of rounds settles on the exact target.
std::vector<double> shaped_processing_times(const GenSpec& spec, Rng& rng) {
  const int n = spec.n;
  const double mid = 0.5 * (spec.p_min + spec.p_max);
  std::vector<double> p(static_cast<size_t>(n));

  if (!spec.cv_target || spec.p_min == spec.p_max) {
    for (auto& x : p) x = rng.uniform(spec.p_min, spec.p_max);
    return p;
  }
  if (n == 1) {
    p[0] = mid;
    return p;
  }

  const double cv = target_cv(*spec.cv_target);
  const double sigma_ln = std::sqrt(std::log1p(cv * cv));
  for (auto& x : p) x = std::exp(sigma_ln * rng.normal());

  const double floor_p = std::max(1e-6, 0.02 * spec.p_min);
  for (int round = 0; round < 50; ++round) {
    const double mu = mean_of(p);
    double sd = population_sd(p, mu);
    if (sd < 1e-12) {
      // Degenerate sample; spread it symmetrically around the midpoint.
      for (int i = 0; i < n; ++i)
        p[static_cast<size_t>(i)] = mid * (1.0 + (i % 2 == 0 ? cv : -cv));
      continue;
    }
    const double scale = cv * mid / sd;
    bool clamped = false;
    for (auto& x : p) {
      x = mid + (x - mu) * scale;
      if (x < floor_p) {
        x = floor_p;
        clamped = true;
      }
    }
    if (!clamped) break;
  }
  return p;
}

// Release layout relative to the total work P. Classes are chosen so the
// realized span/concentration lands in the intended band once the horizon
// T = max r + P is attached:
//   dense    - >= 90% of jobs in [0, 0.05 P], the rest straggling
//   moderate - span 0.5 P  -> span fraction 1/3
//   sparse   - span 1.5 P  -> span fraction 0.6
std::vector<double> shaped_releases(const GenSpec& spec, double total_p, Rng& rng) {
  const int n = spec.n;
  std::vector<double> r(static_cast<size_t>(n), 0.0);
  if (n == 1) return r;

  switch (spec.release_class) {
    case ReleaseClass::dense: {
      const int outliers = n / 10;
      std::vector<int> order(static_cast<size_t>(n));
      std::iota(order.begin(), order.end(), 0);
      rng.shuffle(order);
      for (int k = 0; k < n; ++k) {
        const bool straggler = k >= n - outliers;
        r[static_cast<size_t>(order[static_cast<size_t>(k)])] =
            straggler ? rng.uniform(0.15 * total_p, 0.30 * total_p)
                      : rng.uniform(0.0, 0.05 * total_p);
      }
      const double lo = *std::min_element(r.begin(), r.end());
      for (auto& x : r) x -= lo;
      break;
    }
    case ReleaseClass::moderate:
    case ReleaseClass::sparse: {
      const double span =
          (spec.release_class == ReleaseClass::sparse ? 1.5 : 0.5) * total_p;
      for (auto& x : r) x = rng.uniform(0.0, span);
      const double lo = *std::min_element(r.begin(), r.end());
      const double hi = *std::max_element(r.begin(), r.end());
      if (hi - lo < 1e-12) {
        for (int i = 0; i < n; ++i)
          r[static_cast<size_t>(i)] = span * i / (n - 1);
      } else {
        for (auto& x : r) x = (x - lo) * span / (hi - lo);
      }
      break;
    }
  }
  return r;
}

}  // namespace

Instance generate_instance(const GenSpec& spec) {
  if (spec.n < 1) throw input_error("gen spec: n must be >= 1");
  if (spec.m < 1) throw input_error("gen spec: m must be >= 1");
  if (spec.p_min <= 0) throw input_error("gen spec: p_min must be > 0");
  if (spec.p_min > spec.p_max) throw input_error("gen spec: p_min > p_max");

  Rng rng(spec.seed);
  std::vector<double> p = shaped_processing_times(spec, rng);
  for (auto& x : p) x = std::max(1e-6, quantize6(x));
  const double total = std::accumulate(p.begin(), p.end(), 0.0);

  std::vector<double> r = shaped_releases(spec, total, rng);
  for (auto& x : r) x = std::max(0.0, quantize6(x));

  Instance inst;
  inst.m = spec.m;
  inst.jobs.reserve(static_cast<size_t>(spec.n));
  for (int i = 0; i < spec.n; ++i)
    inst.jobs.push_back({i, p[static_cast<size_t>(i)], r[static_cast<size_t>(i)]});
  inst.T = Instance::default_horizon(inst.jobs);
  inst.validate();
  return inst;
}

// ---- validation / metrics ---------------------------------------------------

ValidationReport validate_schedule(const Instance& inst, const Schedule& sched) {
  ValidationReport rep;
  const int n = inst.n();
  std::vector<int> count(static_cast<size_t>(n), 0);

  for (const auto& e : sched.entries) {
    if (e.job_id < 0 || e.job_id >= n) {
      rep.violations.push_back({Violation::Kind::unknown_job, e.job_id, -1, -1,
                                "entry references unknown job " + std::to_string(e.job_id)});
      continue;
    }
    if (++count[static_cast<size_t>(e.job_id)] == 2)
      rep.violations.push_back({Violation::Kind::duplicate_job, e.job_id, -1, -1,
                                "job " + std::to_string(e.job_id) + " scheduled more than once"});
    if (e.machine < 0 || e.machine >= inst.m)
      rep.violations.push_back({Violation::Kind::bad_machine, e.job_id, -1, e.machine,
                                "job " + std::to_string(e.job_id) + " on invalid machine " +
                                    std::to_string(e.machine)});
    else {
      const Job& job = inst.jobs[static_cast<size_t>(e.job_id)];
      if (e.start < job.r - kTimeEps)
        rep.violations.push_back({Violation::Kind::release, e.job_id, -1, -1,
                                  "job " + std::to_string(e.job_id) + " starts at " +
                                      format_num(e.start) + " before release " +
                                      format_num(job.r)});
    }
  }
  for (int id = 0; id < n; ++id)
    if (count[static_cast<size_t>(id)] == 0)
      rep.violations.push_back({Violation::Kind::missing_job, id, -1, -1,
                                "job " + std::to_string(id) + " is not scheduled"});

  // capacity: intervals [start, start + p) disjoint per machine
  std::vector<std::vector<const ScheduleEntry*>> per_machine(
      static_cast<size_t>(std::max(inst.m, 1)));
  for (const auto& e : sched.entries)
    if (e.job_id >= 0 && e.job_id < n && e.machine >= 0 && e.machine < inst.m)
      per_machine[static_cast<size_t>(e.machine)].push_back(&e);
  for (int mach = 0; mach < inst.m; ++mach) {
    auto& v = per_machine[static_cast<size_t>(mach)];
    std::sort(v.begin(), v.end(), [](const ScheduleEntry* a, const ScheduleEntry* b) {
      if (a->start != b->start) return a->start < b->start;
      return a->job_id < b->job_id;
    });
    for (size_t k = 1; k < v.size(); ++k) {
      const auto* prev = v[k - 1];
      const auto* cur = v[k];
      const double prev_end = prev->start + inst.jobs[static_cast<size_t>(prev->job_id)].p;
      if (cur->start < prev_end - kTimeEps)
        rep.violations.push_back({Violation::Kind::overlap, prev->job_id, cur->job_id, mach,
                                  "jobs " + std::to_string(prev->job_id) + " and " +
                                      std::to_string(cur->job_id) + " overlap on machine " +
                                      std::to_string(mach)});
    }
  }
  return rep;
}

double cmax_of(const Instance& inst, const Schedule& sched) {
  double cmax = 0;
  for (const auto& e : sched.entries)
    cmax = std::max(cmax, e.start + inst.jobs[static_cast<size_t>(e.job_id)].p);
  return cmax;
}

Metrics compute_metrics(const Instance& inst, const Schedule& sched,
                        const BucketGrid* grid) {
  ValidationReport rep = validate_schedule(inst, sched);
  if (!rep.feasible())
    throw input_error("compute_metrics requires a feasible schedule: " +
                      rep.violations.front().message);

  Metrics m;
  m.cmax = cmax_of(inst, sched);
  m.machine_loads.assign(static_cast<size_t>(inst.m), 0.0);
  for (const auto& e : sched.entries)
    m.machine_loads[static_cast<size_t>(e.machine)] +=
        inst.jobs[static_cast<size_t>(e.job_id)].p;

  m.utilization = inst.total_p() / (inst.m * m.cmax);
  const double mu = mean_of(m.machine_loads);
  const double sd = population_sd(m.machine_loads, mu);
  m.load_balance = mu > 0 ? sd / mu : 0.0;
  if (grid) {
    const double t_int = std::ceil(inst.T);
    m.compression_ratio_vars = (t_int + 1) / grid->B;
  }
  return m;
}

Schedule canonicalize_schedule(const Instance& inst, const Schedule& sched) {
  // order machines by their (start, job) listing, lexicographically
  std::vector<std::vector<const ScheduleEntry*>> per_machine(
      static_cast<size_t>(inst.m));
  for (const auto& e : sched.entries)
    per_machine[static_cast<size_t>(e.machine)].push_back(&e);
  for (auto& v : per_machine)
    std::sort(v.begin(), v.end(), [](const ScheduleEntry* a, const ScheduleEntry* b) {
      if (a->start != b->start) return a->start < b->start;
      return a->job_id < b->job_id;
    });

  std::vector<int> order(static_cast<size_t>(inst.m));
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    const auto& va = per_machine[static_cast<size_t>(a)];
    const auto& vb = per_machine[static_cast<size_t>(b)];
    for (size_t k = 0; k < std::min(va.size(), vb.size()); ++k) {
      if (va[k]->start != vb[k]->start) return va[k]->start < vb[k]->start;
      if (va[k]->job_id != vb[k]->job_id) return va[k]->job_id < vb[k]->job_id;
    }
    if (va.size() != vb.size()) return va.size() > vb.size();  // empty machines last
    return a < b;
  });

  Schedule out;
  out.entries.resize(sched.entries.size());
  std::vector<int> new_index(static_cast<size_t>(inst.m));
  for (int k = 0; k < inst.m; ++k)
    new_index[static_cast<size_t>(order[static_cast<size_t>(k)])] = k;
  size_t pos = 0;
  for (const auto& e : sched.entries)
    out.entries[pos++] = {e.job_id, new_index[static_cast<size_t>(e.machine)], e.start};
  std::sort(out.entries.begin(), out.entries.end(),
            [](const ScheduleEntry& a, const ScheduleEntry& b) {
              return a.job_id < b.job_id;
            });
  return out;
}

// ---- formatting / hashing ---------------------------------------------------

double quantize6(double x) { return std::round(x * 1e6) / 1e6; }

double quantize6_up(double x) {
  double y = x * 1e6;
  const double r = std::round(y);
  // 1e-3 on the scaled value is 1e-9 time units; values already on the grid
  // must not bump up a whole step from float noise.
  if (std::abs(y - r) < 1e-3) y = r;
  return std::ceil(y) / 1e6;
}

std::string format_num(double x) {
  if (x == 0) x = 0;  // normalize -0
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", x);
  std::string s = buf;
  const size_t last = s.find_last_not_of('0');
  s.erase(s[last] == '.' ? last : last + 1);
  return s == "-0" ? "0" : s;
}

std::string format_time(double x) {
  std::string s = format_num(x);
  if (s.find('.') == std::string::npos) s += ".0";
  return s;
}

std::uint64_t fnv1a64(std::string_view data) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string digest_hex(std::string_view data) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(fnv1a64(data)));
  return buf;
}

std::string instance_digest(const Instance& inst) {
  return digest_hex(instance_to_json(inst));
}

// ---- file I/O ---------------------------------------------------------------

std::string instance_to_json(const Instance& inst) {
  std::string out;
  out += "{\n";
  out += "  \"n\": " + std::to_string(inst.n()) + ",\n";
  out += "  \"m\": " + std::to_string(inst.m) + ",\n";
  out += "  \"T\": " + format_num(inst.T) + ",\n";
  out += "  \"jobs\": [\n";
  for (int i = 0; i < inst.n(); ++i) {
    const Job& j = inst.jobs[static_cast<size_t>(i)];
    out += "    {\"id\": " + std::to_string(j.id) + ", \"p\": " + format_num(j.p) +
           ", \"r\": " + format_num(j.r) + "}";
    out += (i + 1 < inst.n()) ? ",\n" : "\n";
  }
  out += "  ]\n}\n";
  return out;
}

Instance instance_from_json(const std::string& text, const std::string& origin) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw parse_error(origin + ": invalid JSON: " + e.what());
  }
  auto require = [&](const nlohmann::json& obj, const char* field,
                     const std::string& where) -> const nlohmann::json& {
    auto it = obj.find(field);
    if (it == obj.end())
      throw parse_error(origin + ": " + where + ": missing field \"" + field + "\"");
    return *it;
  };

  Instance inst;
  if (!doc.is_object()) throw parse_error(origin + ": top level must be an object");
  inst.m = require(doc, "m", "top level").get<int>();
  inst.T = require(doc, "T", "top level").get<double>();
  const int n = require(doc, "n", "top level").get<int>();
  const auto& jobs = require(doc, "jobs", "top level");
  if (!jobs.is_array())
    throw parse_error(origin + ": field \"jobs\" must be an array");
  if (static_cast<int>(jobs.size()) != n)
    throw parse_error(origin + ": field \"n\" (" + std::to_string(n) +
                      ") does not match jobs array size (" +
                      std::to_string(jobs.size()) + ")");
  int idx = 0;
  for (const auto& item : jobs) {
    const std::string where = "jobs[" + std::to_string(idx++) + "]";
    Job j;
    j.id = require(item, "id", where).get<int>();
    j.p = require(item, "p", where).get<double>();
    j.r = require(item, "r", where).get<double>();
    inst.jobs.push_back(j);
  }
  inst.validate();  // throws input_error for r < 0 etc.
  return inst;
}

Instance read_instance(const std::string& path) {
  return instance_from_json(read_file(path), path);
}

void write_instance(const Instance& inst, const std::string& path) {
  write_file_atomic(path, instance_to_json(inst));
}

std::string schedule_to_csv(const Instance& inst, const Schedule& sched,
                            const std::vector<int>* buckets) {
  std::string out = "job,machine,bucket,start,end\n";
  std::vector<ScheduleEntry> rows = sched.entries;
  std::sort(rows.begin(), rows.end(),
            [](const ScheduleEntry& a, const ScheduleEntry& b) {
              return a.job_id < b.job_id;
            });
  for (const auto& e : rows) {
    const double p = inst.jobs[static_cast<size_t>(e.job_id)].p;
    const double start = quantize6(e.start);
    const double end = quantize6(e.start + p);
    out += std::to_string(e.job_id) + "," + std::to_string(e.machine) + ",";
    if (buckets) out += std::to_string((*buckets)[static_cast<size_t>(e.job_id)]);
    out += "," + format_time(start) + "," + format_time(end) + "\n";
  }
  return out;
}

void write_schedule_csv(const Instance& inst, const Schedule& sched,
                        const std::string& path, const std::vector<int>* buckets) {
  write_file_atomic(path, schedule_to_csv(inst, sched, buckets));
}

Schedule read_schedule_csv(const std::string& path) {
  std::istringstream in(read_file(path));
  std::string line;
  if (!std::getline(in, line))
    throw parse_error(path + ": empty schedule file");
  if (line != "job,machine,bucket,start,end")
    throw parse_error(path + ": unexpected header: " + line);
  Schedule sched;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ls(line);
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (line.back() == ',') cells.push_back("");
    if (cells.size() != 5)
      throw parse_error(path + ":" + std::to_string(lineno) +
                        ": expected 5 columns, got " + std::to_string(cells.size()));
    try {
      sched.entries.push_back(
          {std::stoi(cells[0]), std::stoi(cells[1]), std::stod(cells[3])});
    } catch (const std::exception&) {
      throw parse_error(path + ":" + std::to_string(lineno) + ": malformed row: " + line);
    }
  }
  return sched;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw parse_error(path + ": cannot open file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file_atomic(const std::string& path, std::string_view content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  if (target.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(target.parent_path(), ec);
  }
  const fs::path tmp = target.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error(path + ": cannot open for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw std::runtime_error(path + ": write failed");
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) throw std::runtime_error(path + ": rename failed: " + ec.message());
}

}  // namespace bsched
