#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace bsched {

// Absolute tolerance for every time/metric comparison in the engine.
inline constexpr double kTimeEps = 1e-9;

// Bad user input (flags, generator specs, malformed values).
struct input_error : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// A guard refused to run (oracle size limit, degenerate grid without the
// override flag). Mapped to its own CLI exit code, distinct from crashes.
struct refusal_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Malformed input file; message carries file/line/field context.
struct parse_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Job {
  int id = 0;
  double p = 0;  // processing time, > 0
  double r = 0;  // release date, >= 0
};

struct Instance {
  std::vector<Job> jobs;  // ids 0..n-1
  int m = 1;              // machine count
  double T = 0;           // horizon

  int n() const { return static_cast<int>(jobs.size()); }
  double total_p() const;
  double max_p() const;
  double min_p() const;
  double max_release() const;

  // T = max_j r_j + sum_j p_j, the trivially sufficient horizon.
  static double default_horizon(const std::vector<Job>& jobs);

  // Throws input_error when an invariant is broken (p <= 0, r < 0,
  // non-contiguous ids, T < max(r_j + p_j), ...).
  void validate() const;
};

enum class ReleaseClass { sparse, moderate, dense };
enum class CvClass { low, medium, high };

std::string to_string(ReleaseClass c);
std::string to_string(CvClass c);
ReleaseClass release_class_from_string(const std::string& s);
CvClass cv_class_from_string(const std::string& s);

// Instance generator knobs. Deterministic: equal specs (including seed)
// produce byte-identical instances.
struct GenSpec {
  int n = 0;
  int m = 1;
  double p_min = 1.0;
  double p_max = 100.0;
  std::optional<CvClass> cv_target;  // when absent, plain uniform draws
  ReleaseClass release_class = ReleaseClass::moderate;
  std::uint64_t seed = 0;
};

struct ScheduleEntry {
  int job_id = 0;
  int machine = 0;
  double start = 0;
};

struct Schedule {
  std::vector<ScheduleEntry> entries;  // one per job

  const ScheduleEntry* find(int job_id) const;
};

struct Violation {
  enum class Kind { missing_job, duplicate_job, unknown_job, bad_machine, release, overlap };
  Kind kind;
  int job_a = -1;
  int job_b = -1;    // second job of an overlap pair
  int machine = -1;  // machine of an overlap
  std::string message;
};

struct ValidationReport {
  std::vector<Violation> violations;
  bool feasible() const { return violations.empty(); }
};

struct Metrics {
  double cmax = 0;
  double utilization = 0;   // sum p / (m * cmax)
  double load_balance = 0;  // sigma/mu over machine busy times (population sigma)
  std::vector<double> machine_loads;
  std::optional<double> compression_ratio_vars;  // (T_int + 1) / B, grid runs only
};

struct BucketGrid;  // bucket.hpp

Instance generate_instance(const GenSpec& spec);

ValidationReport validate_schedule(const Instance& inst, const Schedule& sched);

// Requires a feasible schedule; throws input_error naming the first
// violation otherwise.
Metrics compute_metrics(const Instance& inst, const Schedule& sched,
                        const BucketGrid* grid = nullptr);

double cmax_of(const Instance& inst, const Schedule& sched);

// Relabels machines so the (machine, start) listing is lexicographically
// minimal; entries sorted by job id. Identical machines make this a
// no-cost normal form for comparing solver outputs.
Schedule canonicalize_schedule(const Instance& inst, const Schedule& sched);

// ---- file I/O -------------------------------------------------------------

Instance read_instance(const std::string& path);
void write_instance(const Instance& inst, const std::string& path);
std::string instance_to_json(const Instance& inst);
Instance instance_from_json(const std::string& text, const std::string& origin);

// Schedule CSV, header `job,machine,bucket,start,end`. The bucket column is
// empty for solvers that do not place jobs in buckets.
std::string schedule_to_csv(const Instance& inst, const Schedule& sched,
                            const std::vector<int>* buckets = nullptr);
void write_schedule_csv(const Instance& inst, const Schedule& sched,
                        const std::string& path,
                        const std::vector<int>* buckets = nullptr);
Schedule read_schedule_csv(const std::string& path);

// Atomic file write: temp file + rename.
void write_file_atomic(const std::string& path, std::string_view content);
std::string read_file(const std::string& path);

// ---- formatting / hashing -------------------------------------------------

// Decimal with up to 6 fractional digits, trailing zeros trimmed.
std::string format_num(double x);
// Same, but always keeps at least one fractional digit (schedule CSV style).
std::string format_time(double x);

double quantize6(double x);       // round to 6 decimals
double quantize6_up(double x);    // round up to 6 decimals

std::uint64_t fnv1a64(std::string_view data);
std::string digest_hex(std::string_view data);
std::string instance_digest(const Instance& inst);

}  // namespace bsched
