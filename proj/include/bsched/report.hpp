#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "bsched/analysis.hpp"
#include "bsched/heuristics.hpp"

namespace bsched {

inline constexpr const char* kToolVersion = "0.1.0";

// Self-contained benchmark record: embeds the instance digest, the
// generator spec when the instance was generated, and every parameter
// needed to reproduce the run. elapsed_s stays 0 unless timing output was
// requested, keeping reruns byte-identical.
struct SolveReport {
  std::string instance_digest;
  int n = 0;
  int m = 0;
  double T = 0;
  std::optional<GenSpec> genspec;

  std::string method;
  std::optional<double> delta;
  std::optional<int> kappa;
  bool phi = true;
  std::optional<GaConfig> ga;
  std::uint64_t max_nodes = 0;
  double time_limit_s = 0;

  double cmax = 0;
  bool feasible = true;
  std::optional<bool> proved_optimal;
  std::optional<bool> proved_bucket_optimal;
  std::optional<std::uint64_t> nodes_explored;
  std::optional<double> lower_bound;

  Metrics metrics;
  std::optional<ComplexityReport> complexity;
  std::optional<double> exact_cmax;
  std::optional<double> gap_pct;

  double elapsed_s = 0;
};

std::string report_to_json(const SolveReport& report);

}  // namespace bsched
