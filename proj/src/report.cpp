#include "bsched/report.hpp"

#include "json.hpp"

namespace bsched {

namespace {

using ojson = nlohmann::ordered_json;

ojson genspec_json(const GenSpec& spec) {
  ojson g;
  g["n"] = spec.n;
  g["m"] = spec.m;
  g["p_min"] = spec.p_min;
  g["p_max"] = spec.p_max;
  if (spec.cv_target)
    g["cv"] = to_string(*spec.cv_target);
  else
    g["cv"] = nullptr;
  g["release"] = to_string(spec.release_class);
  g["seed"] = spec.seed;
  return g;
}

}  // namespace

std::string report_to_json(const SolveReport& r) {
  ojson doc;
  doc["tool"] = "bucketsched";
  doc["version"] = kToolVersion;

  ojson inst;
  inst["digest"] = r.instance_digest;
  inst["n"] = r.n;
  inst["m"] = r.m;
  inst["T"] = r.T;
  if (r.genspec) inst["genspec"] = genspec_json(*r.genspec);
  doc["instance"] = inst;

  doc["method"] = r.method;

  ojson params;
  if (r.delta) params["delta"] = *r.delta;
  if (r.kappa) params["kappa"] = *r.kappa;
  params["phi"] = r.phi;
  params["max_nodes"] = r.max_nodes;
  params["time_limit_s"] = r.time_limit_s;
  if (r.ga) {
    ojson g;
    g["population"] = r.ga->population;
    g["generations"] = r.ga->generations;
    g["crossover_rate"] = r.ga->crossover_rate;
    g["mutation_rate"] = r.ga->mutation_rate;
    g["tournament"] = r.ga->tournament;
    g["seed"] = r.ga->seed;
    g["seed_spt"] = r.ga->seed_spt;
    params["ga"] = g;
  }
  doc["params"] = params;

  ojson result;
  result["cmax"] = r.cmax;
  result["feasible"] = r.feasible;
  if (r.proved_optimal) result["proved_optimal"] = *r.proved_optimal;
  if (r.proved_bucket_optimal)
    result["proved_bucket_optimal"] = *r.proved_bucket_optimal;
  if (r.nodes_explored) result["nodes_explored"] = *r.nodes_explored;
  if (r.lower_bound) result["lower_bound"] = *r.lower_bound;
  doc["result"] = result;

  ojson metrics;
  metrics["cmax"] = r.metrics.cmax;
  metrics["utilization"] = r.metrics.utilization;
  metrics["load_balance"] = r.metrics.load_balance;
  metrics["machine_loads"] = r.metrics.machine_loads;
  if (r.metrics.compression_ratio_vars)
    metrics["compression_ratio_vars"] = *r.metrics.compression_ratio_vars;
  doc["metrics"] = metrics;

  if (r.complexity) {
    ojson c;
    c["log10_time_indexed"] = r.complexity->log10_time_indexed;
    c["log10_bucket"] = r.complexity->log10_bucket;
    c["log10_speedup"] = r.complexity->log10_speedup;
    c["log10_assignment"] = r.complexity->log10_assignment;
    c["log10_sequencing"] = r.complexity->log10_sequencing;
    c["precision_redundancy"] = r.complexity->precision_redundancy;
    doc["complexity"] = c;
  }

  if (r.exact_cmax) {
    ojson g;
    g["exact_cmax"] = *r.exact_cmax;
    if (r.gap_pct) g["gap_pct"] = *r.gap_pct;
    doc["gap"] = g;
  }

  doc["elapsed_s"] = r.elapsed_s;
  return doc.dump(2) + "\n";
}

}  // namespace bsched
