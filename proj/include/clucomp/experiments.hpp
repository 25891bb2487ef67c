#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "clucomp/contingency.hpp"
#include "clucomp/qparam.hpp"

namespace clucomp {

/// Desk-scale experiment harness: baseline behavior of NMI_q vs AMI_q
/// under random partitions, asymptotic-approximation quality, fixed
/// scenario orderings across q and measure selection bias. Emits plot
/// data only (CSV rows plus a JSON metadata sidecar), no rendering.

struct ExperimentConfig {
  std::string experiment_id;
  std::int64_t n_objects = 100;
  int n_trials = 1000;
  std::vector<QParam> q_list;
  std::vector<int> r_range = {2, 4, 6, 8, 10};
  int c_fixed = 6;
  std::vector<double> size_fractions = {0.5, 0.6, 0.7, 0.8, 0.9, 0.95};
  std::vector<std::int64_t> n_list = {100, 1000};  // approx-quality
  std::vector<int> pool_r = {2, 3, 4, 5, 6, 7, 8, 9, 10};  // selection-bias
  std::uint64_t seed = 0;
};

/// Baseline config for a given experiment id (trial counts and sweeps
/// matching the reference settings; scale n_trials down for CI runs).
ExperimentConfig default_config(const std::string& experiment_id);

struct ResultRow {
  std::string experiment;
  std::string measure;
  std::string q;
  double x = 0.0;
  double mean = 0.0;
  double stddev = 0.0;
  std::int64_t n = 0;
};

struct ExperimentResult {
  std::vector<ResultRow> rows;
  std::string metadata_json;  // config echo, seed, library version
};

/// Random U with r sets vs random V with c sets, NMI_q and AMI_q means
/// per r. Shows the non-constant NMI baseline and the ~0 AMI baseline.
ExperimentResult run_baseline_vary_r(const ExperimentConfig& cfg);

/// Random binary U with the largest-cluster fraction swept, vs random V.
ExperimentResult run_baseline_vary_size(const ExperimentConfig& cfg);

/// Exact E[H_q(U,V)] from balanced marginals vs its large-N closed form,
/// per (N, r); emits both values and the gap.
ExperimentResult run_approx_quality(const ExperimentConfig& cfg);

/// AMI_q for candidate solutions sharing one reference V, across a q
/// grid; locates the crossing points by bisection to 1e-3.
ExperimentResult run_scenario_q_sweep(
    const std::vector<std::pair<std::string, ContingencyTable>>& tables,
    const std::vector<double>& q_grid);

/// Step-0.1 grid over [0.2, 3.0]; the point at 1 evaluates as Shannon.
std::vector<double> default_q_grid();

/// Pool of random U with r in pool_r vs a fixed balanced V; records which
/// r the argmax partition has under NMI_q, AMI_q and SMI_q and emits the
/// selection probability histograms. Ties break toward the lowest r.
ExperimentResult run_selection_bias(const ExperimentConfig& cfg);

ExperimentResult run_experiment(const ExperimentConfig& cfg);

/// CSV with header experiment,measure,q,x,mean,std,n; '.' decimals, LF.
void write_experiment_csv(const ExperimentResult& result, std::ostream& os);

/// Fixed scenario tables: each pairs one reference clustering V with two
/// candidate solutions built on identical column marginals.
struct ScenarioPair {
  std::string name;
  ContingencyTable pure_solution;    // pure clusters in the solution
  ContingencyTable spread_solution;  // same marginal shape, diffused
};

ScenarioPair scenario_equal_sizes();         // V sizes [50,50,50]
ScenarioPair scenario_rare_clusters();       // V sizes [10,10,10,70]
ScenarioPair scenario_balanced_reference();  // V sizes [25,25,25,25]

}  // namespace clucomp
