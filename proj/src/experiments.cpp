#include "clucomp/experiments.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

#include "json.hpp"

#include "clucomp/adjusted.hpp"
#include "clucomp/detail/threads.hpp"
#include "clucomp/io.hpp"
#include "clucomp/measures.hpp"
#include "clucomp/moments.hpp"
#include "clucomp/oracle.hpp"
#include "clucomp/version.hpp"

namespace clucomp {

namespace {

using nlohmann::json;

std::vector<QParam> default_q_list() {
  return {QParam::tsallis(0.5), QParam::shannon(), QParam::tsallis(2.0),
          QParam::tsallis(3.0)};
}

json config_echo(const ExperimentConfig& cfg) {
  json j;
  j["experiment_id"] = cfg.experiment_id;
  j["n_objects"] = cfg.n_objects;
  j["n_trials"] = cfg.n_trials;
  json qs = json::array();
  for (const auto& q : cfg.q_list) qs.push_back(q.label());
  j["q_list"] = qs;
  j["r_range"] = cfg.r_range;
  j["c_fixed"] = cfg.c_fixed;
  j["size_fractions"] = cfg.size_fractions;
  j["n_list"] = cfg.n_list;
  j["pool_r"] = cfg.pool_r;
  j["seed"] = cfg.seed;
  return j;
}

std::string finish_metadata(json j) {
  j["library_version"] = kVersion;
  j["rng"] = "mt19937_64, rejection-sampled bounded draws";
  return j.dump(2) + "\n";
}

struct RunningStat {
  double sum = 0.0, sumsq = 0.0;
  std::int64_t n = 0;
  void add(double x) {
    sum += x;
    sumsq += x * x;
    ++n;
  }
  double mean() const { return sum / static_cast<double>(n); }
  double stddev() const {
    if (n < 2) return 0.0;
    double m = mean();
    double v = (sumsq - static_cast<double>(n) * m * m) /
               static_cast<double>(n - 1);
    return v > 0.0 ? std::sqrt(v) : 0.0;
  }
};

// Near-equal split of n into k parts, remainder spread over the first ones.
std::vector<std::int64_t> balanced_sizes(std::int64_t n, int k) {
  std::vector<std::int64_t> sizes(static_cast<std::size_t>(k), n / k);
  for (int i = 0; i < static_cast<int>(n % k); ++i) ++sizes[i];
  return sizes;
}

// Any valid table with the given marginals (northwest-corner fill); the
// exact-moment formulas read only the marginals.
ContingencyTable table_with_marginals(const std::vector<std::int64_t>& a,
                                      const std::vector<std::int64_t>& b) {
  std::vector<std::vector<std::int64_t>> grid(
      a.size(), std::vector<std::int64_t>(b.size(), 0));
  std::vector<std::int64_t> rowrem = a, colrem = b;
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    std::int64_t v = std::min(rowrem[i], colrem[j]);
    grid[i][j] = v;
    rowrem[i] -= v;
    colrem[j] -= v;
    if (rowrem[i] == 0) ++i;
    if (colrem[j] == 0) ++j;
  }
  return ContingencyTable::from_counts(grid);
}

// AMI_q as a continuous function of q along a sweep grid; the point q = 1
// evaluates as the Shannon limit.
double ami_at(const ContingencyTable& t, double q) {
  if (std::abs(q - 1.0) < 1e-9) return ami(t, QParam::shannon());
  return ami(t, QParam::tsallis(q));
}

}  // namespace

std::vector<double> default_q_grid() {
  std::vector<double> grid;
  for (int k = 2; k <= 30; ++k) grid.push_back(static_cast<double>(k) / 10.0);
  return grid;
}

ExperimentConfig default_config(const std::string& experiment_id) {
  ExperimentConfig cfg;
  cfg.experiment_id = experiment_id;
  cfg.q_list = default_q_list();
  if (experiment_id == "baseline-vary-r" ||
      experiment_id == "baseline-vary-size" ||
      experiment_id == "approx-quality") {
    cfg.n_trials = 1000;
  } else if (experiment_id == "selection-bias") {
    cfg.n_trials = 5000;
    cfg.c_fixed = 4;
    cfg.q_list = {QParam::shannon(), QParam::tsallis(2.0),
                  QParam::tsallis(3.0)};
  } else if (experiment_id == "scenario-q-sweep") {
    cfg.n_trials = 1;
  } else {
    throw std::invalid_argument("unknown experiment id '" + experiment_id +
                                "'");
  }
  return cfg;
}

ExperimentResult run_baseline_vary_r(const ExperimentConfig& cfg) {
  if (cfg.n_trials < 1 || cfg.r_range.empty() || cfg.q_list.empty())
    throw std::invalid_argument("infeasible baseline-vary-r config");

  ExperimentResult result;
  const std::size_t nq = cfg.q_list.size();
  for (int r : cfg.r_range) {
    // values[trial][qi][0] = NMI, [1] = AMI
    std::vector<std::vector<std::array<double, 2>>> values(
        static_cast<std::size_t>(cfg.n_trials),
        std::vector<std::array<double, 2>>(nq));
    std::uint64_t r_seed = derive_seed(cfg.seed, static_cast<std::uint64_t>(r));
    detail::parallel_for_index(
        static_cast<std::size_t>(cfg.n_trials), [&](std::size_t trial) {
          std::uint64_t s = derive_seed(r_seed, trial);
          auto u = random_partition(
              RandomPartitionSpec::uniform(cfg.n_objects, r),
              derive_seed(s, 0));
          auto v = random_partition(
              RandomPartitionSpec::uniform(cfg.n_objects, cfg.c_fixed),
              derive_seed(s, 1));
          ContingencyTable t =
              ContingencyTable::from_dense_labels(r, cfg.c_fixed, u, v);
          for (std::size_t qi = 0; qi < nq; ++qi) {
            values[trial][qi][0] = nmi(t, cfg.q_list[qi]);
            values[trial][qi][1] = ami(t, cfg.q_list[qi]);
          }
        });
    for (std::size_t qi = 0; qi < nq; ++qi) {
      RunningStat nmi_stat, ami_stat;
      for (int trial = 0; trial < cfg.n_trials; ++trial) {
        nmi_stat.add(values[trial][qi][0]);
        ami_stat.add(values[trial][qi][1]);
      }
      const std::string& ql = cfg.q_list[qi].label();
      result.rows.push_back({"baseline-vary-r", "NMI", ql,
                             static_cast<double>(r), nmi_stat.mean(),
                             nmi_stat.stddev(), nmi_stat.n});
      result.rows.push_back({"baseline-vary-r", "AMI", ql,
                             static_cast<double>(r), ami_stat.mean(),
                             ami_stat.stddev(), ami_stat.n});
    }
  }
  result.metadata_json = finish_metadata(config_echo(cfg));
  return result;
}

ExperimentResult run_baseline_vary_size(const ExperimentConfig& cfg) {
  if (cfg.n_trials < 1 || cfg.size_fractions.empty() || cfg.q_list.empty())
    throw std::invalid_argument("infeasible baseline-vary-size config");

  ExperimentResult result;
  const std::size_t nq = cfg.q_list.size();
  int sweep_index = 0;
  for (double fraction : cfg.size_fractions) {
    std::vector<std::vector<std::array<double, 2>>> values(
        static_cast<std::size_t>(cfg.n_trials),
        std::vector<std::array<double, 2>>(nq));
    std::uint64_t f_seed =
        derive_seed(cfg.seed, static_cast<std::uint64_t>(1000 + sweep_index));
    detail::parallel_for_index(
        static_cast<std::size_t>(cfg.n_trials), [&](std::size_t trial) {
          std::uint64_t s = derive_seed(f_seed, trial);
          auto u = random_partition(
              RandomPartitionSpec::sweep(cfg.n_objects, 2, fraction),
              derive_seed(s, 0));
          auto v = random_partition(
              RandomPartitionSpec::uniform(cfg.n_objects, cfg.c_fixed),
              derive_seed(s, 1));
          ContingencyTable t =
              ContingencyTable::from_dense_labels(2, cfg.c_fixed, u, v);
          for (std::size_t qi = 0; qi < nq; ++qi) {
            values[trial][qi][0] = nmi(t, cfg.q_list[qi]);
            values[trial][qi][1] = ami(t, cfg.q_list[qi]);
          }
        });
    for (std::size_t qi = 0; qi < nq; ++qi) {
      RunningStat nmi_stat, ami_stat;
      for (int trial = 0; trial < cfg.n_trials; ++trial) {
        nmi_stat.add(values[trial][qi][0]);
        ami_stat.add(values[trial][qi][1]);
      }
      const std::string& ql = cfg.q_list[qi].label();
      result.rows.push_back({"baseline-vary-size", "NMI", ql, fraction,
                             nmi_stat.mean(), nmi_stat.stddev(), nmi_stat.n});
      result.rows.push_back({"baseline-vary-size", "AMI", ql, fraction,
                             ami_stat.mean(), ami_stat.stddev(), ami_stat.n});
    }
    ++sweep_index;
  }
  result.metadata_json = finish_metadata(config_echo(cfg));
  return result;
}

ExperimentResult run_approx_quality(const ExperimentConfig& cfg) {
  if (cfg.n_list.empty() || cfg.r_range.empty())
    throw std::invalid_argument("infeasible approx-quality config");

  ExperimentResult result;
  for (std::int64_t n : cfg.n_list) {
    std::string suffix = "_n" + std::to_string(n);
    for (int r : cfg.r_range) {
      ContingencyTable t = table_with_marginals(balanced_sizes(n, r),
                                                balanced_sizes(n, cfg.c_fixed));
      for (const QParam& q : cfg.q_list) {
        if (q.is_shannon()) continue;  // no closed-form limit to compare
        double exact = expected_joint_entropy(t, q);
        double limit = asymptotic_expected_measure(
            t, q, AsymptoticTarget::joint_entropy);
        result.rows.push_back({"approx-quality", "EHq_exact" + suffix,
                               q.label(), static_cast<double>(r), exact, 0.0,
                               1});
        result.rows.push_back({"approx-quality", "EHq_limit" + suffix,
                               q.label(), static_cast<double>(r), limit, 0.0,
                               1});
        result.rows.push_back({"approx-quality", "gap" + suffix, q.label(),
                               static_cast<double>(r), std::abs(exact - limit),
                               0.0, 1});
      }
    }
  }
  result.metadata_json = finish_metadata(config_echo(cfg));
  return result;
}

ExperimentResult run_scenario_q_sweep(
    const std::vector<std::pair<std::string, ContingencyTable>>& tables,
    const std::vector<double>& q_grid) {
  if (tables.size() < 2 || q_grid.size() < 2)
    throw std::invalid_argument("scenario sweep needs >= 2 tables and a grid");
  for (const auto& [name, t] : tables)
    if (t.col_marginals() != tables.front().second.col_marginals())
      throw std::invalid_argument(
          "scenario tables must share the reference V marginals");

  ExperimentResult result;
  for (double q : q_grid)
    for (const auto& [name, t] : tables)
      result.rows.push_back(
          {"scenario-q-sweep", name, "sweep", q, ami_at(t, q), 0.0, 1});

  // Pairwise crossings: sign change on the grid, then bisection to 1e-3.
  json crossings = json::array();
  for (std::size_t s = 0; s + 1 < tables.size(); ++s) {
    const auto& ta = tables[s].second;
    const auto& tb = tables[s + 1].second;
    auto diff = [&](double q) { return ami_at(ta, q) - ami_at(tb, q); };
    for (std::size_t k = 0; k + 1 < q_grid.size(); ++k) {
      double lo = q_grid[k], hi = q_grid[k + 1];
      double flo = diff(lo), fhi = diff(hi);
      if (flo == 0.0 || flo * fhi > 0.0) continue;
      while (hi - lo > 1e-3) {
        double mid = 0.5 * (lo + hi);
        double fmid = diff(mid);
        if (flo * fmid <= 0.0) {
          hi = mid;
        } else {
          lo = mid;
          flo = fmid;
        }
      }
      crossings.push_back({{"pair", tables[s].first + "/" + tables[s + 1].first},
                           {"q", 0.5 * (lo + hi)}});
    }
  }
  json meta;
  meta["experiment_id"] = "scenario-q-sweep";
  json names = json::array();
  for (const auto& [name, t] : tables) names.push_back(name);
  meta["tables"] = names;
  meta["crossings"] = crossings;
  result.metadata_json = finish_metadata(meta);
  return result;
}

ExperimentResult run_selection_bias(const ExperimentConfig& cfg) {
  if (cfg.n_trials < 1 || cfg.pool_r.empty() || cfg.q_list.empty())
    throw std::invalid_argument("infeasible selection-bias config");
  for (int r : cfg.pool_r)
    if (r < 1 || r > cfg.n_objects)
      throw std::invalid_argument("infeasible selection-bias pool");

  // Fixed balanced reference; only U is random, so a deterministic label
  // vector is enough.
  const auto v_sizes = balanced_sizes(cfg.n_objects, cfg.c_fixed);
  std::vector<int> v_labels;
  for (std::size_t k = 0; k < v_sizes.size(); ++k)
    v_labels.insert(v_labels.end(), static_cast<std::size_t>(v_sizes[k]),
                    static_cast<int>(k));

  const std::size_t nq = cfg.q_list.size();
  const std::size_t pool = cfg.pool_r.size();
  enum { kNmi = 0, kAmi = 1, kSmi = 2, kMeasures = 3 };

  // argmax pool index per (trial, q, measure)
  std::vector<std::vector<std::array<std::size_t, kMeasures>>> winner(
      static_cast<std::size_t>(cfg.n_trials),
      std::vector<std::array<std::size_t, kMeasures>>(nq));

  detail::parallel_for_index(
      static_cast<std::size_t>(cfg.n_trials), [&](std::size_t trial) {
        std::uint64_t s = derive_seed(cfg.seed, trial);
        std::vector<std::array<std::vector<double>, kMeasures>> scores(nq);
        for (std::size_t qi = 0; qi < nq; ++qi)
          for (int m = 0; m < kMeasures; ++m) scores[qi][m].resize(pool);

        for (std::size_t pi = 0; pi < pool; ++pi) {
          int r = cfg.pool_r[pi];
          auto u = random_partition(
              RandomPartitionSpec::uniform(cfg.n_objects, r),
              derive_seed(s, pi));
          ContingencyTable t = ContingencyTable::from_dense_labels(
              r, cfg.c_fixed, u, v_labels);
          for (std::size_t qi = 0; qi < nq; ++qi) {
            const QParam& q = cfg.q_list[qi];
            PhiMoments pm = phi_moments(t, q, /*with_second=*/true);
            scores[qi][kNmi][pi] = nmi(t, q);
            double num = pm.sum_actual - pm.e_sum;
            scores[qi][kAmi][pi] = num / (pm.marginal_half - pm.e_sum);
            double var = guarded_variance_from(*pm.e2_sum, pm.e_sum,
                                               "selection bias SMI");
            double sign = (q.is_shannon() || q.q() > 1.0) ? 1.0 : -1.0;
            scores[qi][kSmi][pi] = sign * num / std::sqrt(var);
          }
        }
        for (std::size_t qi = 0; qi < nq; ++qi)
          for (int m = 0; m < kMeasures; ++m) {
            std::size_t best = 0;
            for (std::size_t pi = 1; pi < pool; ++pi)
              if (scores[qi][m][pi] > scores[qi][m][best]) best = pi;
            winner[trial][qi][m] = best;  // ties keep the lowest r
          }
      });

  ExperimentResult result;
  const char* names[kMeasures] = {"NMI", "AMI", "SMI"};
  for (std::size_t qi = 0; qi < nq; ++qi)
    for (int m = 0; m < kMeasures; ++m) {
      std::vector<std::int64_t> histogram(pool, 0);
      for (int trial = 0; trial < cfg.n_trials; ++trial)
        ++histogram[winner[trial][qi][m]];
      for (std::size_t pi = 0; pi < pool; ++pi)
        result.rows.push_back(
            {"selection-bias", names[m], cfg.q_list[qi].label(),
             static_cast<double>(cfg.pool_r[pi]),
             static_cast<double>(histogram[pi]) /
                 static_cast<double>(cfg.n_trials),
             0.0, cfg.n_trials});
    }
  result.metadata_json = finish_metadata(config_echo(cfg));
  return result;
}

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  if (cfg.experiment_id == "baseline-vary-r") return run_baseline_vary_r(cfg);
  if (cfg.experiment_id == "baseline-vary-size")
    return run_baseline_vary_size(cfg);
  if (cfg.experiment_id == "approx-quality") return run_approx_quality(cfg);
  if (cfg.experiment_id == "scenario-q-sweep") {
    ExperimentResult all;
    json parts = json::array();
    for (const auto& s : {scenario_equal_sizes(), scenario_rare_clusters(),
                          scenario_balanced_reference()}) {
      auto part = run_scenario_q_sweep(
          {{s.name + ".pure", s.pure_solution},
           {s.name + ".spread", s.spread_solution}},
          default_q_grid());
      all.rows.insert(all.rows.end(), part.rows.begin(), part.rows.end());
      parts.push_back(json::parse(part.metadata_json));
    }
    json meta;
    meta["experiment_id"] = "scenario-q-sweep";
    meta["parts"] = parts;
    all.metadata_json = finish_metadata(meta);
    return all;
  }
  if (cfg.experiment_id == "selection-bias") return run_selection_bias(cfg);
  throw std::invalid_argument("unknown experiment id '" + cfg.experiment_id +
                              "'");
}

void write_experiment_csv(const ExperimentResult& result, std::ostream& os) {
  os << "experiment,measure,q,x,mean,std,n\n";
  for (const auto& row : result.rows)
    os << row.experiment << ',' << row.measure << ',' << row.q << ','
       << format_full(row.x) << ',' << format_full(row.mean) << ','
       << format_full(row.stddev) << ',' << row.n << '\n';
}

namespace {

ContingencyTable t3(std::initializer_list<std::initializer_list<std::int64_t>> g) {
  std::vector<std::vector<std::int64_t>> grid;
  for (auto& row : g) grid.emplace_back(row);
  return ContingencyTable::from_counts(grid);
}

}  // namespace

ScenarioPair scenario_equal_sizes() {
  return {"equal-sizes",
          t3({{50, 0, 0}, {0, 44, 6}, {0, 6, 44}}),
          t3({{48, 1, 1}, {1, 46, 3}, {1, 3, 46}})};
}

ScenarioPair scenario_rare_clusters() {
  return {"rare-clusters",
          t3({{8, 0, 0, 0}, {0, 7, 0, 0}, {0, 0, 7, 0}, {2, 3, 3, 70}}),
          t3({{7, 1, 1, 1}, {1, 7, 1, 1}, {1, 1, 7, 1}, {1, 1, 1, 67}})};
}

ScenarioPair scenario_balanced_reference() {
  return {"balanced-reference",
          t3({{17, 0, 0, 0}, {0, 17, 0, 0}, {0, 0, 17, 0}, {8, 8, 8, 25}}),
          t3({{20, 2, 1, 1}, {2, 20, 2, 1}, {1, 1, 20, 1}, {2, 2, 2, 22}})};
}

}  // namespace clucomp
