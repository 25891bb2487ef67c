// clucomp: compare two clusterings of the same objects with pair-counting
// and generalized information-theoretic measures, compute their exact
// permutation-model moments, run the ground-truth oracles, or reproduce
// the bundled experiments.
//
// Exit codes: 0 ok, 2 input error, 3 degenerate measure, 4 config error.

#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "clucomp/adjusted.hpp"
#include "clucomp/contingency.hpp"
#include "clucomp/errors.hpp"
#include "clucomp/experiments.hpp"
#include "clucomp/io.hpp"
#include "clucomp/measures.hpp"
#include "clucomp/moments.hpp"
#include "clucomp/oracle.hpp"
#include "clucomp/report.hpp"
#include "clucomp/version.hpp"

namespace {

using namespace clucomp;
using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitDegenerate = 3;
constexpr int kExitConfig = 4;
constexpr std::int64_t kSmiGuardN = 2000;

struct InputSource {
  std::string labels_path;
  std::string table_path;
};

ContingencyTable load_table(const InputSource& in) {
  try {
    if (!in.labels_path.empty()) {
      LabelPairs pairs = read_label_pairs_file(in.labels_path);
      return ContingencyTable::from_labels(pairs.u, pairs.v);
    }
    return ContingencyTable::from_counts(read_count_grid_file(in.table_path));
  } catch (const std::invalid_argument& e) {
    // Structurally invalid content is an input error, not a config error.
    throw parse_error(e.what(), 0);
  }
}

std::vector<QParam> parse_q_list(const std::string& csv) {
  std::vector<QParam> qs;
  std::stringstream ss(csv);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (!tok.empty()) qs.push_back(parse_q_label(tok));
  }
  return qs;
}

std::vector<std::string> split_csv(const std::string& csv) {
  std::vector<std::string> out;
  std::stringstream ss(csv);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (!tok.empty()) out.push_back(tok);
  }
  return out;
}

std::vector<std::int64_t> parse_int_list(const std::string& csv) {
  std::vector<std::int64_t> out;
  for (const auto& tok : split_csv(csv)) out.push_back(std::stoll(tok));
  return out;
}

void write_output(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream os(out_path);
  if (!os) throw std::invalid_argument("cannot write to '" + out_path + "'");
  os << text;
}

// ---- compare ---------------------------------------------------------

int cmd_compare(const InputSource& in, const std::string& q_csv,
                const std::string& measures_csv, const std::string& format,
                const std::string& out_path, bool skip_smi, bool force_smi) {
  std::vector<QParam> qs = parse_q_list(q_csv);
  MeasureSelection sel;
  sel.ids = split_csv(measures_csv);
  sel.skip_smi = skip_smi;

  ContingencyTable t = load_table(in);

  bool smi_requested =
      !skip_smi && (sel.ids.empty()
                        ? !qs.empty()
                        : std::find(sel.ids.begin(), sel.ids.end(), "smi") !=
                              sel.ids.end());
  if (smi_requested && t.total() > kSmiGuardN && !force_smi) {
    std::cerr << "clucomp: N = " << t.total() << " exceeds " << kSmiGuardN
              << "; SMI costs O(N^3 c max(c,r)). Pass --force-smi to compute "
                 "it anyway or --skip-smi to drop it.\n";
    return kExitConfig;
  }

  MeasureReport report = compute_measure_report(t, qs, sel);
  if (format == "json")
    write_output(report_to_json(report), out_path);
  else if (format == "csv")
    write_output(report_to_csv(report), out_path);
  else
    write_output(report_to_human(report), out_path);
  return kExitOk;
}

// ---- moments ---------------------------------------------------------

json moment_report_json(const MomentReport& m) {
  json j;
  j["q"] = m.q.label();
  switch (m.method) {
    case MomentMethod::exact: j["method"] = "exact"; break;
    case MomentMethod::asymptotic: j["method"] = "asymptotic"; break;
    case MomentMethod::enumeration: j["method"] = "enumeration"; break;
    case MomentMethod::monte_carlo: j["method"] = "monte-carlo"; break;
  }
  j["e_sum_phi"] = m.e_sum_phi;
  if (m.e2_sum_phi) j["e2_sum_phi"] = *m.e2_sum_phi;
  j["e_joint_entropy"] = m.e_joint_entropy;
  j["e_mi"] = m.e_mi;
  j["e_vi"] = m.e_vi;
  if (m.var_joint_entropy) j["var_joint_entropy"] = *m.var_joint_entropy;
  if (m.var_mi) j["var_mi"] = *m.var_mi;
  if (m.var_vi) j["var_vi"] = *m.var_vi;
  return j;
}

std::string moment_report_text(const MomentReport& m, bool human) {
  auto fmt = human ? format_human : format_full;
  std::ostringstream os;
  os << "q,field,value\n";
  os << m.q.label() << ",e_sum_phi," << fmt(m.e_sum_phi) << "\n";
  if (m.e2_sum_phi)
    os << m.q.label() << ",e2_sum_phi," << fmt(*m.e2_sum_phi) << "\n";
  os << m.q.label() << ",e_joint_entropy," << fmt(m.e_joint_entropy) << "\n";
  os << m.q.label() << ",e_mi," << fmt(m.e_mi) << "\n";
  os << m.q.label() << ",e_vi," << fmt(m.e_vi) << "\n";
  if (m.var_joint_entropy)
    os << m.q.label() << ",var_joint_entropy," << fmt(*m.var_joint_entropy)
       << "\n";
  if (m.var_mi) os << m.q.label() << ",var_mi," << fmt(*m.var_mi) << "\n";
  if (m.var_vi) os << m.q.label() << ",var_vi," << fmt(*m.var_vi) << "\n";
  return os.str();
}

MomentReport moments_by_method(const ContingencyTable& t, QParam q,
                               const std::string& method, bool with_variance,
                               std::int64_t samples, std::uint64_t seed,
                               bool seed_given) {
  if (method == "exact") return exact_moment_report(t, q, with_variance);

  MomentReport m;
  m.q = q;
  if (method == "asymptotic") {
    m.method = MomentMethod::asymptotic;
    m.e_joint_entropy =
        asymptotic_expected_measure(t, q, AsymptoticTarget::joint_entropy);
    m.e_mi =
        asymptotic_expected_measure(t, q, AsymptoticTarget::mutual_information);
    m.e_vi = asymptotic_expected_measure(
        t, q, AsymptoticTarget::variation_of_information);
    // Marginal-product substitution for the cell sum itself.
    double s = 0.0;
    double n = static_cast<double>(t.total());
    for (int i = 0; i < t.rows(); ++i)
      for (int j = 0; j < t.cols(); ++j) {
        double prod = static_cast<double>(t.row_marginal(i)) *
                      static_cast<double>(t.col_marginal(j)) / n;
        s += q.is_shannon() ? (prod / n) * std::log(prod / n)
                            : std::pow(prod, q.q());
      }
    m.e_sum_phi = s;
    return m;
  }

  const auto a = t.row_marginals();
  const auto b = t.col_marginals();
  auto stat_sumphi = [&](const ContingencyTable& s) {
    double acc = 0.0;
    double n = static_cast<double>(s.total());
    for (int i = 0; i < s.rows(); ++i)
      for (int j = 0; j < s.cols(); ++j) {
        std::int64_t v = s.at(i, j);
        if (v == 0) continue;
        acc += q.is_shannon()
                   ? (static_cast<double>(v) / n) *
                         std::log(static_cast<double>(v) / n)
                   : std::pow(static_cast<double>(v), q.q());
      }
    return acc;
  };
  auto stat_h = [&](const ContingencyTable& s) { return joint_entropy(s, q); };
  auto stat_mi = [&](const ContingencyTable& s) {
    return mutual_information(s, q);
  };
  auto stat_vi = [&](const ContingencyTable& s) {
    return variation_of_information(s, q);
  };

  auto run = [&](const TableStatistic& stat) {
    if (method == "enumeration") return enumerate_moments(a, b, stat);
    if (!seed_given)
      throw std::invalid_argument("--seed is required for --method mc");
    return monte_carlo_moments(a, b, stat, samples, seed);
  };

  OracleMoments sp = run(stat_sumphi);
  OracleMoments h = run(stat_h);
  OracleMoments mi = run(stat_mi);
  OracleMoments vi = run(stat_vi);
  m.method = method == "enumeration" ? MomentMethod::enumeration
                                     : MomentMethod::monte_carlo;
  m.e_sum_phi = sp.mean;
  m.e2_sum_phi = sp.variance + sp.mean * sp.mean;
  m.e_joint_entropy = h.mean;
  m.e_mi = mi.mean;
  m.e_vi = vi.mean;
  m.var_joint_entropy = h.variance;
  m.var_mi = mi.variance;
  m.var_vi = vi.variance;
  return m;
}

int cmd_moments(const InputSource& in, const std::string& q_csv,
                const std::string& method, bool skip_variance, bool force,
                std::int64_t samples, std::uint64_t seed, bool seed_given,
                const std::string& format, const std::string& out_path) {
  std::vector<QParam> qs = parse_q_list(q_csv);
  if (qs.empty()) qs.push_back(QParam::shannon());

  ContingencyTable t = load_table(in);
  bool with_variance = !skip_variance;
  if (method == "exact" && with_variance && t.total() > kSmiGuardN && !force) {
    std::cerr << "clucomp: N = " << t.total() << " exceeds " << kSmiGuardN
              << "; the exact second moment costs O(N^3 c max(c,r)). Pass "
                 "--force or --skip-variance.\n";
    return kExitConfig;
  }

  std::vector<MomentReport> reports;
  for (const QParam& q : qs)
    reports.push_back(
        moments_by_method(t, q, method, with_variance, samples, seed,
                          seed_given));

  if (format == "json") {
    json j;
    j["n"] = t.total();
    j["table"]["counts"] = t.grid();
    j["moments"] = json::array();
    for (const auto& m : reports) j["moments"].push_back(moment_report_json(m));
    write_output(j.dump(2) + "\n", out_path);
  } else {
    std::string text;
    for (const auto& m : reports)
      text += moment_report_text(m, format == "human");
    write_output(text, out_path);
  }
  return kExitOk;
}

// ---- oracle ----------------------------------------------------------

int cmd_oracle(const std::string& a_csv, const std::string& b_csv,
               const std::string& statistic, const std::string& q_label,
               const std::string& mode, std::int64_t samples,
               std::uint64_t seed, const std::string& format,
               const std::string& out_path) {
  std::vector<std::int64_t> a = parse_int_list(a_csv);
  std::vector<std::int64_t> b = parse_int_list(b_csv);
  QParam q = parse_q_label(q_label);

  TableStatistic stat;
  if (statistic == "sumphi") {
    stat = [q](const ContingencyTable& s) {
      double acc = 0.0;
      double n = static_cast<double>(s.total());
      for (int i = 0; i < s.rows(); ++i)
        for (int j = 0; j < s.cols(); ++j) {
          std::int64_t v = s.at(i, j);
          if (v == 0) continue;
          acc += q.is_shannon()
                     ? (static_cast<double>(v) / n) *
                           std::log(static_cast<double>(v) / n)
                     : std::pow(static_cast<double>(v), q.q());
        }
      return acc;
    };
  } else if (statistic == "jointh") {
    stat = [q](const ContingencyTable& s) { return joint_entropy(s, q); };
  } else if (statistic == "mi") {
    stat = [q](const ContingencyTable& s) { return mutual_information(s, q); };
  } else if (statistic == "vi") {
    stat = [q](const ContingencyTable& s) {
      return variation_of_information(s, q);
    };
  } else if (statistic == "ri") {
    stat = [](const ContingencyTable& s) { return rand_index(s); };
  } else {
    throw std::invalid_argument("unknown statistic '" + statistic + "'");
  }

  OracleMoments m;
  if (mode == "enumerate")
    m = enumerate_moments(a, b, stat);
  else if (mode == "bruteforce")
    m = permutation_brute_force_moments(a, b, stat);
  else if (mode == "mc")
    m = monte_carlo_moments(a, b, stat, samples, seed);
  else
    throw std::invalid_argument("unknown oracle mode '" + mode + "'");

  json j;
  j["row_marginals"] = a;
  j["col_marginals"] = b;
  j["statistic"] = statistic;
  j["q"] = q.label();
  j["mode"] = mode;
  j["seed"] = seed;
  j["mean"] = m.mean;
  j["variance"] = m.variance;
  j["n_outcomes_or_samples"] = m.n_outcomes_or_samples;
  j["method"] =
      m.method == OracleMethod::enumeration ? "enumeration" : "monte-carlo";
  if (m.ci99_halfwidth) j["ci99_halfwidth"] = *m.ci99_halfwidth;

  if (format == "json") {
    write_output(j.dump(2) + "\n", out_path);
  } else {
    auto fmt = format == "human" ? format_human : format_full;
    std::ostringstream os;
    os << "field,value\n";
    os << "mean," << fmt(m.mean) << "\n";
    os << "variance," << fmt(m.variance) << "\n";
    os << "n," << m.n_outcomes_or_samples << "\n";
    if (m.ci99_halfwidth)
      os << "ci99_halfwidth," << fmt(*m.ci99_halfwidth) << "\n";
    write_output(os.str(), out_path);
  }
  return kExitOk;
}

// ---- experiment ------------------------------------------------------

ExperimentConfig config_from_json_file(const std::string& id,
                                       const std::string& path) {
  ExperimentConfig cfg = default_config(id);
  if (path.empty()) return cfg;
  std::ifstream is(path);
  if (!is) throw std::invalid_argument("cannot open config '" + path + "'");
  json j = json::parse(is, nullptr, /*allow_exceptions=*/true);
  if (j.contains("n_objects")) cfg.n_objects = j["n_objects"].get<std::int64_t>();
  if (j.contains("n_trials")) cfg.n_trials = j["n_trials"].get<int>();
  if (j.contains("c_fixed")) cfg.c_fixed = j["c_fixed"].get<int>();
  if (j.contains("seed")) cfg.seed = j["seed"].get<std::uint64_t>();
  if (j.contains("r_range")) cfg.r_range = j["r_range"].get<std::vector<int>>();
  if (j.contains("pool_r")) cfg.pool_r = j["pool_r"].get<std::vector<int>>();
  if (j.contains("n_list"))
    cfg.n_list = j["n_list"].get<std::vector<std::int64_t>>();
  if (j.contains("size_fractions"))
    cfg.size_fractions = j["size_fractions"].get<std::vector<double>>();
  if (j.contains("q_list")) {
    cfg.q_list.clear();
    for (const auto& e : j["q_list"]) {
      if (e.is_string())
        cfg.q_list.push_back(parse_q_label(e.get<std::string>()));
      else
        cfg.q_list.push_back(QParam::tsallis(e.get<double>()));
    }
  }
  return cfg;
}

int cmd_experiment(const std::string& id, const std::string& config_path,
                   std::uint64_t seed, bool seed_given, int trials,
                   const std::string& out_path) {
  ExperimentConfig cfg = config_from_json_file(id, config_path);
  if (seed_given) cfg.seed = seed;
  if (trials > 0) cfg.n_trials = trials;

  ExperimentResult result = run_experiment(cfg);

  std::ofstream csv(out_path);
  if (!csv) throw std::invalid_argument("cannot write to '" + out_path + "'");
  write_experiment_csv(result, csv);
  std::ofstream meta(out_path + ".meta.json");
  if (!meta)
    throw std::invalid_argument("cannot write to '" + out_path +
                                ".meta.json'");
  meta << result.metadata_json;
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"clustering comparison measures with exact chance adjustment"};
  app.set_version_flag("--version", std::string("clucomp ") + kVersion);
  app.require_subcommand(1);

  // compare
  auto* compare = app.add_subcommand(
      "compare", "compare two labelings or a contingency table");
  InputSource cmp_in;
  std::string cmp_q, cmp_measures, cmp_format = "human", cmp_out;
  bool cmp_skip_smi = false, cmp_force_smi = false;
  auto* cmp_labels =
      compare->add_option("--labels", cmp_in.labels_path,
                          "label file: one object per line, two tokens");
  auto* cmp_table = compare->add_option("--table", cmp_in.table_path,
                                        "contingency file: one row per line");
  cmp_labels->excludes(cmp_table);
  compare->add_option("--q", cmp_q,
                      "comma-separated entropy orders (e.g. 0.5,2 or shannon)");
  compare->add_option("--measures", cmp_measures,
                      "subset: ri,mk,jaccard,ari,mi,vi,nmi,ami,nvi,smi");
  compare->add_option("--format", cmp_format, "json|csv|human")
      ->check(CLI::IsMember({"json", "csv", "human"}));
  compare->add_option("--out", cmp_out, "output path (default stdout)");
  compare->add_flag("--skip-smi", cmp_skip_smi, "never compute SMI");
  compare->add_flag("--force-smi", cmp_force_smi,
                    "compute SMI even for N > 2000");

  // moments
  auto* moments = app.add_subcommand(
      "moments", "permutation-model expectations and variances");
  InputSource mom_in;
  std::string mom_q, mom_method = "exact", mom_format = "human", mom_out;
  bool mom_skip_var = false, mom_force = false;
  std::int64_t mom_samples = 100000;
  std::uint64_t mom_seed = 0;
  auto* mom_labels = moments->add_option("--labels", mom_in.labels_path,
                                         "label file input");
  auto* mom_table =
      moments->add_option("--table", mom_in.table_path, "contingency input");
  mom_labels->excludes(mom_table);
  moments->add_option("--q", mom_q, "entropy orders (default shannon)");
  moments->add_option("--method", mom_method, "exact|asymptotic|enumeration|mc")
      ->check(CLI::IsMember({"exact", "asymptotic", "enumeration", "mc"}));
  moments->add_flag("--skip-variance", mom_skip_var,
                    "expectations only (skips the cubic second moment)");
  moments->add_flag("--force", mom_force,
                    "compute the exact variance even for N > 2000");
  moments->add_option("--samples", mom_samples, "mc sample count");
  auto* mom_seed_opt =
      moments->add_option("--seed", mom_seed, "mc seed (required for mc)");
  moments->add_option("--format", mom_format, "json|csv|human")
      ->check(CLI::IsMember({"json", "csv", "human"}));
  moments->add_option("--out", mom_out, "output path (default stdout)");

  // oracle
  auto* oracle = app.add_subcommand(
      "oracle", "ground-truth enumeration / Monte-Carlo moments");
  std::string ora_a, ora_b, ora_stat = "sumphi", ora_q = "shannon",
              ora_mode = "enumerate", ora_format = "human", ora_out;
  std::int64_t ora_samples = 100000;
  std::uint64_t ora_seed = 0;
  oracle->add_option("--a", ora_a, "row marginals, e.g. 2,2,1")->required();
  oracle->add_option("--b", ora_b, "column marginals")->required();
  oracle->add_option("--statistic", ora_stat, "sumphi|jointh|mi|vi|ri");
  oracle->add_option("--q", ora_q, "entropy order for the statistic");
  oracle->add_option("--mode", ora_mode, "enumerate|bruteforce|mc")
      ->check(CLI::IsMember({"enumerate", "bruteforce", "mc"}));
  oracle->add_option("--samples", ora_samples, "mc sample count");
  oracle->add_option("--seed", ora_seed, "rng seed")->required();
  oracle->add_option("--format", ora_format, "json|csv|human")
      ->check(CLI::IsMember({"json", "csv", "human"}));
  oracle->add_option("--out", ora_out, "output path (default stdout)");

  // experiment
  auto* experiment =
      app.add_subcommand("experiment", "run a bundled experiment");
  std::string exp_id, exp_config, exp_out;
  std::uint64_t exp_seed = 0;
  int exp_trials = 0;
  experiment
      ->add_option("--id", exp_id,
                   "baseline-vary-r|baseline-vary-size|approx-quality|"
                   "scenario-q-sweep|selection-bias")
      ->required();
  experiment->add_option("--config", exp_config, "JSON config overrides");
  auto* exp_seed_opt =
      experiment->add_option("--seed", exp_seed, "master seed override");
  experiment->add_option("--trials", exp_trials, "trial count override");
  experiment->add_option("--out", exp_out, "CSV output path (required); the "
                                           "metadata sidecar lands next to it")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (compare->parsed()) {
      if (cmp_in.labels_path.empty() == cmp_in.table_path.empty()) {
        std::cerr << "clucomp: exactly one of --labels/--table is required\n";
        return kExitConfig;
      }
      return cmd_compare(cmp_in, cmp_q, cmp_measures, cmp_format, cmp_out,
                         cmp_skip_smi, cmp_force_smi);
    }
    if (moments->parsed()) {
      if (mom_in.labels_path.empty() == mom_in.table_path.empty()) {
        std::cerr << "clucomp: exactly one of --labels/--table is required\n";
        return kExitConfig;
      }
      return cmd_moments(mom_in, mom_q, mom_method, mom_skip_var, mom_force,
                         mom_samples, mom_seed, !mom_seed_opt->empty(),
                         mom_format, mom_out);
    }
    if (oracle->parsed())
      return cmd_oracle(ora_a, ora_b, ora_stat, ora_q, ora_mode, ora_samples,
                        ora_seed, ora_format, ora_out);
    if (experiment->parsed())
      return cmd_experiment(exp_id, exp_config, exp_seed,
                            !exp_seed_opt->empty(), exp_trials, exp_out);
    return kExitConfig;
  } catch (const parse_error& e) {
    std::cerr << "clucomp: input error: " << e.what() << "\n";
    return kExitInput;
  } catch (const degenerate_error& e) {
    std::cerr << "clucomp: " << e.what() << "\n";
    return kExitDegenerate;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "clucomp: config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    std::cerr << "clucomp: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "clucomp: internal error: " << e.what() << "\n";
    return 1;
  }
}
