#pragma once

#include <optional>
#include <string>
#include <vector>

#include "clucomp/adjusted.hpp"
#include "clucomp/contingency.hpp"
#include "clucomp/qparam.hpp"

namespace clucomp {

/// All requested indices for one (U,V) pair, serializable to JSON/CSV.
/// The q column is "-" for measures without an order parameter.
struct MeasureEntry {
  std::string measure;
  std::string q;
  double value = 0.0;
};

struct MeasureReport {
  ContingencyTable table;
  std::vector<MeasureEntry> entries;
  std::vector<std::string> notes;  // degeneracy flags etc.
};

/// Which measures to emit. When `ids` is empty the default set applies:
/// RI, ARI, Shannon MI/AMI/VI, then AMI_q and SMI_q (with the p-value
/// bound) for every requested q.
struct MeasureSelection {
  std::vector<std::string> ids;  // from: ri mk jaccard ari mi vi nmi ami nvi smi
  bool skip_smi = false;
};

MeasureReport compute_measure_report(const ContingencyTable& t,
                                     const std::vector<QParam>& qs,
                                     const MeasureSelection& sel = {});

/// One measure by id at one order; the round-trip tests recompute every
/// serialized entry through this.
double evaluate_measure(const ContingencyTable& t, const std::string& id,
                        const std::string& q_label);

/// "shannon" or a positive real != 1.
QParam parse_q_label(const std::string& label);

std::string report_to_json(const MeasureReport& r);
std::string report_to_csv(const MeasureReport& r);
std::string report_to_human(const MeasureReport& r);

}  // namespace clucomp
