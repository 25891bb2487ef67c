#include "clucomp/report.hpp"

#include <algorithm>
#include <sstream>

#include "json.hpp"

#include "clucomp/errors.hpp"
#include "clucomp/io.hpp"
#include "clucomp/measures.hpp"

namespace clucomp {

namespace {

using nlohmann::json;

const char* kPlainQ = "-";

bool wants(const MeasureSelection& sel, const std::string& id) {
  return std::find(sel.ids.begin(), sel.ids.end(), id) != sel.ids.end();
}

void push(MeasureReport& r, const std::string& id, const std::string& q,
          double v) {
  r.entries.push_back({id, q, v});
}

}  // namespace

QParam parse_q_label(const std::string& label) {
  if (label == "shannon" || label == "Shannon" || label == kPlainQ)
    return QParam::shannon();
  std::size_t pos = 0;
  double q = 0.0;
  try {
    q = std::stod(label, &pos);
  } catch (const std::exception&) {
    throw std::invalid_argument("bad entropy order '" + label + "'");
  }
  if (pos != label.size())
    throw std::invalid_argument("bad entropy order '" + label + "'");
  return QParam::tsallis(q);
}

double evaluate_measure(const ContingencyTable& t, const std::string& id,
                        const std::string& q_label) {
  if (id == "RI") return rand_index(t);
  if (id == "MK") return mirkin_index(t);
  if (id == "Jaccard") return jaccard(t);
  if (id == "ARI") return ari(t);
  QParam q = parse_q_label(q_label);
  if (id == "MI") return mutual_information(t, q);
  if (id == "VI") return variation_of_information(t, q);
  if (id == "JointH") return joint_entropy(t, q);
  if (id == "NMI") return nmi(t, q);
  if (id == "AMI") return ami(t, q);
  if (id == "NVI") return nvi(t, q);
  if (id == "SMI") return smi(t, q);
  if (id == "SMI_p_bound") return p_value_bound(smi(t, q));
  throw std::invalid_argument("unknown measure '" + id + "'");
}

MeasureReport compute_measure_report(const ContingencyTable& t,
                                     const std::vector<QParam>& qs,
                                     const MeasureSelection& sel) {
  MeasureReport r{t, {}, {}};
  const QParam sh = QParam::shannon();

  auto emit_ami = [&](QParam q) {
    DegenerateFlag flag = DegenerateFlag::none;
    push(r, "AMI", q.label(), ami(t, q, flag));
    if (flag == DegenerateFlag::zero_denominator_defined_zero)
      r.notes.push_back("AMI(q=" + q.label() +
                        "): 0/0 adjustment, defined as 0");
  };
  auto emit_smi = [&](QParam q) {
    if (sel.skip_smi) return;
    double s = smi(t, q);
    push(r, "SMI", q.label(), s);
    if (s > 0.0) push(r, "SMI_p_bound", q.label(), p_value_bound(s));
  };

  if (sel.ids.empty()) {
    push(r, "RI", kPlainQ, rand_index(t));
    {
      DegenerateFlag flag = DegenerateFlag::none;
      push(r, "ARI", kPlainQ, ari(t, flag));
      if (flag == DegenerateFlag::zero_denominator_defined_zero)
        r.notes.push_back("ARI: 0/0 adjustment, defined as 0");
    }
    push(r, "MI", sh.label(), mutual_information(t, sh));
    emit_ami(sh);
    push(r, "VI", sh.label(), variation_of_information(t, sh));
    for (const QParam& q : qs) {
      if (!q.is_shannon()) emit_ami(q);
      emit_smi(q);
    }
    return r;
  }

  if (wants(sel, "ri")) push(r, "RI", kPlainQ, rand_index(t));
  if (wants(sel, "mk")) push(r, "MK", kPlainQ, mirkin_index(t));
  if (wants(sel, "jaccard")) push(r, "Jaccard", kPlainQ, jaccard(t));
  if (wants(sel, "ari")) push(r, "ARI", kPlainQ, ari(t));
  std::vector<QParam> order = qs.empty() ? std::vector<QParam>{sh} : qs;
  for (const QParam& q : order) {
    if (wants(sel, "mi")) push(r, "MI", q.label(), mutual_information(t, q));
    if (wants(sel, "vi"))
      push(r, "VI", q.label(), variation_of_information(t, q));
    if (wants(sel, "jointh")) push(r, "JointH", q.label(), joint_entropy(t, q));
    if (wants(sel, "nmi")) push(r, "NMI", q.label(), nmi(t, q));
    if (wants(sel, "ami")) emit_ami(q);
    if (wants(sel, "nvi")) push(r, "NVI", q.label(), nvi(t, q));
    if (wants(sel, "smi")) emit_smi(q);
  }
  return r;
}

std::string report_to_json(const MeasureReport& r) {
  json j;
  j["n"] = r.table.total();
  j["table"]["counts"] = r.table.grid();
  json measures = json::array();
  for (const auto& e : r.entries)
    measures.push_back({{"measure", e.measure}, {"q", e.q}, {"value", e.value}});
  j["measures"] = measures;
  if (!r.notes.empty()) j["notes"] = r.notes;
  return j.dump(2) + "\n";
}

std::string report_to_csv(const MeasureReport& r) {
  std::ostringstream os;
  os << "measure,q,value\n";
  for (const auto& e : r.entries)
    os << e.measure << ',' << e.q << ',' << format_full(e.value) << '\n';
  return os.str();
}

std::string report_to_human(const MeasureReport& r) {
  std::ostringstream os;
  os << "objects: " << r.table.total() << "  table: " << r.table.rows() << "x"
     << r.table.cols() << "\n";
  for (const auto& e : r.entries) {
    std::string name = e.measure;
    if (e.q != kPlainQ) name += "(q=" + e.q + ")";
    os << "  " << name;
    for (std::size_t k = name.size(); k < 24; ++k) os << ' ';
    os << format_human(e.value) << "\n";
  }
  for (const auto& note : r.notes) os << "  note: " << note << "\n";
  return os.str();
}

}  // namespace clucomp
