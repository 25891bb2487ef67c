#include "clucomp/adjusted.hpp"

#include <cmath>
#include <stdexcept>

#include "clucomp/errors.hpp"
#include "clucomp/measures.hpp"

namespace clucomp {

namespace {

// Zero thresholds for the adjustment ratios. The scaled phi sums are O(1)
// in magnitude, so an absolute 1e-12 scaled by the largest participating
// term separates true 0/0 degeneracy from small genuine values.
double zero_tol(double a, double b, double c) {
  return 1e-12 * std::max({1.0, std::abs(a), std::abs(b), std::abs(c)});
}

double adjust_ratio(double num, double den, double tol, const char* name,
                    DegenerateFlag& flag) {
  if (std::abs(den) <= tol) {
    if (std::abs(num) <= tol) {
      flag = DegenerateFlag::zero_denominator_defined_zero;
      return 0.0;
    }
    throw degenerate_error(std::string(name) +
                           " undefined: zero adjustment denominator with "
                           "nonzero numerator");
  }
  flag = DegenerateFlag::none;
  return num / den;
}

double smi_from(const PhiMoments& m, QParam q) {
  double raw_var =
      guarded_variance_from(*m.e2_sum, m.e_sum, "standardized measure");
  if (raw_var <= 0.0)
    throw degenerate_error(
        "SMI undefined: zero variance under the permutation model");
  // The measure-level numerator carries the 1/((q-1)N^q) factor, negative
  // for q < 1, while the standard deviation is positive by construction.
  double sign = (q.is_shannon() || q.q() > 1.0) ? 1.0 : -1.0;
  return sign * (m.sum_actual - m.e_sum) / std::sqrt(raw_var);
}

}  // namespace

double ami(const ContingencyTable& t, QParam q, DegenerateFlag& flag) {
  PhiMoments m = phi_moments(t, q, /*with_second=*/false);
  double num = m.sum_actual - m.e_sum;
  double den = m.marginal_half - m.e_sum;
  return adjust_ratio(num, den, zero_tol(m.sum_actual, m.marginal_half, m.e_sum),
                      "AMI", flag);
}

double ami(const ContingencyTable& t, QParam q) {
  DegenerateFlag flag;
  return ami(t, q, flag);
}

double avi(const ContingencyTable& t, QParam q) {
  double vi = variation_of_information(t, q);
  double evi = expected_variation_of_information(t, q);
  DegenerateFlag flag;
  return adjust_ratio(evi - vi, evi, zero_tol(vi, evi, 1.0), "AVI", flag);
}

double ari(const ContingencyTable& t, DegenerateFlag& flag) {
  if (t.total() < 2)
    throw degenerate_error("ARI undefined: fewer than two objects");
  PairCounts k = pair_counts(t);
  double pairs_both = static_cast<double>(k.same_same);
  double pairs_u = static_cast<double>(k.same_same + k.same_diff);
  double pairs_v = static_cast<double>(k.same_same + k.diff_same);
  double all_pairs = static_cast<double>(k.total_pairs());
  double expected = pairs_u * pairs_v / all_pairs;
  double maximum = 0.5 * (pairs_u + pairs_v);
  return adjust_ratio(pairs_both - expected, maximum - expected,
                      zero_tol(pairs_both, maximum, expected), "ARI", flag);
}

double ari(const ContingencyTable& t) {
  DegenerateFlag flag;
  return ari(t, flag);
}

double nvi(const ContingencyTable& t, QParam q) {
  double evi = expected_variation_of_information(t, q);
  if (evi <= zero_tol(evi, 1.0, 1.0))
    throw degenerate_error("NVI undefined: E[VI] = 0 (degenerate marginals)");
  return variation_of_information(t, q) / evi;
}

double smi(const ContingencyTable& t, QParam q) {
  return smi_from(phi_moments(t, q, /*with_second=*/true), q);
}

double svi(const ContingencyTable& t, QParam q) {
  double var_vi = variance_variation_of_information(t, q);
  if (var_vi <= 0.0)
    throw degenerate_error(
        "SVI undefined: zero variance under the permutation model");
  double vi = variation_of_information(t, q);
  double evi = expected_variation_of_information(t, q);
  return (evi - vi) / std::sqrt(var_vi);
}

double sri(const ContingencyTable& t) {
  if (t.total() < 2)
    throw degenerate_error("SRI undefined: fewer than two objects");
  // RI = alpha + beta sum n_ij^2 with constants from the marginals; the
  // moments of the cell-square sum come from the same hypergeometric
  // engine the generalized measures use, with phi(n) = n^2.
  const double n = static_cast<double>(t.total());
  double sum_sq_rows = 0.0, sum_sq_cols = 0.0;
  for (int i = 0; i < t.rows(); ++i) {
    double a = static_cast<double>(t.row_marginal(i));
    sum_sq_rows += a * a;
  }
  for (int j = 0; j < t.cols(); ++j) {
    double b = static_cast<double>(t.col_marginal(j));
    sum_sq_cols += b * b;
  }
  const double beta = 2.0 / (n * (n - 1.0));
  QParam q2 = QParam::tsallis(2.0);
  double e1 = expected_sum_phi(t, q2);
  double e2 = second_moment_sum_phi(t, q2);
  double var_ri =
      beta * beta * guarded_variance_from(e2, e1, "standardized Rand index");
  if (var_ri <= 0.0)
    throw degenerate_error(
        "SRI undefined: zero variance under the permutation model");

  double alpha = (n * n - n - sum_sq_rows - sum_sq_cols) / (n * (n - 1.0));
  double expected_ri = alpha + beta * e1;
  return (rand_index(t) - expected_ri) / std::sqrt(var_ri);
}

double p_value_bound(double smi_value) {
  if (!std::isfinite(smi_value))
    throw std::invalid_argument("p_value_bound needs a finite score");
  if (smi_value <= 0.0) return 1.0;
  return std::min(1.0, 1.0 / (1.0 + smi_value * smi_value));
}

AdjustedReport adjusted_report(const ContingencyTable& t, QParam q,
                               bool with_smi) {
  PhiMoments m = phi_moments(t, q, with_smi);

  AdjustedReport r;
  r.q = q;
  r.moments = moment_report_from(t, q, m);

  double num = m.sum_actual - m.e_sum;
  double den = m.marginal_half - m.e_sum;
  r.ami_q = adjust_ratio(num, den,
                         zero_tol(m.sum_actual, m.marginal_half, m.e_sum),
                         "AMI", r.degenerate_flag);
  if (r.degenerate_flag == DegenerateFlag::zero_denominator_defined_zero) {
    r.nvi_q = 0.0;  // U = V and no randomness; VI is identically 0
  } else {
    r.nvi_q = variation_of_information(t, q) / r.moments.e_vi;
  }
  if (with_smi) {
    r.smi_q = smi_from(m, q);
    if (*r.smi_q > 0.0) r.p_value_bound = p_value_bound(*r.smi_q);
  }
  return r;
}

}  // namespace clucomp
