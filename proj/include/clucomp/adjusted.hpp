#pragma once

#include <optional>

#include "clucomp/contingency.hpp"
#include "clucomp/moments.hpp"
#include "clucomp/qparam.hpp"

namespace clucomp {

/// Chance-adjusted and standardized indices under the fixed-marginal
/// permutation model, plus the classic special cases they reduce to.

enum class DegenerateFlag {
  none,
  zero_denominator_defined_zero,  // 0/0 adjustment, reported as 0
};

/// AMI_q = (sum n_ij^q - sum E[n_ij^q]) /
///         ((sum a_i^q + sum b_j^q)/2 - sum E[n_ij^q]);
/// the Shannon variant is the "sum" normalization of adjusted MI. 1 when
/// U = V, ~0 for independent random partitions. A 0/0 adjustment (e.g.
/// both partitions single-cluster) returns 0; a zero denominator with a
/// nonzero numerator throws degenerate_error.
double ami(const ContingencyTable& t, QParam q);
double ami(const ContingencyTable& t, QParam q, DegenerateFlag& flag);

/// AVI_q assembled independently from expectation-normalized VI_q:
/// (E[VI_q] - VI_q) / E[VI_q]. Equals ami() analytically; kept as a
/// distinct code path for cross-checking.
double avi(const ContingencyTable& t, QParam q);

/// Adjusted Rand index in the classic pair-count closed form, independent
/// of the moment engine. Equals ami(t, tsallis(2)).
double ari(const ContingencyTable& t);
double ari(const ContingencyTable& t, DegenerateFlag& flag);

/// NVI_q = VI_q / E[VI_q]: 0 when U = V, 1 in expectation under
/// randomness; satisfies ami + nvi = 1. Undefined when E[VI_q] = 0.
double nvi(const ContingencyTable& t, QParam q);

/// SMI_q = (MI_q - E[MI_q]) / sqrt(Var(MI_q)). Undefined when the
/// permutation-model variance vanishes (deterministic table family).
double smi(const ContingencyTable& t, QParam q);

/// SVI_q = (E[VI_q] - VI_q) / sqrt(Var(VI_q)), assembled from its own
/// definition; equals smi() analytically.
double svi(const ContingencyTable& t, QParam q);

/// Standardized Rand index (RI - E[RI]) / sqrt(Var(RI)) through the
/// cell-sum engine with phi(n) = n^2; equals smi(t, tsallis(2)).
double sri(const ContingencyTable& t);

/// One-sided Cantelli bound on the p-value of the independence test:
/// 1/(1 + smi^2) for positive smi, else 1.
double p_value_bound(double smi_value);

/// Everything above for one (table, q) pair. smi and the p-value bound
/// are computed only when with_smi is set (the second moment is cubic in
/// N). p_value_bound is present only when smi is present and positive.
struct AdjustedReport {
  double ami_q = 0.0;
  double nvi_q = 0.0;
  std::optional<double> smi_q;
  std::optional<double> p_value_bound;
  QParam q = QParam::shannon();
  MomentReport moments;
  DegenerateFlag degenerate_flag = DegenerateFlag::none;
};

AdjustedReport adjusted_report(const ContingencyTable& t, QParam q,
                               bool with_smi);

}  // namespace clucomp
