#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "clucomp/contingency.hpp"
#include "clucomp/qparam.hpp"

namespace clucomp {

/// Exact permutation-model (fixed-marginal) expectations and variances of
/// cell-sum statistics and of the q-entropy measures built from them,
/// plus large-N closed forms. Under the model each cell n_ij is
/// marginally hypergeometric in (a_i, b_j, N).

struct PmfTerm {
  std::int64_t value;
  double prob;
};

/// Hypergeometric PMF over its support [max(0, a+b-N), min(a,b)], first
/// term seeded in log-factorial space, the rest via the ratio recurrence.
/// Probabilities sum to 1 within 1e-12.
std::vector<PmfTerm> hypergeometric_pmf_series(std::int64_t a, std::int64_t b,
                                               std::int64_t n_total);

/// E[phi(n)] for n ~ Hyp(a, b, n_total) with the family's cell function:
/// phi(n) = n^q for Tsallis, (n/n_total) ln(n/n_total) for Shannon.
double expected_phi_cell(std::int64_t a, std::int64_t b, std::int64_t n_total,
                         QParam q);

/// Generic-phi overload (tests and one-off statistics).
double expected_phi_cell(std::int64_t a, std::int64_t b, std::int64_t n_total,
                         const std::function<double(std::int64_t)>& phi);

/// E[sum_ij phi(n_ij)] = sum_ij E[phi(n_ij)]; O(N max(r,c)).
double expected_sum_phi(const ContingencyTable& t, QParam q);

/// E[(sum_ij phi(n_ij))^2] by the four-case nested conditioning over
/// hypergeometric cells; O(N^3 c max(c,r)) after orienting the table so
/// the column count is min(r,c).
double second_moment_sum_phi(const ContingencyTable& t, QParam q);

/// Exact expectations of the q-entropy measures under the model.
double expected_joint_entropy(const ContingencyTable& t, QParam q);
double expected_mutual_information(const ContingencyTable& t, QParam q);
double expected_variation_of_information(const ContingencyTable& t, QParam q);

/// Exact variances; Var(MI_q) = Var(H_q(U,V)) and Var(VI_q) = 4 Var(H_q(U,V)).
double variance_joint_entropy(const ContingencyTable& t, QParam q);
double variance_mutual_information(const ContingencyTable& t, QParam q);
double variance_variation_of_information(const ContingencyTable& t, QParam q);

/// Large-N limits from the marginals alone (Tsallis only):
///   E[H_q(U,V)]  -> H_q(U) + H_q(V) - (q-1) H_q(U) H_q(V)
///   E[MI_q]      -> (q-1) H_q(U) H_q(V)
///   E[VI_q]      -> H_q(U) + H_q(V) - 2 (q-1) H_q(U) H_q(V)
enum class AsymptoticTarget {
  joint_entropy,
  mutual_information,
  variation_of_information
};
double asymptotic_expected_measure(const ContingencyTable& t, QParam q,
                                   AsymptoticTarget target);

/// Large-N expectation of the Jaccard coefficient by marginal-product
/// substitution (Jaccard admits no exact cell-sum form).
double asymptotic_expected_jaccard(const ContingencyTable& t);

/// Exact Var(MI_q) on the table with all counts multiplied by k; the
/// variance-vanishing trend harness evaluates this at growing k.
double exact_variance_mi_at_scale(const ContingencyTable& t, QParam q,
                                  std::int64_t k);

enum class MomentMethod { exact, asymptotic, enumeration, monte_carlo };

struct MomentReport {
  double e_sum_phi = 0.0;
  std::optional<double> e2_sum_phi;
  double e_joint_entropy = 0.0;
  double e_mi = 0.0;
  double e_vi = 0.0;
  std::optional<double> var_joint_entropy;
  std::optional<double> var_mi;
  std::optional<double> var_vi;
  MomentMethod method = MomentMethod::exact;
  QParam q = QParam::shannon();
};

/// Full exact report; the second moment (cubic in N) is skipped when
/// with_variance is false.
MomentReport exact_moment_report(const ContingencyTable& t, QParam q,
                                 bool with_variance = true);

/// Guarded e2 - e1^2: negatives within rounding noise clamp to 0, larger
/// ones throw internal_error.
double guarded_variance_from(double e2, double e1, const char* context);

/// Scaled building blocks shared with the adjusted measures: phi is
/// (n/N)^q for Tsallis (keeps sums O(1) regardless of N) and the Shannon
/// cell term otherwise.
struct PhiMoments {
  double sum_actual = 0.0;     // sum phi(n_ij) of the observed table
  double marginal_half = 0.0;  // (sum phi(a_i) + sum phi(b_j)) / 2
  double e_sum = 0.0;          // E[sum phi(n_ij)]
  std::optional<double> e2_sum;
};
PhiMoments phi_moments(const ContingencyTable& t, QParam q, bool with_second);

/// MomentReport assembled from precomputed blocks; avoids re-running the
/// second moment when a caller already holds PhiMoments.
MomentReport moment_report_from(const ContingencyTable& t, QParam q,
                                const PhiMoments& m);

}  // namespace clucomp
