#include "clucomp/moments.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "clucomp/detail/hypergeom.hpp"
#include "clucomp/detail/kahan.hpp"
#include "clucomp/detail/threads.hpp"
#include "clucomp/errors.hpp"
#include "clucomp/measures.hpp"

namespace clucomp {

namespace {

using detail::for_each_hypergeom;
using detail::KahanSum;
using detail::LogFactorials;

// Cell function phi tabulated over 0..N. phi(0) = 0 for every family.
struct PhiTable {
  std::vector<double> v;
  double operator()(std::int64_t n) const {
    return v[static_cast<std::size_t>(n)];
  }
};

// Tsallis power family. scaled=true evaluates (n/N)^q, which keeps all
// engine sums O(1) in magnitude; scaled=false is the plain n^q surface.
PhiTable power_phi(std::int64_t n_total, double q, bool scaled) {
  PhiTable t;
  t.v.resize(static_cast<std::size_t>(n_total) + 1);
  t.v[0] = 0.0;
  const double denom = scaled ? static_cast<double>(n_total) : 1.0;
  for (std::int64_t n = 1; n <= n_total; ++n)
    t.v[static_cast<std::size_t>(n)] = std::pow(static_cast<double>(n) / denom, q);
  return t;
}

// Shannon cell term (n/N) ln(n/N); the joint entropy is minus its sum.
PhiTable shannon_phi(std::int64_t n_total) {
  PhiTable t;
  t.v.resize(static_cast<std::size_t>(n_total) + 1);
  t.v[0] = 0.0;
  for (std::int64_t n = 1; n <= n_total; ++n) {
    double p = static_cast<double>(n) / static_cast<double>(n_total);
    t.v[static_cast<std::size_t>(n)] = p * std::log(p);
  }
  return t;
}

PhiTable family_phi(std::int64_t n_total, QParam q, bool scaled) {
  return q.is_shannon() ? shannon_phi(n_total)
                        : power_phi(n_total, q.q(), scaled);
}

template <class Phi>
double expected_phi_hyp(std::int64_t draws, std::int64_t succ,
                        std::int64_t pop, const LogFactorials& lf,
                        const Phi& phi) {
  KahanSum acc;
  for_each_hypergeom(draws, succ, pop, lf,
                     [&](std::int64_t n, double p) { acc.add(phi(n) * p); });
  return acc.value();
}

template <class Phi>
double sum_phi_observed(const ContingencyTable& t, const Phi& phi) {
  KahanSum acc;
  for (int i = 0; i < t.rows(); ++i)
    for (int j = 0; j < t.cols(); ++j) acc.add(phi(t.at(i, j)));
  return acc.value();
}

template <class Phi>
double sum_phi_marginal_half(const ContingencyTable& t, const Phi& phi) {
  KahanSum acc;
  for (int i = 0; i < t.rows(); ++i) acc.add(phi(t.row_marginal(i)));
  for (int j = 0; j < t.cols(); ++j) acc.add(phi(t.col_marginal(j)));
  return 0.5 * acc.value();
}

template <class Phi>
double expected_sum_phi_impl(const ContingencyTable& t, const Phi& phi,
                             const LogFactorials& lf) {
  KahanSum acc;
  for (int i = 0; i < t.rows(); ++i)
    for (int j = 0; j < t.cols(); ++j)
      acc.add(expected_phi_hyp(t.row_marginal(i), t.col_marginal(j), t.total(),
                               lf, phi));
  return acc.value();
}

// E[(sum phi)^2] for one outer cell (i,j), all four conditioning cases:
//   n      ~ Hyp(a_i, b_j, N)
//   case (i'=i, j'=j): contributes phi(n)
//   case (i'!=i, j'=j): n~ ~ Hyp(b_j - n, a_i', N - a_i)
//   case (i'=i, j'!=j): n~ ~ Hyp(a_i - n, b_j', N - b_j)
//   case (i'!=i,j'!=j): doubly conditioned Hyp(a_i', b_j' - m, N - a_i)
//                       inside the (i'=i, j'!=j) sum over m.
template <class Phi>
double second_moment_cell(const ContingencyTable& t, int i, int j,
                          const Phi& phi, const LogFactorials& lf) {
  const std::int64_t n_total = t.total();
  const std::int64_t ai = t.row_marginal(i);
  const std::int64_t bj = t.col_marginal(j);

  KahanSum outer;
  for_each_hypergeom(ai, bj, n_total, lf, [&](std::int64_t n, double pn) {
    const double phin = phi(n);
    if (phin == 0.0) return;  // zero weight: inner sums are irrelevant

    double inner = phin;
    for (int i2 = 0; i2 < t.rows(); ++i2) {
      if (i2 == i) continue;
      inner += expected_phi_hyp(bj - n, t.row_marginal(i2), n_total - ai, lf,
                                phi);
    }
    for (int j2 = 0; j2 < t.cols(); ++j2) {
      if (j2 == j) continue;
      const std::int64_t bj2 = t.col_marginal(j2);
      double block = 0.0;
      for_each_hypergeom(ai - n, bj2, n_total - bj, lf,
                         [&](std::int64_t m, double pm) {
                           double term = phi(m);
                           for (int i2 = 0; i2 < t.rows(); ++i2) {
                             if (i2 == i) continue;
                             term += expected_phi_hyp(t.row_marginal(i2),
                                                      bj2 - m, n_total - ai,
                                                      lf, phi);
                           }
                           block += pm * term;
                         });
      inner += block;
    }
    outer.add(phin * pn * inner);
  });
  return outer.value();
}

template <class Phi>
double second_moment_impl(const ContingencyTable& oriented, const Phi& phi,
                          const LogFactorials& lf) {
  const std::size_t cells =
      static_cast<std::size_t>(oriented.rows()) * oriented.cols();
  std::vector<double> cell_total(cells, 0.0);
  detail::parallel_for_index(cells, [&](std::size_t k) {
    int i = static_cast<int>(k) / oriented.cols();
    int j = static_cast<int>(k) % oriented.cols();
    cell_total[k] = second_moment_cell(oriented, i, j, phi, lf);
  });
  // Fixed reduction order: the result is independent of the worker count.
  KahanSum acc;
  for (double v : cell_total) acc.add(v);
  return acc.value();
}

// The conditioning is quadratic in the column count and linear in the row
// count, so run the formula with columns on the short side.
template <class Phi>
double second_moment_oriented(const ContingencyTable& t, const Phi& phi,
                              const LogFactorials& lf) {
  if (t.cols() > t.rows())
    return second_moment_impl(t.transposed(), phi, lf);
  return second_moment_impl(t, phi, lf);
}

}  // namespace

// Cancellation guard for e2 - e1^2. Differences within rounding noise of
// the moment scale flatten to exactly 0 (deterministic table families must
// come out as zero variance, not noise); negatives beyond the budget mean
// the engine is broken.
double guarded_variance_from(double e2, double e1, const char* context) {
  double var = e2 - e1 * e1;
  const double budget =
      std::max(1e-12, 64.0 * std::numeric_limits<double>::epsilon() *
                          (std::abs(e2) + e1 * e1));
  if (std::abs(var) <= budget) return 0.0;
  if (var < 0.0)
    throw internal_error(std::string("negative variance beyond rounding in ") +
                         context);
  return var;
}

std::vector<PmfTerm> hypergeometric_pmf_series(std::int64_t a, std::int64_t b,
                                               std::int64_t n_total) {
  if (n_total < 1)
    throw std::invalid_argument("hypergeometric total must be >= 1");
  if (a < 0 || b < 0 || a > n_total || b > n_total)
    throw std::invalid_argument("hypergeometric marginal exceeds total");
  LogFactorials lf(n_total);
  std::vector<PmfTerm> series;
  KahanSum total;
  for_each_hypergeom(a, b, n_total, lf, [&](std::int64_t n, double p) {
    series.push_back({n, p});
    total.add(p);
  });
  // The recurrence drifts by ~support*eps on long supports; rescale so the
  // series is a probability vector to full precision.
  double norm = total.value();
  for (auto& term : series) term.prob /= norm;
  return series;
}

double expected_phi_cell(std::int64_t a, std::int64_t b, std::int64_t n_total,
                         QParam q) {
  if (n_total < 1 || a < 0 || b < 0 || a > n_total || b > n_total)
    throw std::invalid_argument("hypergeometric marginal exceeds total");
  LogFactorials lf(n_total);
  PhiTable phi = family_phi(n_total, q, /*scaled=*/false);
  return expected_phi_hyp(a, b, n_total, lf, phi);
}

double expected_phi_cell(std::int64_t a, std::int64_t b, std::int64_t n_total,
                         const std::function<double(std::int64_t)>& phi) {
  if (n_total < 1 || a < 0 || b < 0 || a > n_total || b > n_total)
    throw std::invalid_argument("hypergeometric marginal exceeds total");
  LogFactorials lf(n_total);
  return expected_phi_hyp(a, b, n_total, lf, phi);
}

double expected_sum_phi(const ContingencyTable& t, QParam q) {
  LogFactorials lf(t.total());
  PhiTable phi = family_phi(t.total(), q, /*scaled=*/false);
  return expected_sum_phi_impl(t, phi, lf);
}

double second_moment_sum_phi(const ContingencyTable& t, QParam q) {
  LogFactorials lf(t.total());
  if (q.is_shannon()) {
    PhiTable phi = shannon_phi(t.total());
    return second_moment_oriented(t, phi, lf);
  }
  // Run scaled for bounded magnitudes, then undo the scaling.
  PhiTable phi = power_phi(t.total(), q.q(), /*scaled=*/true);
  double scale = std::pow(static_cast<double>(t.total()), q.q());
  return second_moment_oriented(t, phi, lf) * scale * scale;
}

PhiMoments phi_moments(const ContingencyTable& t, QParam q, bool with_second) {
  LogFactorials lf(t.total());
  PhiTable phi = family_phi(t.total(), q, /*scaled=*/true);
  PhiMoments m;
  m.sum_actual = sum_phi_observed(t, phi);
  m.marginal_half = sum_phi_marginal_half(t, phi);
  m.e_sum = expected_sum_phi_impl(t, phi, lf);
  if (with_second) m.e2_sum = second_moment_oriented(t, phi, lf);
  return m;
}

namespace {

double expected_joint_entropy_from(const PhiMoments& m, QParam q) {
  return q.is_shannon() ? -m.e_sum : (1.0 - m.e_sum) / (q.q() - 1.0);
}

double variance_joint_entropy_from(const PhiMoments& m, QParam q) {
  double raw =
      guarded_variance_from(*m.e2_sum, m.e_sum, "joint entropy variance");
  if (q.is_shannon()) return raw;
  double d = q.q() - 1.0;
  return raw / (d * d);
}

}  // namespace

double expected_joint_entropy(const ContingencyTable& t, QParam q) {
  return expected_joint_entropy_from(phi_moments(t, q, false), q);
}

double expected_mutual_information(const ContingencyTable& t, QParam q) {
  return entropy_u(t, q) + entropy_v(t, q) - expected_joint_entropy(t, q);
}

double expected_variation_of_information(const ContingencyTable& t, QParam q) {
  return 2.0 * expected_joint_entropy(t, q) - entropy_u(t, q) -
         entropy_v(t, q);
}

double variance_joint_entropy(const ContingencyTable& t, QParam q) {
  return variance_joint_entropy_from(phi_moments(t, q, true), q);
}

double variance_mutual_information(const ContingencyTable& t, QParam q) {
  // MI_q differs from H_q(U,V) by marginal entropies, constant under the
  // permutation model.
  return variance_joint_entropy(t, q);
}

double variance_variation_of_information(const ContingencyTable& t, QParam q) {
  return 4.0 * variance_joint_entropy(t, q);
}

double asymptotic_expected_measure(const ContingencyTable& t, QParam q,
                                   AsymptoticTarget target) {
  if (q.is_shannon())
    throw std::invalid_argument(
        "asymptotic expectation has a closed form for Tsallis orders only");
  double hu = entropy_u(t, q);
  double hv = entropy_v(t, q);
  double cross = (q.q() - 1.0) * hu * hv;
  switch (target) {
    case AsymptoticTarget::joint_entropy:
      return hu + hv - cross;
    case AsymptoticTarget::mutual_information:
      return cross;
    case AsymptoticTarget::variation_of_information:
      return hu + hv - 2.0 * cross;
  }
  throw std::logic_error("unreachable");
}

double asymptotic_expected_jaccard(const ContingencyTable& t) {
  double n = static_cast<double>(t.total());
  double sa = 0.0, sb = 0.0;
  for (int i = 0; i < t.rows(); ++i) {
    double a = static_cast<double>(t.row_marginal(i));
    sa += a * a;
  }
  for (int j = 0; j < t.cols(); ++j) {
    double b = static_cast<double>(t.col_marginal(j));
    sb += b * b;
  }
  // Substitute n_ij/N -> (a_i/N)(b_j/N) into J written as a function of
  // the cell frequencies: sum n_ij^2 -> (sum a^2)(sum b^2)/N^2.
  double sab = sa * sb / (n * n);
  return (sab - n) / (sa + sb - sab - n);
}

double exact_variance_mi_at_scale(const ContingencyTable& t, QParam q,
                                  std::int64_t k) {
  return variance_mutual_information(t.scaled(k), q);
}

MomentReport exact_moment_report(const ContingencyTable& t, QParam q,
                                 bool with_variance) {
  return moment_report_from(t, q, phi_moments(t, q, with_variance));
}

MomentReport moment_report_from(const ContingencyTable& t, QParam q,
                                const PhiMoments& m) {
  MomentReport r;
  r.q = q;
  r.method = MomentMethod::exact;
  if (q.is_shannon()) {
    r.e_sum_phi = m.e_sum;
    if (m.e2_sum) r.e2_sum_phi = *m.e2_sum;
  } else {
    double scale = std::pow(static_cast<double>(t.total()), q.q());
    r.e_sum_phi = m.e_sum * scale;
    if (m.e2_sum) r.e2_sum_phi = *m.e2_sum * scale * scale;
  }
  r.e_joint_entropy = expected_joint_entropy_from(m, q);
  double hu = entropy_u(t, q);
  double hv = entropy_v(t, q);
  r.e_mi = hu + hv - r.e_joint_entropy;
  r.e_vi = 2.0 * r.e_joint_entropy - hu - hv;
  if (m.e2_sum) {
    double vh = variance_joint_entropy_from(m, q);
    r.var_joint_entropy = vh;
    r.var_mi = vh;
    r.var_vi = 4.0 * vh;
  }
  return r;
}

}  // namespace clucomp
