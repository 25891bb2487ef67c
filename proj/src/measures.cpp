#include "clucomp/measures.hpp"

#include <cmath>

#include "clucomp/detail/kahan.hpp"
#include "clucomp/errors.hpp"

namespace clucomp {

namespace {

// Entropy of counts/total without materializing the probability vector.
double entropy_of_counts(const std::vector<std::int64_t>& counts,
                         std::int64_t total, QParam q) {
  detail::KahanSum acc;
  double n = static_cast<double>(total);
  if (q.is_shannon()) {
    for (std::int64_t c : counts) {
      if (c == 0) continue;
      double p = static_cast<double>(c) / n;
      acc.add(-p * std::log(p));
    }
    return acc.value();
  }
  for (std::int64_t c : counts) {
    if (c == 0) continue;
    acc.add(std::pow(static_cast<double>(c) / n, q.q()));
  }
  return (1.0 - acc.value()) / (q.q() - 1.0);
}

std::vector<std::int64_t> flat_counts(const ContingencyTable& t) {
  std::vector<std::int64_t> v;
  v.reserve(static_cast<std::size_t>(t.rows()) * t.cols());
  for (int i = 0; i < t.rows(); ++i)
    for (int j = 0; j < t.cols(); ++j) v.push_back(t.at(i, j));
  return v;
}

}  // namespace

double rand_index(const ContingencyTable& t) {
  if (t.total() < 2)
    throw degenerate_error("RI undefined: fewer than two objects");
  PairCounts k = pair_counts(t);
  return static_cast<double>(k.same_same + k.diff_diff) /
         static_cast<double>(k.total_pairs());
}

double mirkin_index(const ContingencyTable& t) {
  PairCounts k = pair_counts(t);
  return 2.0 * static_cast<double>(k.same_diff + k.diff_same);
}

double jaccard(const ContingencyTable& t) {
  PairCounts k = pair_counts(t);
  std::int64_t den = k.same_same + k.same_diff + k.diff_same;
  if (den == 0) return 1.0;  // both all-singletons: identical partitions
  return static_cast<double>(k.same_same) / static_cast<double>(den);
}

double tsallis_entropy(std::span<const double> weights, QParam q) {
  detail::KahanSum total;
  for (double w : weights) {
    if (!(w >= 0.0))
      throw std::invalid_argument("entropy weights must be nonnegative");
    total.add(w);
  }
  if (std::abs(total.value() - 1.0) > 1e-12)
    throw std::invalid_argument("entropy weights must sum to 1");

  detail::KahanSum acc;
  if (q.is_shannon()) {
    for (double w : weights)
      if (w > 0.0) acc.add(-w * std::log(w));
    return acc.value();
  }
  for (double w : weights)
    if (w > 0.0) acc.add(std::pow(w, q.q()));
  return (1.0 - acc.value()) / (q.q() - 1.0);
}

double entropy_u(const ContingencyTable& t, QParam q) {
  return entropy_of_counts(t.row_marginals(), t.total(), q);
}

double entropy_v(const ContingencyTable& t, QParam q) {
  return entropy_of_counts(t.col_marginals(), t.total(), q);
}

double joint_entropy(const ContingencyTable& t, QParam q) {
  return entropy_of_counts(flat_counts(t), t.total(), q);
}

double conditional_entropy(const ContingencyTable& t, Conditioned dir,
                           QParam q) {
  const ContingencyTable* tp = &t;
  ContingencyTable tt = t.transposed();
  if (dir == Conditioned::u_given_v) tp = &tt;

  // Now compute H_q(col-partition | row-partition) of *tp.
  double n = static_cast<double>(tp->total());
  detail::KahanSum acc;
  for (int i = 0; i < tp->rows(); ++i) {
    double a = static_cast<double>(tp->row_marginal(i));
    detail::KahanSum row;
    if (q.is_shannon()) {
      for (int j = 0; j < tp->cols(); ++j) {
        std::int64_t c = tp->at(i, j);
        if (c == 0) continue;
        double p = static_cast<double>(c) / a;
        row.add(-p * std::log(p));
      }
      acc.add((a / n) * row.value());
    } else {
      for (int j = 0; j < tp->cols(); ++j) {
        std::int64_t c = tp->at(i, j);
        if (c == 0) continue;
        row.add(std::pow(static_cast<double>(c) / a, q.q()));
      }
      acc.add(std::pow(a / n, q.q()) * (1.0 - row.value()) / (q.q() - 1.0));
    }
  }
  return acc.value();
}

double mutual_information(const ContingencyTable& t, QParam q) {
  return entropy_u(t, q) + entropy_v(t, q) - joint_entropy(t, q);
}

double variation_of_information(const ContingencyTable& t, QParam q) {
  return 2.0 * joint_entropy(t, q) - entropy_u(t, q) - entropy_v(t, q);
}

double nmi(const ContingencyTable& t, QParam q) {
  double hu = entropy_u(t, q);
  double hv = entropy_v(t, q);
  if (hu + hv <= 0.0)
    throw degenerate_error(
        "NMI undefined: both partitions are single-cluster");
  return mutual_information(t, q) / (0.5 * (hu + hv));
}

}  // namespace clucomp
