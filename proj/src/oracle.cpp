#include "clucomp/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <stdexcept>

#include "clucomp/detail/hypergeom.hpp"
#include "clucomp/detail/kahan.hpp"

namespace clucomp {

namespace {

void check_marginals(const std::vector<std::int64_t>& a,
                     const std::vector<std::int64_t>& b) {
  if (a.empty() || b.empty())
    throw std::invalid_argument("empty marginal vector");
  std::int64_t sa = 0, sb = 0;
  for (std::int64_t x : a) {
    if (x < 1) throw std::invalid_argument("marginals must be >= 1");
    sa += x;
  }
  for (std::int64_t x : b) {
    if (x < 1) throw std::invalid_argument("marginals must be >= 1");
    sb += x;
  }
  if (sa != sb) throw std::invalid_argument("marginal sums differ");
}

std::vector<int> expand_labels(const std::vector<std::int64_t>& sizes) {
  std::vector<int> labels;
  for (std::size_t k = 0; k < sizes.size(); ++k)
    labels.insert(labels.end(), static_cast<std::size_t>(sizes[k]),
                  static_cast<int>(k));
  return labels;
}

// Recursively fills the grid in row-major order. The last cell of each
// row is forced by the row marginal; column budgets shrink as we go.
template <class Leaf>
void fill_tables(const std::vector<std::int64_t>& a,
                 const std::vector<std::int64_t>& b,
                 std::vector<std::int64_t>& colrem,
                 std::vector<std::vector<std::int64_t>>& grid, int i, int j,
                 std::int64_t rowrem, Leaf&& leaf) {
  const int r = static_cast<int>(a.size());
  const int c = static_cast<int>(b.size());
  if (j == c - 1) {
    if (rowrem > colrem[j]) return;
    grid[i][j] = rowrem;
    colrem[j] -= rowrem;
    if (i == r - 1)
      leaf(grid);
    else
      fill_tables(a, b, colrem, grid, i + 1, 0, a[i + 1], leaf);
    colrem[j] += rowrem;
    return;
  }
  const std::int64_t vmax = std::min(rowrem, colrem[j]);
  for (std::int64_t v = 0; v <= vmax; ++v) {
    grid[i][j] = v;
    colrem[j] -= v;
    fill_tables(a, b, colrem, grid, i, j + 1, rowrem - v, leaf);
    colrem[j] += v;
  }
}

}  // namespace

double table_probability(const ContingencyTable& t) {
  detail::LogFactorials lf(t.total());
  double logp = -lf(t.total());
  for (int i = 0; i < t.rows(); ++i) logp += lf(t.row_marginal(i));
  for (int j = 0; j < t.cols(); ++j) logp += lf(t.col_marginal(j));
  for (int i = 0; i < t.rows(); ++i)
    for (int j = 0; j < t.cols(); ++j) logp -= lf(t.at(i, j));
  return std::exp(logp);
}

void for_each_table(
    const std::vector<std::int64_t>& row_marginals,
    const std::vector<std::int64_t>& col_marginals,
    const std::function<void(const ContingencyTable&, double)>& visit) {
  check_marginals(row_marginals, col_marginals);
  std::vector<std::int64_t> colrem = col_marginals;
  std::vector<std::vector<std::int64_t>> grid(
      row_marginals.size(),
      std::vector<std::int64_t>(col_marginals.size(), 0));
  fill_tables(row_marginals, col_marginals, colrem, grid, 0, 0,
              row_marginals[0],
              [&](const std::vector<std::vector<std::int64_t>>& g) {
                ContingencyTable t = ContingencyTable::from_counts(g);
                visit(t, table_probability(t));
              });
}

OracleMoments enumerate_moments(const std::vector<std::int64_t>& row_marginals,
                                const std::vector<std::int64_t>& col_marginals,
                                const TableStatistic& statistic,
                                std::int64_t cap) {
  check_marginals(row_marginals, col_marginals);
  std::int64_t n =
      std::accumulate(row_marginals.begin(), row_marginals.end(),
                      static_cast<std::int64_t>(0));
  if (n > cap)
    throw std::invalid_argument("enumerate_moments: N exceeds enumeration cap");

  detail::KahanSum mean, second;
  std::int64_t outcomes = 0;
  for_each_table(row_marginals, col_marginals,
                 [&](const ContingencyTable& t, double p) {
                   double s = statistic(t);
                   mean.add(p * s);
                   second.add(p * s * s);
                   ++outcomes;
                 });
  OracleMoments m;
  m.mean = mean.value();
  m.variance = std::max(0.0, second.value() - m.mean * m.mean);
  m.n_outcomes_or_samples = outcomes;
  m.method = OracleMethod::enumeration;
  return m;
}

namespace {

template <class Visit>
void for_each_permutation(const std::vector<std::int64_t>& a,
                          const std::vector<std::int64_t>& b,
                          std::int64_t cap, Visit&& visit) {
  check_marginals(a, b);
  std::int64_t n = std::accumulate(a.begin(), a.end(),
                                   static_cast<std::int64_t>(0));
  if (n > cap)
    throw std::invalid_argument(
        "permutation brute force: N exceeds enumeration cap");
  std::vector<int> u = expand_labels(a);
  std::vector<int> v = expand_labels(b);  // sorted: first permutation
  const int r = static_cast<int>(a.size());
  const int c = static_cast<int>(b.size());
  do {
    visit(ContingencyTable::from_dense_labels(r, c, u, v));
  } while (std::next_permutation(v.begin(), v.end()));
}

}  // namespace

OracleMoments permutation_brute_force_moments(
    const std::vector<std::int64_t>& row_marginals,
    const std::vector<std::int64_t>& col_marginals,
    const TableStatistic& statistic, std::int64_t cap) {
  detail::KahanSum sum, sumsq;
  std::int64_t count = 0;
  for_each_permutation(row_marginals, col_marginals, cap,
                       [&](const ContingencyTable& t) {
                         double s = statistic(t);
                         sum.add(s);
                         sumsq.add(s * s);
                         ++count;
                       });
  OracleMoments m;
  m.mean = sum.value() / static_cast<double>(count);
  m.variance =
      std::max(0.0, sumsq.value() / static_cast<double>(count) - m.mean * m.mean);
  m.n_outcomes_or_samples = count;
  m.method = OracleMethod::enumeration;
  return m;
}

TableDistribution permutation_table_distribution(
    const std::vector<std::int64_t>& row_marginals,
    const std::vector<std::int64_t>& col_marginals, std::int64_t cap) {
  std::map<std::vector<std::int64_t>, std::int64_t> counts;
  std::int64_t total = 0;
  for_each_permutation(row_marginals, col_marginals, cap,
                       [&](const ContingencyTable& t) {
                         std::vector<std::int64_t> key;
                         key.reserve(static_cast<std::size_t>(t.rows()) *
                                     t.cols());
                         for (int i = 0; i < t.rows(); ++i)
                           for (int j = 0; j < t.cols(); ++j)
                             key.push_back(t.at(i, j));
                         ++counts[key];
                         ++total;
                       });
  TableDistribution d;
  d.entries.reserve(counts.size());
  for (const auto& [key, cnt] : counts)
    d.entries.emplace_back(key,
                           static_cast<double>(cnt) / static_cast<double>(total));
  return d;
}

OracleMoments monte_carlo_moments(
    const std::vector<std::int64_t>& row_marginals,
    const std::vector<std::int64_t>& col_marginals,
    const TableStatistic& statistic, std::int64_t n_samples,
    std::uint64_t seed) {
  check_marginals(row_marginals, col_marginals);
  if (n_samples < 2)
    throw std::invalid_argument("monte_carlo_moments needs >= 2 samples");

  std::vector<int> u = expand_labels(row_marginals);
  std::vector<int> v = expand_labels(col_marginals);
  const int r = static_cast<int>(row_marginals.size());
  const int c = static_cast<int>(col_marginals.size());

  Rng rng(seed);
  // Welford running moments.
  double mean = 0.0, m2 = 0.0;
  for (std::int64_t k = 0; k < n_samples; ++k) {
    rng.shuffle(v);
    double s = statistic(ContingencyTable::from_dense_labels(r, c, u, v));
    double d1 = s - mean;
    mean += d1 / static_cast<double>(k + 1);
    m2 += d1 * (s - mean);
  }

  OracleMoments m;
  m.mean = mean;
  m.variance = m2 / static_cast<double>(n_samples - 1);
  m.n_outcomes_or_samples = n_samples;
  m.method = OracleMethod::monte_carlo;
  m.ci99_halfwidth = 2.5758293035489004 *
                     std::sqrt(m.variance / static_cast<double>(n_samples));
  return m;
}

std::int64_t Rng::below(std::int64_t n) {
  if (n <= 0) throw std::invalid_argument("Rng::below needs n > 0");
  const std::uint64_t un = static_cast<std::uint64_t>(n);
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % un;
  std::uint64_t x;
  do {
    x = next();
  } while (x >= limit);
  return static_cast<std::int64_t>(x % un);
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  // splitmix64 step applied to master + (index+1) * golden gamma
  std::uint64_t z = master + (index + 1) * 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

RandomPartitionSpec RandomPartitionSpec::uniform(std::int64_t n, int r) {
  RandomPartitionSpec s;
  s.n_objects = n;
  s.n_clusters = r;
  s.scheme = Scheme::uniform_assignment;
  return s;
}

RandomPartitionSpec RandomPartitionSpec::with_marginals(
    std::vector<std::int64_t> sizes) {
  RandomPartitionSpec s;
  s.n_objects = std::accumulate(sizes.begin(), sizes.end(),
                                static_cast<std::int64_t>(0));
  s.n_clusters = static_cast<int>(sizes.size());
  s.scheme = Scheme::fixed_marginals;
  s.marginals = std::move(sizes);
  return s;
}

RandomPartitionSpec RandomPartitionSpec::sweep(std::int64_t n, int r,
                                               double fraction) {
  RandomPartitionSpec s;
  s.n_objects = n;
  s.n_clusters = r;
  s.scheme = Scheme::size_sweep;
  s.largest_fraction = fraction;
  return s;
}

std::vector<int> random_partition(const RandomPartitionSpec& spec,
                                  std::uint64_t seed) {
  const std::int64_t n = spec.n_objects;
  const int r = spec.n_clusters;
  if (n < 1 || r < 1 || r > n)
    throw std::invalid_argument("infeasible partition spec");

  Rng rng(seed);
  switch (spec.scheme) {
    case RandomPartitionSpec::Scheme::uniform_assignment: {
      std::vector<int> labels(static_cast<std::size_t>(n));
      std::vector<char> seen(static_cast<std::size_t>(r));
      for (;;) {  // redraw whole partition until all r clusters occupied
        std::fill(seen.begin(), seen.end(), 0);
        int distinct = 0;
        for (auto& lab : labels) {
          lab = static_cast<int>(rng.below(r));
          if (!seen[lab]) {
            seen[lab] = 1;
            ++distinct;
          }
        }
        if (distinct == r) return labels;
      }
    }
    case RandomPartitionSpec::Scheme::fixed_marginals: {
      if (static_cast<int>(spec.marginals.size()) != r)
        throw std::invalid_argument("marginal count != n_clusters");
      std::int64_t sum = 0;
      for (std::int64_t s : spec.marginals) {
        if (s < 1) throw std::invalid_argument("marginals must be >= 1");
        sum += s;
      }
      if (sum != n) throw std::invalid_argument("marginals do not sum to N");
      std::vector<int> labels = expand_labels(spec.marginals);
      rng.shuffle(labels);
      return labels;
    }
    case RandomPartitionSpec::Scheme::size_sweep: {
      std::int64_t big = std::llround(spec.largest_fraction * static_cast<double>(n));
      if (r == 1) {
        if (big != n) throw std::invalid_argument("infeasible partition spec");
        return std::vector<int>(static_cast<std::size_t>(n), 0);
      }
      if (big < 1 || n - big < r - 1)
        throw std::invalid_argument("infeasible partition spec");
      std::vector<std::int64_t> sizes(static_cast<std::size_t>(r));
      sizes[0] = big;
      std::int64_t rest = n - big;
      std::int64_t base = rest / (r - 1), extra = rest % (r - 1);
      for (int k = 1; k < r; ++k) sizes[k] = base + (k <= extra ? 1 : 0);
      std::vector<int> labels = expand_labels(sizes);
      rng.shuffle(labels);
      return labels;
    }
  }
  throw std::logic_error("unreachable");
}

}  // namespace clucomp
