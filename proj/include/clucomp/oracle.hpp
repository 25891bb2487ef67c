#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "clucomp/contingency.hpp"

namespace clucomp {

/// Ground-truth engine for the fixed-marginal permutation model:
/// exhaustive enumeration for tiny instances, seeded Monte-Carlo sampling
/// for larger ones, plus random-partition generation for experiments.
/// Everything here is deliberately independent of the exact-moment
/// machinery it validates.

enum class OracleMethod { enumeration, monte_carlo };

struct OracleMoments {
  double mean = 0.0;
  double variance = 0.0;
  std::int64_t n_outcomes_or_samples = 0;
  OracleMethod method = OracleMethod::enumeration;
  std::optional<double> ci99_halfwidth;  // monte-carlo only
};

using TableStatistic = std::function<double(const ContingencyTable&)>;

/// Probability of one contingency table under the permutation model:
/// P(M) = (prod a_i!)(prod b_j!) / (N! prod n_ij!). Not stated in the
/// source material; validated against N!-permutation brute force before
/// anything trusts it (see permutation_table_distribution).
double table_probability(const ContingencyTable& t);

/// Visits every nonnegative integer table with the given marginals along
/// with its permutation-model probability.
void for_each_table(
    const std::vector<std::int64_t>& row_marginals,
    const std::vector<std::int64_t>& col_marginals,
    const std::function<void(const ContingencyTable&, double)>& visit);

/// Exact mean and variance of a statistic by weighted-table enumeration.
/// Refuses N above `cap` (the table count explodes).
OracleMoments enumerate_moments(const std::vector<std::int64_t>& row_marginals,
                                const std::vector<std::int64_t>& col_marginals,
                                const TableStatistic& statistic,
                                std::int64_t cap = 12);

/// The same moments by brute force over object permutations: one label
/// vector is held fixed, the other permuted. Distinct label sequences are
/// visited once each; every distinct sequence corresponds to exactly
/// (prod b_j!) of the N! equally likely orderings, so uniform weights over
/// distinct sequences reproduce the model exactly.
OracleMoments permutation_brute_force_moments(
    const std::vector<std::int64_t>& row_marginals,
    const std::vector<std::int64_t>& col_marginals,
    const TableStatistic& statistic, std::int64_t cap = 8);

/// Table frequencies from the permutation brute force, keyed by flattened
/// grid; used to validate table_probability.
struct TableDistribution {
  std::vector<std::pair<std::vector<std::int64_t>, double>> entries;
};
TableDistribution permutation_table_distribution(
    const std::vector<std::int64_t>& row_marginals,
    const std::vector<std::int64_t>& col_marginals, std::int64_t cap = 8);

/// Monte-Carlo estimate: shuffles one label vector n_samples times,
/// rebuilds the table, evaluates the statistic. Deterministic in `seed`.
/// Variance is the unbiased sample variance.
OracleMoments monte_carlo_moments(
    const std::vector<std::int64_t>& row_marginals,
    const std::vector<std::int64_t>& col_marginals,
    const TableStatistic& statistic, std::int64_t n_samples,
    std::uint64_t seed);

/// Random-partition generator for experiments.
struct RandomPartitionSpec {
  enum class Scheme { uniform_assignment, fixed_marginals, size_sweep };

  std::int64_t n_objects = 0;
  int n_clusters = 0;
  Scheme scheme = Scheme::uniform_assignment;
  std::vector<std::int64_t> marginals;  // fixed_marginals only
  double largest_fraction = 0.0;        // size_sweep only

  static RandomPartitionSpec uniform(std::int64_t n, int r);
  static RandomPartitionSpec with_marginals(std::vector<std::int64_t> sizes);
  static RandomPartitionSpec sweep(std::int64_t n, int r, double fraction);
};

/// Labels in [0, n_clusters), dense, no empty cluster. Pure function of
/// (spec, seed).
std::vector<int> random_partition(const RandomPartitionSpec& spec,
                                  std::uint64_t seed);

/// Deterministic, portable RNG: mt19937_64 for the stream, bounded draws
/// by rejection and a hand-rolled Fisher-Yates shuffle, so sequences are
/// identical across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  std::uint64_t next() { return eng_(); }

  std::int64_t below(std::int64_t n);  // uniform in [0, n)

  double unit() {  // uniform in [0, 1), 53 random bits
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
  }

  template <class T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i)
      std::swap(v[i - 1], v[static_cast<std::size_t>(below(
                              static_cast<std::int64_t>(i)))]);
  }

 private:
  std::mt19937_64 eng_;
};

/// Per-trial seed derivation (splitmix64 mix of master and index); keeps
/// parallel trials deterministic and decorrelated.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index);

}  // namespace clucomp
