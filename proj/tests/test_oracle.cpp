#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <vector>

#include "clucomp/measures.hpp"
#include "clucomp/oracle.hpp"

using namespace clucomp;

namespace {

using Marginals = std::vector<std::int64_t>;

// All integer partitions of n in descending order (cluster size profiles).
std::vector<Marginals> integer_partitions(std::int64_t n) {
  std::vector<Marginals> all;
  Marginals cur;
  std::function<void(std::int64_t, std::int64_t)> rec = [&](std::int64_t rest,
                                                            std::int64_t maxp) {
    if (rest == 0) {
      all.push_back(cur);
      return;
    }
    for (std::int64_t p = std::min(rest, maxp); p >= 1; --p) {
      cur.push_back(p);
      rec(rest - p, p);
      cur.pop_back();
    }
  };
  rec(n, n);
  return all;
}

double sum_sq_statistic(const ContingencyTable& t) {
  double s = 0.0;
  for (int i = 0; i < t.rows(); ++i)
    for (int j = 0; j < t.cols(); ++j)
      s += static_cast<double>(t.at(i, j)) * static_cast<double>(t.at(i, j));
  return s;
}

// Wilson-Hilferty approximation of the chi-square quantile.
double chi2_quantile(double df, double z) {
  double a = 2.0 / (9.0 * df);
  double w = 1.0 - a + z * std::sqrt(a);
  return df * w * w * w;
}

}  // namespace

TEST_CASE("table probability matches N!-permutation frequencies (N <= 6)") {
  for (std::int64_t n = 2; n <= 6; ++n) {
    auto parts = integer_partitions(n);
    for (const auto& a : parts) {
      for (const auto& b : parts) {
        std::map<std::vector<std::int64_t>, double> weighted;
        for_each_table(a, b, [&](const ContingencyTable& t, double p) {
          std::vector<std::int64_t> key;
          for (int i = 0; i < t.rows(); ++i)
            for (int j = 0; j < t.cols(); ++j) key.push_back(t.at(i, j));
          weighted[key] += p;
        });

        TableDistribution brute = permutation_table_distribution(a, b);
        REQUIRE(brute.entries.size() == weighted.size());
        for (const auto& [key, freq] : brute.entries) {
          REQUIRE(weighted.count(key) == 1);
          CHECK(std::abs(weighted[key] - freq) <= 1e-12);
        }
      }
    }
  }
}

TEST_CASE("enumerate_moments frozen examples") {
  // a = b = [1,1]: two permutation outcomes, both with sum n^2 = 2
  auto m = enumerate_moments({1, 1}, {1, 1}, sum_sq_statistic);
  CHECK(m.mean == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(m.variance == doctest::Approx(0.0));
  CHECK(m.n_outcomes_or_samples == 2);

  // constant statistic
  auto c = enumerate_moments({2, 1}, {1, 1, 1},
                             [](const ContingencyTable&) { return 7.0; });
  CHECK(c.mean == doctest::Approx(7.0));
  CHECK(c.variance == doctest::Approx(0.0));

  CHECK_THROWS_AS(
      enumerate_moments(Marginals(13, 1), Marginals(13, 1), sum_sq_statistic),
      std::invalid_argument);
  CHECK_THROWS_AS(enumerate_moments({2, 1}, {2, 2}, sum_sq_statistic),
                  std::invalid_argument);
}

TEST_CASE("enumeration equals N! brute force for RI moments") {
  auto stat = [](const ContingencyTable& t) { return rand_index(t); };
  auto via_tables = enumerate_moments({2, 1}, {2, 1}, stat);
  auto via_perms = permutation_brute_force_moments({2, 1}, {2, 1}, stat);
  CHECK(via_tables.mean == doctest::Approx(via_perms.mean).epsilon(1e-13));
  CHECK(via_tables.variance ==
        doctest::Approx(via_perms.variance).epsilon(1e-12));
  CHECK(via_perms.n_outcomes_or_samples == 3);  // distinct sequences of 2,1
}

TEST_CASE("monte carlo: determinism and agreement with enumeration") {
  auto stat = sum_sq_statistic;
  auto a = Marginals{3, 2};
  auto b = Marginals{2, 2, 1};

  auto m1 = monte_carlo_moments(a, b, stat, 20000, 42);
  auto m2 = monte_carlo_moments(a, b, stat, 20000, 42);
  CHECK(m1.mean == m2.mean);
  CHECK(m1.variance == m2.variance);
  REQUIRE(m1.ci99_halfwidth.has_value());

  auto exact = enumerate_moments(a, b, stat);
  CHECK(std::abs(m1.mean - exact.mean) <= 2.0 * *m1.ci99_halfwidth);

  auto m3 = monte_carlo_moments(a, b, stat, 20000, 43);
  CHECK(m1.mean != m3.mean);  // different seed, different stream
}

TEST_CASE("monte carlo table frequencies pass a chi-square fit (alpha=0.001)") {
  auto a = Marginals{3, 3};
  auto b = Marginals{2, 2, 2};
  const std::int64_t samples = 100000;

  // Enumerate categories with their exact probabilities.
  std::vector<std::vector<std::int64_t>> keys;
  std::vector<double> probs;
  for_each_table(a, b, [&](const ContingencyTable& t, double p) {
    std::vector<std::int64_t> key;
    for (int i = 0; i < t.rows(); ++i)
      for (int j = 0; j < t.cols(); ++j) key.push_back(t.at(i, j));
    keys.push_back(key);
    probs.push_back(p);
  });

  // Indicator statistics over the same seeded stream yield the empirical
  // frequency of each category from the public sampler.
  double chi2 = 0.0;
  for (std::size_t k = 0; k < keys.size(); ++k) {
    const auto& key = keys[k];
    auto indicator = [&key](const ContingencyTable& t) {
      std::size_t pos = 0;
      for (int i = 0; i < t.rows(); ++i)
        for (int j = 0; j < t.cols(); ++j)
          if (t.at(i, j) != key[pos++]) return 0.0;
      return 1.0;
    };
    auto m = monte_carlo_moments(a, b, indicator, samples, 4242);
    double expected = static_cast<double>(samples) * probs[k];
    double observed = m.mean * static_cast<double>(samples);
    chi2 += (observed - expected) * (observed - expected) / expected;
  }
  double df = static_cast<double>(keys.size()) - 1.0;
  CHECK(chi2 < chi2_quantile(df, 3.0902));  // 99.9% quantile
}

TEST_CASE("random_partition schemes") {
  // r=1: all labels equal
  auto ones = random_partition(RandomPartitionSpec::uniform(100, 1), 9);
  CHECK(std::count(ones.begin(), ones.end(), 0) == 100);

  // fixed marginals: exact sizes, order random
  auto fixed = random_partition(
      RandomPartitionSpec::with_marginals({50, 50}), 11);
  CHECK(std::count(fixed.begin(), fixed.end(), 0) == 50);
  CHECK(std::count(fixed.begin(), fixed.end(), 1) == 50);

  // size sweep: largest cluster takes the fraction, rest split evenly
  auto swept = random_partition(RandomPartitionSpec::sweep(100, 4, 0.7), 13);
  CHECK(std::count(swept.begin(), swept.end(), 0) == 70);
  CHECK(std::count(swept.begin(), swept.end(), 1) == 10);
  CHECK(std::count(swept.begin(), swept.end(), 3) == 10);

  // uniform assignment: every cluster occupied, mean sizes near n/r
  std::vector<double> mean_size(6, 0.0);
  const int trials = 1000;
  for (int trial = 0; trial < trials; ++trial) {
    auto labels = random_partition(RandomPartitionSpec::uniform(100, 6),
                                   derive_seed(17, trial));
    std::vector<int> sizes(6, 0);
    for (int lab : labels) ++sizes[lab];
    for (int k = 0; k < 6; ++k) {
      CHECK(sizes[k] > 0);
      mean_size[k] += sizes[k];
    }
  }
  for (int k = 0; k < 6; ++k)
    CHECK(mean_size[k] / trials == doctest::Approx(100.0 / 6.0).epsilon(0.06));

  // determinism
  auto p1 = random_partition(RandomPartitionSpec::uniform(50, 4), 99);
  auto p2 = random_partition(RandomPartitionSpec::uniform(50, 4), 99);
  CHECK(p1 == p2);

  CHECK_THROWS_AS(random_partition(RandomPartitionSpec::uniform(3, 5), 1),
                  std::invalid_argument);
  RandomPartitionSpec bad = RandomPartitionSpec::with_marginals({2, 2});
  bad.n_objects = 5;  // marginals no longer sum to N
  CHECK_THROWS_AS(random_partition(bad, 1), std::invalid_argument);
}

TEST_CASE("infeasible sweep specs are rejected") {
  CHECK_THROWS_AS(random_partition(RandomPartitionSpec::sweep(100, 4, 0.99), 1),
                  std::invalid_argument);
  CHECK_THROWS_AS(random_partition(RandomPartitionSpec::sweep(100, 1, 0.5), 1),
                  std::invalid_argument);
  CHECK_NOTHROW(random_partition(RandomPartitionSpec::sweep(100, 1, 1.0), 1));
}

TEST_CASE("derived seeds differ across indices") {
  CHECK(derive_seed(0, 0) != derive_seed(0, 1));
  CHECK(derive_seed(0, 0) != derive_seed(1, 0));
  CHECK(derive_seed(5, 7) == derive_seed(5, 7));
}
