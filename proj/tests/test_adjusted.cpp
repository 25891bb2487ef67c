#include "doctest.h"

#include <cmath>
#include <vector>

#include "clucomp/adjusted.hpp"
#include "clucomp/errors.hpp"
#include "clucomp/experiments.hpp"
#include "clucomp/measures.hpp"
#include "clucomp/moments.hpp"
#include "clucomp/oracle.hpp"

using namespace clucomp;

namespace {

ContingencyTable table(std::vector<std::vector<std::int64_t>> g) {
  return ContingencyTable::from_counts(g);
}

ContingencyTable random_pair_table(Rng& rng, std::int64_t n, int rmax,
                                   int cmax) {
  int r = 2 + static_cast<int>(rng.below(rmax - 1));
  int c = 2 + static_cast<int>(rng.below(cmax - 1));
  auto u = random_partition(RandomPartitionSpec::uniform(n, r), rng.next());
  auto v = random_partition(RandomPartitionSpec::uniform(n, c), rng.next());
  return ContingencyTable::from_dense_labels(r, c, u, v);
}

const QParam kShannon = QParam::shannon();
const QParam kQ2 = QParam::tsallis(2.0);

}  // namespace

TEST_CASE("ami is 1 on identical partitions") {
  CHECK(ami(table({{50, 0, 0}, {0, 50, 0}, {0, 0, 50}}), kQ2) ==
        doctest::Approx(1.0).epsilon(1e-12));
  CHECK(ami(table({{3, 0}, {0, 9}}), kShannon) ==
        doctest::Approx(1.0).epsilon(1e-12));
  CHECK(ami(table({{3, 0}, {0, 9}}), QParam::tsallis(0.5)) ==
        doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("ami at q=2 equals the pair-count ARI") {
  Rng rng(71);
  for (int round = 0; round < 60; ++round) {
    auto t = random_pair_table(rng, 10 + rng.below(90), 6, 6);
    CHECK(std::abs(ami(t, kQ2) - ari(t)) <= 1e-12);
  }
}

TEST_CASE("ami equals the independently assembled avi") {
  Rng rng(73);
  for (int round = 0; round < 40; ++round) {
    auto t = random_pair_table(rng, 8 + rng.below(60), 5, 5);
    for (const QParam& q : {kShannon, kQ2, QParam::tsallis(0.5),
                            QParam::tsallis(3.0)}) {
      CHECK(std::abs(ami(t, q) - avi(t, q)) <= 1e-12);
    }
  }
}

TEST_CASE("ami converges to the Shannon value as q -> 1") {
  Rng rng(79);
  for (int round = 0; round < 10; ++round) {
    auto t = random_pair_table(rng, 30 + rng.below(50), 4, 4);
    double reference = ami(t, kShannon);
    double prev_gap = 1e9;
    for (int k = 1; k <= 4; ++k) {
      double q = 1.0 + std::pow(10.0, -k);
      double gap = std::abs(ami(t, QParam::tsallis(q)) - reference);
      CHECK(gap < prev_gap);
      prev_gap = gap;
    }
    CHECK(prev_gap <= 1e-3);  // at q = 1 + 1e-4
  }
}

TEST_CASE("ami + nvi = 1 when both are defined") {
  Rng rng(83);
  for (int round = 0; round < 40; ++round) {
    auto t = random_pair_table(rng, 10 + rng.below(50), 5, 5);
    for (const QParam& q : {kShannon, kQ2, QParam::tsallis(0.5)}) {
      CHECK(std::abs(ami(t, q) + nvi(t, q) - 1.0) <= 1e-12);
    }
  }
}

TEST_CASE("nvi basics and degeneracy") {
  CHECK(nvi(table({{4, 0}, {0, 6}}), kQ2) == doctest::Approx(0.0));
  // single-cluster U against a nontrivial V: VI equals its expectation
  CHECK(nvi(table({{3, 4, 5}}), kQ2) == doctest::Approx(1.0).epsilon(1e-12));
  // both single-cluster: E[VI] = 0
  CHECK_THROWS_AS(nvi(table({{7}}), kQ2), degenerate_error);
  CHECK_THROWS_AS(nvi(table({{7}}), kShannon), degenerate_error);
}

TEST_CASE("degenerate 0/0 adjustments return 0 with the flag") {
  auto t = table({{7}});
  DegenerateFlag flag = DegenerateFlag::none;
  CHECK(ami(t, kQ2, flag) == 0.0);
  CHECK(flag == DegenerateFlag::zero_denominator_defined_zero);
  flag = DegenerateFlag::none;
  CHECK(ari(t, flag) == 0.0);
  CHECK(flag == DegenerateFlag::zero_denominator_defined_zero);
}

TEST_CASE("smi equals sri at q=2 and svi everywhere") {
  Rng rng(89);
  for (int round = 0; round < 15; ++round) {
    auto t = random_pair_table(rng, 10 + rng.below(40), 4, 4);
    CHECK(std::abs(smi(t, kQ2) - sri(t)) <= 1e-9);
    for (const QParam& q : {kShannon, kQ2, QParam::tsallis(0.5),
                            QParam::tsallis(3.0)}) {
      CHECK(std::abs(smi(t, q) - svi(t, q)) <= 1e-9);
    }
  }
}

TEST_CASE("smi matches standardization with enumeration-oracle moments") {
  Rng rng(97);
  for (int round = 0; round < 10; ++round) {
    auto t = random_pair_table(rng, 5 + rng.below(4), 3, 3);  // N <= 8
    auto a = t.row_marginals();
    auto b = t.col_marginals();
    for (const QParam& q : {kShannon, kQ2, QParam::tsallis(0.5)}) {
      auto o = enumerate_moments(a, b, [&](const ContingencyTable& m) {
        return mutual_information(m, q);
      });
      if (o.variance <= 1e-15) continue;  // deterministic family
      double reference =
          (mutual_information(t, q) - o.mean) / std::sqrt(o.variance);
      CHECK(std::abs(smi(t, q) - reference) <= 1e-9);
    }
  }
}

TEST_CASE("standardized measure has mean 0 and variance 1 under the model") {
  auto t = table({{2, 1}, {1, 2}});  // N = 6
  auto a = t.row_marginals();
  auto b = t.col_marginals();
  for (const QParam& q : {kShannon, kQ2}) {
    // standardize each enumerated table with the module's moments
    double e_mi = expected_mutual_information(t, q);
    double sd_mi = std::sqrt(variance_mutual_information(t, q));
    REQUIRE(sd_mi > 0.0);
    auto o = enumerate_moments(a, b, [&](const ContingencyTable& m) {
      return (mutual_information(m, q) - e_mi) / sd_mi;
    });
    CHECK(std::abs(o.mean) <= 1e-9);
    CHECK(std::abs(o.variance - 1.0) <= 1e-9);
  }
}

TEST_CASE("smi is undefined on deterministic table families") {
  CHECK_THROWS_AS(smi(table({{2, 3, 4}}), kQ2), degenerate_error);  // 1 x c
  CHECK_THROWS_AS(smi(table({{5}}), kShannon), degenerate_error);
  CHECK_THROWS_AS(sri(table({{2, 3, 4}})), degenerate_error);
}

TEST_CASE("adjusted and standardized measures are transposition-invariant") {
  Rng rng(101);
  for (int round = 0; round < 12; ++round) {
    auto t = random_pair_table(rng, 10 + rng.below(30), 4, 5);
    auto tt = t.transposed();
    for (const QParam& q : {kShannon, kQ2, QParam::tsallis(0.5)}) {
      CHECK(std::abs(ami(t, q) - ami(tt, q)) <= 1e-9);
      CHECK(std::abs(smi(t, q) - smi(tt, q)) <= 1e-9);
    }
    CHECK(std::abs(ari(t) - ari(tt)) <= 1e-12);
  }
}

TEST_CASE("baseline: mean ami over random partition pairs is near 0") {
  // CI-scale run (300 trials, tolerance widened accordingly); the
  // acceptance suite runs the full sweep.
  const int trials = 300;
  for (const QParam& q : {kShannon, kQ2}) {
    double sum = 0.0;
    for (int trial = 0; trial < trials; ++trial) {
      std::uint64_t s = derive_seed(301, trial);
      auto u = random_partition(RandomPartitionSpec::uniform(100, 4),
                                derive_seed(s, 0));
      auto v = random_partition(RandomPartitionSpec::uniform(100, 6),
                                derive_seed(s, 1));
      sum += ami(ContingencyTable::from_dense_labels(4, 6, u, v), q);
    }
    CHECK(std::abs(sum / trials) <= 0.02);
  }
}

TEST_CASE("scenario orderings across q") {
  auto equal = scenario_equal_sizes();
  auto rare = scenario_rare_clusters();
  auto balanced = scenario_balanced_reference();
  QParam q05 = QParam::tsallis(0.5);
  QParam q25 = QParam::tsallis(2.5);

  CHECK(ami(equal.pure_solution, q05) > ami(equal.spread_solution, q05));
  CHECK(ami(rare.pure_solution, q05) > ami(rare.spread_solution, q05));
  CHECK(ami(balanced.spread_solution, q25) > ami(balanced.pure_solution, q25));
  // the pair-count index prefers the spread solution on the rare-cluster
  // reference, opposite to small q
  CHECK(ari(rare.spread_solution) > ari(rare.pure_solution));
}

TEST_CASE("p-value bound") {
  CHECK(p_value_bound(0.0) == 1.0);
  CHECK(p_value_bound(-3.0) == 1.0);
  CHECK(p_value_bound(3.0) == doctest::Approx(0.1).epsilon(1e-14));
  double p446 = p_value_bound(4.46);
  CHECK(p446 == doctest::Approx(1.0 / 20.8916).epsilon(1e-12));
  CHECK(p446 < 0.05);
  double prev = 1.0;
  for (double s : {0.5, 1.0, 2.0, 4.0, 8.0, 16.0}) {
    double p = p_value_bound(s);
    CHECK(p < prev);
    CHECK(p > 0.0);
    CHECK(p <= 1.0);
    prev = p;
  }
  CHECK_THROWS_AS(p_value_bound(std::nan("")), std::invalid_argument);
}

TEST_CASE("adjusted report") {
  auto t = table({{8, 2}, {1, 9}});
  auto r = adjusted_report(t, kQ2, /*with_smi=*/true);
  CHECK(r.ami_q == doctest::Approx(ami(t, kQ2)).epsilon(1e-14));
  CHECK(std::abs(r.ami_q + r.nvi_q - 1.0) <= 1e-12);
  REQUIRE(r.smi_q.has_value());
  CHECK(*r.smi_q == doctest::Approx(smi(t, kQ2)).epsilon(1e-12));
  REQUIRE(r.p_value_bound.has_value());  // smi positive here
  CHECK(*r.p_value_bound == doctest::Approx(p_value_bound(*r.smi_q)));
  CHECK(r.degenerate_flag == DegenerateFlag::none);
  REQUIRE(r.moments.var_mi.has_value());

  auto lean = adjusted_report(t, kQ2, /*with_smi=*/false);
  CHECK_FALSE(lean.smi_q.has_value());
  CHECK_FALSE(lean.p_value_bound.has_value());

  // anti-correlated table: smi negative, no p-value bound
  auto anti = table({{1, 9}, {9, 1}});
  auto ra = adjusted_report(anti, kShannon, true);
  REQUIRE(ra.smi_q.has_value());
  if (*ra.smi_q <= 0.0) CHECK_FALSE(ra.p_value_bound.has_value());

  // degenerate 1x1: flagged zero, nvi reported as 0
  auto rd = adjusted_report(table({{6}}), kQ2, false);
  CHECK(rd.ami_q == 0.0);
  CHECK(rd.nvi_q == 0.0);
  CHECK(rd.degenerate_flag == DegenerateFlag::zero_denominator_defined_zero);
}
