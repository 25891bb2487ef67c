#include "doctest.h"

#include <cmath>
#include <vector>

#include "clucomp/errors.hpp"
#include "clucomp/measures.hpp"
#include "clucomp/moments.hpp"
#include "clucomp/oracle.hpp"

using namespace clucomp;

namespace {

using Marginals = std::vector<std::int64_t>;

ContingencyTable table(std::vector<std::vector<std::int64_t>> g) {
  return ContingencyTable::from_counts(g);
}

// Random cluster-size profile: k parts >= 1 summing to n.
Marginals random_marginals(Rng& rng, std::int64_t n, int max_k) {
  int k = 1 + static_cast<int>(rng.below(std::min<std::int64_t>(max_k, n)));
  Marginals sizes(static_cast<std::size_t>(k), 1);
  for (std::int64_t left = n - k; left > 0; --left)
    ++sizes[static_cast<std::size_t>(rng.below(k))];
  return sizes;
}

// The observed-table cell-sum statistic for the family: sum n_ij^q, or the
// Shannon cell term sum. Kept independent of the moment engine.
TableStatistic sum_phi_statistic(QParam q) {
  return [q](const ContingencyTable& t) {
    double acc = 0.0;
    double n = static_cast<double>(t.total());
    for (int i = 0; i < t.rows(); ++i)
      for (int j = 0; j < t.cols(); ++j) {
        std::int64_t v = t.at(i, j);
        if (v == 0) continue;
        acc += q.is_shannon() ? (static_cast<double>(v) / n) *
                                    std::log(static_cast<double>(v) / n)
                              : std::pow(static_cast<double>(v), q.q());
      }
    return acc;
  };
}

const std::vector<QParam> kFamilies = {QParam::tsallis(0.5), QParam::shannon(),
                                       QParam::tsallis(2.0),
                                       QParam::tsallis(3.0)};

bool close_rel(double a, double b, double tol) {
  return std::abs(a - b) <= tol * std::max({1.0, std::abs(a), std::abs(b)});
}

}  // namespace

TEST_CASE("hypergeometric pmf series: frozen examples") {
  auto s = hypergeometric_pmf_series(1, 1, 2);
  REQUIRE(s.size() == 2);
  CHECK(s[0].value == 0);
  CHECK(s[0].prob == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(s[1].value == 1);
  CHECK(s[1].prob == doctest::Approx(0.5).epsilon(1e-14));

  // support forced to the single point a+b-N
  s = hypergeometric_pmf_series(2, 2, 2);
  REQUIRE(s.size() == 1);
  CHECK(s[0].value == 2);
  CHECK(s[0].prob == doctest::Approx(1.0).epsilon(1e-14));

  CHECK_THROWS_AS(hypergeometric_pmf_series(5, 2, 4), std::invalid_argument);
  CHECK_THROWS_AS(hypergeometric_pmf_series(1, 1, 0), std::invalid_argument);
}

TEST_CASE("pmf matches exhaustive draw enumeration for (3,4,10)") {
  // Enumerate all C(10,3) draws of 3 objects from 10 where 4 are marked.
  std::vector<double> counts(4, 0.0);
  int total = 0;
  for (int x = 0; x < 10; ++x)
    for (int y = x + 1; y < 10; ++y)
      for (int z = y + 1; z < 10; ++z) {
        int marked = (x < 4) + (y < 4) + (z < 4);
        counts[marked] += 1.0;
        ++total;
      }
  auto s = hypergeometric_pmf_series(3, 4, 10);
  REQUIRE(s.size() == 4);
  for (const auto& term : s)
    CHECK(term.prob ==
          doctest::Approx(counts[term.value] / total).epsilon(1e-13));
}

TEST_CASE("pmf normalization on random parameters") {
  Rng rng(3);
  for (int round = 0; round < 200; ++round) {
    std::int64_t n = 1 + rng.below(400);
    std::int64_t a = rng.below(n + 1);
    std::int64_t b = rng.below(n + 1);
    auto s = hypergeometric_pmf_series(a, b, n);
    double sum = 0.0;
    for (const auto& term : s) sum += term.prob;
    CHECK(std::abs(sum - 1.0) <= 1e-12);
  }
}

TEST_CASE("expected_phi_cell") {
  // identity phi: hypergeometric mean a b / N
  Rng rng(11);
  for (int round = 0; round < 50; ++round) {
    std::int64_t n = 1 + rng.below(60);
    std::int64_t a = rng.below(n + 1);
    std::int64_t b = rng.below(n + 1);
    double mean = expected_phi_cell(
        a, b, n, [](std::int64_t v) { return static_cast<double>(v); });
    CHECK(mean == doctest::Approx(static_cast<double>(a) *
                                  static_cast<double>(b) /
                                  static_cast<double>(n))
                      .epsilon(1e-12));
  }

  CHECK(expected_phi_cell(1, 1, 2, QParam::tsallis(2.0)) ==
        doctest::Approx(0.5).epsilon(1e-14));
  // (2,2,4): draws enumeration gives (0*1 + 1*4 + 4*1)/6
  CHECK(expected_phi_cell(2, 2, 4, QParam::tsallis(2.0)) ==
        doctest::Approx(8.0 / 6.0).epsilon(1e-14));
}

TEST_CASE("expected_sum_phi frozen examples") {
  CHECK(expected_sum_phi(table({{7}}), QParam::tsallis(2.0)) ==
        doctest::Approx(49.0).epsilon(1e-13));
  CHECK(expected_sum_phi(table({{1, 0}, {0, 1}}), QParam::tsallis(2.0)) ==
        doctest::Approx(2.0).epsilon(1e-13));
}

TEST_CASE("second moment frozen examples") {
  // deterministic 1x1: E[(sum phi)^2] = phi(N)^2
  CHECK(second_moment_sum_phi(table({{5}}), QParam::tsallis(2.0)) ==
        doctest::Approx(625.0).epsilon(1e-12));
  CHECK(second_moment_sum_phi(table({{5}}), QParam::tsallis(3.0)) ==
        doctest::Approx(125.0 * 125.0).epsilon(1e-12));

  // a=b=[1,1]: both permutation outcomes give sum n^2 = 2, so the second
  // moment is 4 (confirmed against the enumeration oracle).
  auto t = table({{1, 0}, {0, 1}});
  auto oracle =
      enumerate_moments({1, 1}, {1, 1}, sum_phi_statistic(QParam::tsallis(2.0)));
  double e2 = oracle.variance + oracle.mean * oracle.mean;
  CHECK(e2 == doctest::Approx(4.0).epsilon(1e-13));
  CHECK(second_moment_sum_phi(t, QParam::tsallis(2.0)) ==
        doctest::Approx(4.0).epsilon(1e-12));
}

TEST_CASE("exact moments equal enumeration oracle on random tiny marginals") {
  Rng rng(29);
  for (int config = 0; config < 25; ++config) {
    std::int64_t n = 2 + rng.below(9);  // N <= 10
    Marginals a = random_marginals(rng, n, 3);
    Marginals b = random_marginals(rng, n, 3);
    ContingencyTable shape = ContingencyTable::from_counts(
        [&] {
          // any table with these marginals; moments read only marginals
          std::vector<std::vector<std::int64_t>> g(
              a.size(), std::vector<std::int64_t>(b.size(), 0));
          Marginals rowrem = a, colrem = b;
          std::size_t i = 0, j = 0;
          while (i < a.size() && j < b.size()) {
            std::int64_t v = std::min(rowrem[i], colrem[j]);
            g[i][j] = v;
            rowrem[i] -= v;
            colrem[j] -= v;
            if (rowrem[i] == 0) ++i;
            if (colrem[j] == 0) ++j;
          }
          return g;
        }());

    for (const QParam& q : kFamilies) {
      auto sp = sum_phi_statistic(q);
      auto o = enumerate_moments(a, b, sp);
      CHECK(close_rel(expected_sum_phi(shape, q), o.mean, 1e-10));
      double e2 = o.variance + o.mean * o.mean;
      CHECK(close_rel(second_moment_sum_phi(shape, q), e2, 1e-9));

      auto oh = enumerate_moments(
          a, b, [&](const ContingencyTable& m) { return joint_entropy(m, q); });
      CHECK(close_rel(expected_joint_entropy(shape, q), oh.mean, 1e-10));
      CHECK(close_rel(variance_joint_entropy(shape, q), oh.variance, 1e-9));

      auto omi = enumerate_moments(a, b, [&](const ContingencyTable& m) {
        return mutual_information(m, q);
      });
      CHECK(close_rel(expected_mutual_information(shape, q), omi.mean, 1e-10));
      CHECK(close_rel(variance_mutual_information(shape, q), omi.variance,
                      1e-9));

      auto ovi = enumerate_moments(a, b, [&](const ContingencyTable& m) {
        return variation_of_information(m, q);
      });
      CHECK(close_rel(expected_variation_of_information(shape, q), ovi.mean,
                      1e-10));
      CHECK(close_rel(variance_variation_of_information(shape, q), ovi.variance,
                      1e-9));
    }
  }
}

TEST_CASE("theorem identities: E[MI], E[VI] from E[H joint]") {
  Rng rng(37);
  for (int round = 0; round < 30; ++round) {
    std::int64_t n = 5 + rng.below(80);
    Marginals a = random_marginals(rng, n, 6);
    Marginals b = random_marginals(rng, n, 6);
    std::vector<int> u, v;
    for (std::size_t k = 0; k < a.size(); ++k)
      u.insert(u.end(), a[k], static_cast<int>(k));
    for (std::size_t k = 0; k < b.size(); ++k)
      v.insert(v.end(), b[k], static_cast<int>(k));
    auto t = ContingencyTable::from_dense_labels(
        static_cast<int>(a.size()), static_cast<int>(b.size()), u, v);

    for (const QParam& q : kFamilies) {
      double hu = entropy_u(t, q), hv = entropy_v(t, q);
      double eh = expected_joint_entropy(t, q);
      CHECK(std::abs(expected_mutual_information(t, q) - (hu + hv - eh)) <=
            1e-12);
      CHECK(std::abs(expected_variation_of_information(t, q) -
                     (2.0 * eh - hu - hv)) <= 1e-12);
      if (!q.is_shannon() && q.q() > 1.0)
        CHECK(expected_mutual_information(t, q) >= -1e-12);
    }
  }
}

TEST_CASE("degenerate 1x1 table: zero expected measures, zero variance") {
  auto t = table({{9}});
  for (const QParam& q : kFamilies) {
    CHECK(expected_joint_entropy(t, q) == doctest::Approx(0.0));
    CHECK(expected_mutual_information(t, q) == doctest::Approx(0.0));
    CHECK(expected_variation_of_information(t, q) == doctest::Approx(0.0));
    CHECK(variance_joint_entropy(t, q) == doctest::Approx(0.0));
  }
  // frozen: a=b=[1,1], q=2 -> E[H_2] = (1 - 2/4)/1 = 0.5
  CHECK(expected_joint_entropy(table({{1, 0}, {0, 1}}), QParam::tsallis(2.0)) ==
        doctest::Approx(0.5).epsilon(1e-13));
}

TEST_CASE("variance ratios are exactly 1:1:4") {
  auto t = table({{3, 1, 0}, {0, 2, 2}, {1, 0, 3}});
  for (const QParam& q : kFamilies) {
    double vh = variance_joint_entropy(t, q);
    CHECK(variance_mutual_information(t, q) == vh);
    CHECK(variance_variation_of_information(t, q) == 4.0 * vh);
    CHECK(vh >= 0.0);
  }
}

TEST_CASE("transposition invariance of the moment engine") {
  Rng rng(41);
  for (int round = 0; round < 12; ++round) {
    std::int64_t n = 6 + rng.below(30);
    Marginals a = random_marginals(rng, n, 4);
    Marginals b = random_marginals(rng, n, 4);
    std::vector<std::vector<std::int64_t>> g(
        a.size(), std::vector<std::int64_t>(b.size(), 0));
    Marginals rowrem = a, colrem = b;
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
      std::int64_t v = std::min(rowrem[i], colrem[j]);
      g[i][j] = v;
      rowrem[i] -= v;
      colrem[j] -= v;
      if (rowrem[i] == 0) ++i;
      if (colrem[j] == 0) ++j;
    }
    auto t = table(g);
    auto tt = t.transposed();
    for (const QParam& q : kFamilies) {
      CHECK(close_rel(expected_sum_phi(t, q), expected_sum_phi(tt, q), 1e-12));
      // the conditioning in the second moment is asymmetric; agreement is
      // a theorem, not a reflection of the code path
      CHECK(close_rel(second_moment_sum_phi(t, q),
                      second_moment_sum_phi(tt, q), 1e-10));
    }
  }
}

TEST_CASE("exact values sit inside monte-carlo confidence intervals") {
  auto t = table({{12, 3, 0}, {2, 9, 4}, {0, 5, 10}});  // N = 45
  auto a = t.row_marginals();
  auto b = t.col_marginals();
  for (const QParam& q : {QParam::shannon(), QParam::tsallis(2.0)}) {
    auto mc_mi = monte_carlo_moments(
        a, b,
        [&](const ContingencyTable& m) { return mutual_information(m, q); },
        100000, 1234);
    // 99.9% CI: scale the stored 99% half-width
    double half999 = *mc_mi.ci99_halfwidth * (3.2905 / 2.5758);
    CHECK(std::abs(expected_mutual_information(t, q) - mc_mi.mean) <= half999);

    auto mc_vi = monte_carlo_moments(
        a, b,
        [&](const ContingencyTable& m) {
          return variation_of_information(m, q);
        },
        100000, 987);
    double half999_vi = *mc_vi.ci99_halfwidth * (3.2905 / 2.5758);
    CHECK(std::abs(expected_variation_of_information(t, q) - mc_vi.mean) <=
          half999_vi);
  }
}

TEST_CASE("asymptotic expectations") {
  // uniform 2x2 marginals at N=1000: E[MI_2] ~ (q-1) H_2(U) H_2(V) = 0.25
  auto t = table({{250, 250}, {250, 250}});
  QParam q2 = QParam::tsallis(2.0);
  double limit =
      asymptotic_expected_measure(t, q2, AsymptoticTarget::mutual_information);
  CHECK(limit == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(std::abs(expected_mutual_information(t, q2) - limit) <= 0.01);

  // degenerate U: one cluster has zero entropy, so the MI limit is 0
  auto degenerate = table({{300, 300, 400}});
  CHECK(asymptotic_expected_measure(degenerate, q2,
                                    AsymptoticTarget::mutual_information) ==
        doctest::Approx(0.0));

  // identity between the three limit forms
  double hu = entropy_u(t, q2), hv = entropy_v(t, q2);
  CHECK(asymptotic_expected_measure(t, q2, AsymptoticTarget::joint_entropy) ==
        doctest::Approx(hu + hv - (q2.q() - 1.0) * hu * hv));
  CHECK(asymptotic_expected_measure(
            t, q2, AsymptoticTarget::variation_of_information) ==
        doctest::Approx(hu + hv - 2.0 * (q2.q() - 1.0) * hu * hv));

  CHECK_THROWS_AS(asymptotic_expected_measure(
                      t, QParam::shannon(), AsymptoticTarget::joint_entropy),
                  std::invalid_argument);
}

TEST_CASE("asymptotic jaccard expectation tracks monte carlo at N=1000") {
  std::vector<std::vector<std::int64_t>> g(4, std::vector<std::int64_t>(4, 0));
  for (int i = 0; i < 4; ++i) g[i][i] = 250;
  auto t = table(g);
  double limit = asymptotic_expected_jaccard(t);
  auto mc = monte_carlo_moments(
      t.row_marginals(), t.col_marginals(),
      [](const ContingencyTable& m) { return jaccard(m); }, 20000, 77);
  CHECK(std::abs(limit - mc.mean) <=
        std::max(0.01, 3.0 * *mc.ci99_halfwidth));
}

TEST_CASE("variance shrinks along marginal scalings") {
  auto base = table({{3, 1}, {1, 3}});  // N = 8
  for (const QParam& q : {QParam::tsallis(2.0), QParam::tsallis(3.0)}) {
    double v1 = exact_variance_mi_at_scale(base, q, 1);
    double v4 = exact_variance_mi_at_scale(base, q, 4);
    double v16 = exact_variance_mi_at_scale(base, q, 16);
    CHECK(v1 > v4);
    CHECK(v4 > v16);
  }
  auto one = table({{4}});
  for (std::int64_t k : {1, 4, 16})
    CHECK(exact_variance_mi_at_scale(one, QParam::tsallis(2.0), k) ==
          doctest::Approx(0.0));
}

TEST_CASE("moment report carries consistent fields") {
  auto t = table({{4, 1}, {2, 5}});
  for (const QParam& q : kFamilies) {
    auto r = exact_moment_report(t, q, true);
    REQUIRE(r.var_mi.has_value());
    CHECK(*r.var_mi == *r.var_joint_entropy);
    CHECK(*r.var_vi == 4.0 * *r.var_joint_entropy);
    CHECK(std::abs(r.e_mi - (entropy_u(t, q) + entropy_v(t, q) -
                             r.e_joint_entropy)) <= 1e-12);
    CHECK(r.e_sum_phi ==
          doctest::Approx(expected_sum_phi(t, q)).epsilon(1e-12));

    auto lean = exact_moment_report(t, q, false);
    CHECK_FALSE(lean.var_mi.has_value());
    CHECK_FALSE(lean.e2_sum_phi.has_value());
    CHECK(lean.e_joint_entropy == doctest::Approx(r.e_joint_entropy));
  }
}
