#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

namespace clucomp::detail {

/// ln(k!) for k = 0..n, precomputed once per evaluation. Direct factorial
/// ratios overflow doubles beyond N ~ 170; all PMF seeds go through here.
class LogFactorials {
 public:
  explicit LogFactorials(std::int64_t n) : v_(static_cast<std::size_t>(n) + 1) {
    v_[0] = 0.0;
    for (std::int64_t k = 1; k <= n; ++k)
      v_[k] = v_[k - 1] + std::log(static_cast<double>(k));
  }

  double operator()(std::int64_t k) const { return v_[static_cast<std::size_t>(k)]; }

 private:
  std::vector<double> v_;
};

/// Visits (n, P(n)) over the support of a hypergeometric cell count:
/// `draws` objects sampled without replacement from a population of `pop`
/// containing `succ` successes. The first probability is seeded in
/// log-factorial space; the rest follow the ratio recurrence
///   P(n+1) = P(n) (draws-n)(succ-n) / ((n+1)(pop-draws-succ+n+1)).
template <class F>
inline void for_each_hypergeom(std::int64_t draws, std::int64_t succ,
                               std::int64_t pop, const LogFactorials& lf,
                               F&& visit) {
  const std::int64_t lo = std::max<std::int64_t>(0, draws + succ - pop);
  const std::int64_t hi = std::min(draws, succ);
  double p = std::exp(lf(draws) + lf(succ) + lf(pop - draws) + lf(pop - succ) -
                      lf(pop) - lf(lo) - lf(draws - lo) - lf(succ - lo) -
                      lf(pop - draws - succ + lo));
  for (std::int64_t n = lo;; ++n) {
    visit(n, p);
    if (n == hi) break;
    const double num =
        static_cast<double>(draws - n) * static_cast<double>(succ - n);
    const double den = static_cast<double>(n + 1) *
                       static_cast<double>(pop - draws - succ + n + 1);
    p *= num / den;
  }
}

}  // namespace clucomp::detail
