#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace clucomp {

/// r x c grid of co-occurrence counts between the clusters of two
/// partitions of the same N objects, with cached marginals. Immutable
/// after construction; safe to share across threads.
class ContingencyTable {
 public:
  /// Validates and adopts a counts grid. Rejects negative entries,
  /// ragged rows, empty grids and all-zero rows or columns.
  static ContingencyTable from_counts(
      const std::vector<std::vector<std::int64_t>>& grid);

  /// Builds the table from two parallel label sequences. Cluster ids are
  /// mapped to dense indices in first-appearance order, so empty clusters
  /// never materialize.
  template <typename Label>
  static ContingencyTable from_labels(const std::vector<Label>& labels_u,
                                      const std::vector<Label>& labels_v) {
    if (labels_u.size() != labels_v.size())
      throw std::invalid_argument("label sequences differ in length");
    if (labels_u.empty())
      throw std::invalid_argument("label sequences are empty");

    std::map<Label, int> u_index, v_index;
    std::vector<int> u(labels_u.size()), v(labels_v.size());
    int r = 0, c = 0;
    for (std::size_t k = 0; k < labels_u.size(); ++k) {
      auto [iu, new_u] = u_index.try_emplace(labels_u[k], r);
      if (new_u) ++r;
      auto [iv, new_v] = v_index.try_emplace(labels_v[k], c);
      if (new_v) ++c;
      u[k] = iu->second;
      v[k] = iv->second;
    }
    return from_dense_labels(r, c, u, v);
  }

  /// Builds from already-dense labels in [0,r) x [0,c). Every index must
  /// occur at least once. Used where the row/column order must match a
  /// given marginal order exactly (oracle, experiments).
  static ContingencyTable from_dense_labels(int r, int c,
                                            const std::vector<int>& u,
                                            const std::vector<int>& v);

  int rows() const noexcept { return rows_; }
  int cols() const noexcept { return cols_; }
  std::int64_t at(int i, int j) const { return counts_[idx(i, j)]; }
  std::int64_t row_marginal(int i) const { return row_marg_[i]; }
  std::int64_t col_marginal(int j) const { return col_marg_[j]; }
  const std::vector<std::int64_t>& row_marginals() const { return row_marg_; }
  const std::vector<std::int64_t>& col_marginals() const { return col_marg_; }
  std::int64_t total() const noexcept { return total_; }

  ContingencyTable transposed() const;

  /// Same cluster structure with every count multiplied by k >= 1.
  ContingencyTable scaled(std::int64_t k) const;

  std::vector<std::vector<std::int64_t>> grid() const;

  friend bool operator==(const ContingencyTable& a,
                         const ContingencyTable& b) = default;

 private:
  ContingencyTable() = default;
  std::size_t idx(int i, int j) const {
    return static_cast<std::size_t>(i) * cols_ + j;
  }
  void recompute_marginals();

  int rows_ = 0, cols_ = 0;
  std::vector<std::int64_t> counts_;
  std::vector<std::int64_t> row_marg_, col_marg_;
  std::int64_t total_ = 0;
};

/// Pair tallies over the C(N,2) object pairs: co-clustered in both
/// partitions, in neither, or in exactly one.
struct PairCounts {
  std::int64_t same_same = 0;  // k11
  std::int64_t diff_diff = 0;  // k00
  std::int64_t same_diff = 0;  // k10: same in U, different in V
  std::int64_t diff_same = 0;  // k01

  std::int64_t total_pairs() const noexcept {
    return same_same + diff_diff + same_diff + diff_same;
  }
};

PairCounts pair_counts(const ContingencyTable& t);

}  // namespace clucomp
