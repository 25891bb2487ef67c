#include "clucomp/contingency.hpp"

#include <numeric>

namespace clucomp {

ContingencyTable ContingencyTable::from_counts(
    const std::vector<std::vector<std::int64_t>>& grid) {
  if (grid.empty() || grid.front().empty())
    throw std::invalid_argument("contingency grid is empty");

  ContingencyTable t;
  t.rows_ = static_cast<int>(grid.size());
  t.cols_ = static_cast<int>(grid.front().size());
  t.counts_.reserve(static_cast<std::size_t>(t.rows_) * t.cols_);
  for (const auto& row : grid) {
    if (static_cast<int>(row.size()) != t.cols_)
      throw std::invalid_argument("contingency grid rows differ in length");
    for (std::int64_t v : row) {
      if (v < 0) throw std::invalid_argument("negative contingency count");
      t.counts_.push_back(v);
    }
  }
  t.recompute_marginals();
  for (int i = 0; i < t.rows_; ++i)
    if (t.row_marg_[i] == 0)
      throw std::invalid_argument("all-zero row in contingency grid");
  for (int j = 0; j < t.cols_; ++j)
    if (t.col_marg_[j] == 0)
      throw std::invalid_argument("all-zero column in contingency grid");
  return t;
}

ContingencyTable ContingencyTable::from_dense_labels(
    int r, int c, const std::vector<int>& u, const std::vector<int>& v) {
  if (r < 1 || c < 1 || u.size() != v.size() || u.empty())
    throw std::invalid_argument("bad dense label input");
  ContingencyTable t;
  t.rows_ = r;
  t.cols_ = c;
  t.counts_.assign(static_cast<std::size_t>(r) * c, 0);
  for (std::size_t k = 0; k < u.size(); ++k) {
    if (u[k] < 0 || u[k] >= r || v[k] < 0 || v[k] >= c)
      throw std::invalid_argument("dense label out of range");
    ++t.counts_[t.idx(u[k], v[k])];
  }
  t.recompute_marginals();
  for (int i = 0; i < r; ++i)
    if (t.row_marg_[i] == 0)
      throw std::invalid_argument("dense label index unused (empty cluster)");
  for (int j = 0; j < c; ++j)
    if (t.col_marg_[j] == 0)
      throw std::invalid_argument("dense label index unused (empty cluster)");
  return t;
}

void ContingencyTable::recompute_marginals() {
  row_marg_.assign(rows_, 0);
  col_marg_.assign(cols_, 0);
  total_ = 0;
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) {
      std::int64_t v = counts_[idx(i, j)];
      row_marg_[i] += v;
      col_marg_[j] += v;
      total_ += v;
    }
  if (total_ < 1) throw std::invalid_argument("contingency table has no mass");
}

ContingencyTable ContingencyTable::transposed() const {
  ContingencyTable t;
  t.rows_ = cols_;
  t.cols_ = rows_;
  t.counts_.resize(counts_.size());
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) t.counts_[t.idx(j, i)] = counts_[idx(i, j)];
  t.row_marg_ = col_marg_;
  t.col_marg_ = row_marg_;
  t.total_ = total_;
  return t;
}

ContingencyTable ContingencyTable::scaled(std::int64_t k) const {
  if (k < 1) throw std::invalid_argument("scale factor must be >= 1");
  ContingencyTable t(*this);
  for (auto& v : t.counts_) v *= k;
  for (auto& v : t.row_marg_) v *= k;
  for (auto& v : t.col_marg_) v *= k;
  t.total_ *= k;
  return t;
}

std::vector<std::vector<std::int64_t>> ContingencyTable::grid() const {
  std::vector<std::vector<std::int64_t>> g(rows_,
                                           std::vector<std::int64_t>(cols_));
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) g[i][j] = counts_[idx(i, j)];
  return g;
}

PairCounts pair_counts(const ContingencyTable& t) {
  std::int64_t n = t.total();
  std::int64_t sum_sq_cells = 0;
  for (int i = 0; i < t.rows(); ++i)
    for (int j = 0; j < t.cols(); ++j) {
      std::int64_t v = t.at(i, j);
      sum_sq_cells += v * v;
    }
  std::int64_t sum_sq_rows = 0, sum_sq_cols = 0;
  for (int i = 0; i < t.rows(); ++i)
    sum_sq_rows += t.row_marginal(i) * t.row_marginal(i);
  for (int j = 0; j < t.cols(); ++j)
    sum_sq_cols += t.col_marginal(j) * t.col_marginal(j);

  // All four tallies are integer: sum of squares minus the matching
  // linear term is always even.
  PairCounts k;
  k.same_same = (sum_sq_cells - n) / 2;
  k.same_diff = (sum_sq_rows - sum_sq_cells) / 2;
  k.diff_same = (sum_sq_cols - sum_sq_cells) / 2;
  k.diff_diff = n * (n - 1) / 2 - k.same_same - k.same_diff - k.diff_same;
  return k;
}

}  // namespace clucomp
