#pragma once

#include <cstdint>
#include <istream>
#include <string>
#include <vector>

namespace clucomp {

/// Label file: one object per line, two whitespace- or comma-separated
/// tokens (u-label, v-label). Lines starting with '#' and blank lines are
/// ignored. Labels are arbitrary strings.
struct LabelPairs {
  std::vector<std::string> u;
  std::vector<std::string> v;
};

LabelPairs read_label_pairs(std::istream& in);
LabelPairs read_label_pairs_file(const std::string& path);

/// Contingency file: one row per line, nonnegative integers separated by
/// whitespace or commas; '#' comment lines ignored.
std::vector<std::vector<std::int64_t>> read_count_grid(std::istream& in);
std::vector<std::vector<std::int64_t>> read_count_grid_file(
    const std::string& path);

/// 17 significant digits: lossless double round-trip for machine formats.
std::string format_full(double x);

/// 6 significant digits for human-facing output.
std::string format_human(double x);

}  // namespace clucomp
