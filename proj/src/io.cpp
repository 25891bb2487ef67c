#include "clucomp/io.hpp"

#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "clucomp/errors.hpp"

namespace clucomp {

namespace {

std::vector<std::string> tokenize(const std::string& line) {
  std::string normalized = line;
  for (char& ch : normalized)
    if (ch == ',') ch = ' ';
  std::istringstream is(normalized);
  std::vector<std::string> tokens;
  std::string tok;
  while (is >> tok) tokens.push_back(tok);
  return tokens;
}

bool skippable(const std::string& line) {
  for (char ch : line) {
    if (ch == '#') return true;
    if (!std::isspace(static_cast<unsigned char>(ch))) return false;
  }
  return true;  // blank
}

std::int64_t parse_count(const std::string& tok, std::size_t line_no) {
  std::size_t pos = 0;
  std::int64_t v = 0;
  try {
    v = std::stoll(tok, &pos);
  } catch (const std::exception&) {
    throw parse_error("expected an integer, got '" + tok + "'", line_no);
  }
  if (pos != tok.size())
    throw parse_error("expected an integer, got '" + tok + "'", line_no);
  return v;
}

}  // namespace

LabelPairs read_label_pairs(std::istream& in) {
  LabelPairs out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (skippable(line)) continue;
    auto tokens = tokenize(line);
    if (tokens.size() != 2)
      throw parse_error("expected two labels per line, got " +
                            std::to_string(tokens.size()),
                        line_no);
    out.u.push_back(std::move(tokens[0]));
    out.v.push_back(std::move(tokens[1]));
  }
  if (out.u.empty()) throw parse_error("no label pairs in input", line_no);
  return out;
}

LabelPairs read_label_pairs_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw parse_error("cannot open '" + path + "'", 0);
  return read_label_pairs(in);
}

std::vector<std::vector<std::int64_t>> read_count_grid(std::istream& in) {
  std::vector<std::vector<std::int64_t>> grid;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (skippable(line)) continue;
    auto tokens = tokenize(line);
    std::vector<std::int64_t> row;
    row.reserve(tokens.size());
    for (const auto& tok : tokens) row.push_back(parse_count(tok, line_no));
    if (!grid.empty() && row.size() != grid.front().size())
      throw parse_error("row has " + std::to_string(row.size()) +
                            " entries, expected " +
                            std::to_string(grid.front().size()),
                        line_no);
    grid.push_back(std::move(row));
  }
  if (grid.empty()) throw parse_error("no rows in contingency input", line_no);
  return grid;
}

std::vector<std::vector<std::int64_t>> read_count_grid_file(
    const std::string& path) {
  std::ifstream in(path);
  if (!in) throw parse_error("cannot open '" + path + "'", 0);
  return read_count_grid(in);
}

std::string format_full(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

std::string format_human(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.6g", x);
  return buf;
}

}  // namespace clucomp
