#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace clucomp {

/// Malformed input text. `line` is 1-based within the offending stream;
/// 0 means the failure is not tied to a specific line.
class parse_error : public std::runtime_error {
 public:
  parse_error(const std::string& msg, std::size_t line)
      : std::runtime_error(
            line > 0 ? msg + " (line " + std::to_string(line) + ")" : msg),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// A measure that is mathematically undefined for the given inputs.
/// The message names the offending measure.
class degenerate_error : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Internal consistency violated, e.g. a variance negative far beyond
/// rounding noise. Indicates a bug, not bad input.
class internal_error : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace clucomp
