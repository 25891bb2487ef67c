#pragma once

#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <string>

namespace clucomp {

/// Entropy-order parameter: either the Shannon limit or a Tsallis order
/// q > 0, q != 1. Shannon is a distinguished variant rather than an
/// epsilon-limit of Tsallis; orders too close to 1 are rejected as
/// ill-conditioned.
class QParam {
 public:
  static QParam shannon() { return QParam(1.0, true); }

  static QParam tsallis(double q) {
    if (!std::isfinite(q) || q <= 0.0)
      throw std::invalid_argument("Tsallis order q must be finite and > 0");
    if (std::abs(q - 1.0) < 1e-9)
      throw std::invalid_argument(
          "Tsallis order too close to 1; use QParam::shannon()");
    return QParam(q, false);
  }

  bool is_shannon() const noexcept { return shannon_; }

  /// Tsallis order; 1.0 for the Shannon variant.
  double q() const noexcept { return q_; }

  /// "shannon" or the numeric order, e.g. "2", "0.5".
  std::string label() const {
    if (shannon_) return "shannon";
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.12g", q_);
    return buf;
  }

  friend bool operator==(const QParam& a, const QParam& b) noexcept {
    return a.shannon_ == b.shannon_ && (a.shannon_ || a.q_ == b.q_);
  }

 private:
  QParam(double q, bool shannon) : q_(q), shannon_(shannon) {}

  double q_;
  bool shannon_;
};

}  // namespace clucomp
