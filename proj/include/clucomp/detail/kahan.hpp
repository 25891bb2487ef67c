#pragma once

namespace clucomp::detail {

/// Compensated (Kahan) accumulator. Entropy and moment computations sum
/// many near-equal small terms; plain summation loses digits there.
class KahanSum {
 public:
  void add(double x) noexcept {
    double y = x - c_;
    double t = s_ + y;
    c_ = (t - s_) - y;
    s_ = t;
  }

  double value() const noexcept { return s_; }

 private:
  double s_ = 0.0;
  double c_ = 0.0;
};

}  // namespace clucomp::detail
