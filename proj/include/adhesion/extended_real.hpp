#pragma once

#include <cassert>
#include <compare>

namespace adhesion {

/// Real number or +infinity. The infinite state is a flag, never a large
/// float, so Legendre transforms with restricted domains stay exact.
class ExtendedReal {
 public:
  static constexpr ExtendedReal finite(double v) { return ExtendedReal(v, false); }
  static constexpr ExtendedReal plus_infinity() { return ExtendedReal(0.0, true); }

  constexpr bool is_infinite() const { return infinite_; }
  constexpr bool is_finite() const { return !infinite_; }
  constexpr double value() const {
    assert(!infinite_);
    return value_;
  }

  friend constexpr bool operator==(const ExtendedReal& a, const ExtendedReal& b) {
    if (a.infinite_ || b.infinite_) return a.infinite_ == b.infinite_;
    return a.value_ == b.value_;
  }
  friend constexpr std::partial_ordering operator<=>(const ExtendedReal& a, const ExtendedReal& b) {
    if (a.infinite_ && b.infinite_) return std::partial_ordering::equivalent;
    if (a.infinite_) return std::partial_ordering::greater;
    if (b.infinite_) return std::partial_ordering::less;
    return a.value_ <=> b.value_;
  }
  friend constexpr ExtendedReal operator-(const ExtendedReal& a, double b) {
    return a.infinite_ ? a : finite(a.value_ - b);
  }
  friend constexpr ExtendedReal operator+(const ExtendedReal& a, double b) {
    return a.infinite_ ? a : finite(a.value_ + b);
  }

 private:
  constexpr ExtendedReal(double v, bool inf) : value_(v), infinite_(inf) {}
  double value_;
  bool infinite_;
};

}  // namespace adhesion
