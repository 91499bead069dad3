#pragma once

#include <cmath>
#include <compare>
#include <limits>
#include <ostream>
#include <stdexcept>

namespace hyperlab {

/// Nonnegative real extended with +infinity. The codomain of the Hausdorff
/// distance and of packing radii (a single point has no pairwise distance).
template <typename Scalar>
class ExtReal {
public:
  constexpr ExtReal() = default;
  constexpr ExtReal(Scalar v) : value_(v)
  {
    if (!(v >= Scalar(0))) {
      throw std::domain_error("ExtReal: value must be nonnegative");
    }
  }

  static constexpr ExtReal infinity() noexcept
  {
    ExtReal r;
    r.value_ = std::numeric_limits<Scalar>::infinity();
    return r;
  }

  constexpr bool is_infinite() const noexcept { return std::isinf(value_); }
  constexpr bool is_finite() const noexcept { return !is_infinite(); }

  /// Finite payload. Throws on INFINITY.
  constexpr Scalar value() const
  {
    if (is_infinite()) {
      throw std::domain_error("ExtReal: value() on INFINITY");
    }
    return value_;
  }

  /// Raw representation; +inf for INFINITY.
  constexpr Scalar raw() const noexcept { return value_; }

  friend constexpr bool operator==(ExtReal a, ExtReal b) noexcept { return a.value_ == b.value_; }
  friend constexpr auto operator<=>(ExtReal a, ExtReal b) noexcept { return a.value_ <=> b.value_; }

  friend constexpr ExtReal operator+(ExtReal a, ExtReal b) noexcept
  {
    ExtReal r;
    r.value_ = a.value_ + b.value_;
    return r;
  }

  friend constexpr ExtReal max(ExtReal a, ExtReal b) noexcept { return a < b ? b : a; }
  friend constexpr ExtReal min(ExtReal a, ExtReal b) noexcept { return b < a ? b : a; }

  friend std::ostream& operator<<(std::ostream& os, ExtReal x)
  {
    if (x.is_infinite()) {
      return os << "inf";
    }
    return os << x.value_;
  }

private:
  Scalar value_ = Scalar(0);
};

} // namespace hyperlab
