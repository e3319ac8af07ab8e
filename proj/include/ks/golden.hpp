#pragma once

// Exact numbers a + b*tau over an integer-like Scalar, tau = (1 + sqrt 5)/2.
// kappa = 1/tau = tau - 1 is GoldenNumber(-1, 1).

#include <compare>
#include <type_traits>
#include <ostream>

#include <Eigen/Core>

namespace ks {

template <class Scalar = long long>
class GoldenNumber {
 public:
  constexpr GoldenNumber() = default;
  constexpr GoldenNumber(Scalar a) : a_(a) {}  // NOLINT: implicit like an integer
  constexpr GoldenNumber(Scalar a, Scalar b) : a_(a), b_(b) {}

  static constexpr GoldenNumber tau() { return {0, 1}; }
  static constexpr GoldenNumber kappa() { return {-1, 1}; }

  constexpr Scalar a() const { return a_; }
  constexpr Scalar b() const { return b_; }

  constexpr GoldenNumber operator-() const { return {-a_, -b_}; }
  constexpr GoldenNumber& operator+=(const GoldenNumber& o) {
    a_ += o.a_;
    b_ += o.b_;
    return *this;
  }
  constexpr GoldenNumber& operator-=(const GoldenNumber& o) {
    a_ -= o.a_;
    b_ -= o.b_;
    return *this;
  }
  // tau^2 = tau + 1
  constexpr GoldenNumber& operator*=(const GoldenNumber& o) {
    Scalar a = a_ * o.a_ + b_ * o.b_;
    Scalar b = a_ * o.b_ + b_ * o.a_ + b_ * o.b_;
    a_ = a;
    b_ = b;
    return *this;
  }
  friend constexpr GoldenNumber operator+(GoldenNumber x, const GoldenNumber& y) { return x += y; }
  friend constexpr GoldenNumber operator-(GoldenNumber x, const GoldenNumber& y) { return x -= y; }
  friend constexpr GoldenNumber operator*(GoldenNumber x, const GoldenNumber& y) { return x *= y; }

  friend constexpr bool operator==(const GoldenNumber& x, const GoldenNumber& y) = default;

  /// -1, 0 or 1, exactly. a + b*tau = (p + q*sqrt5)/2 with p = 2a + b, q = b.
  constexpr int sign() const {
    Scalar p = 2 * a_ + b_;
    Scalar q = b_;
    auto sgn = [](Scalar v) { return v > 0 ? 1 : (v < 0 ? -1 : 0); };
    int sp = sgn(p), sq = sgn(q);
    if (sp == sq || sq == 0) return sp;
    if (sp == 0) return sq;
    // opposite signs: compare p^2 with 5 q^2
    int d;
    if constexpr (std::is_integral_v<Scalar> && sizeof(Scalar) <= 8) {
      auto wp = static_cast<__int128>(p), wq = static_cast<__int128>(q);
      __int128 diff = wp * wp - 5 * wq * wq;
      d = diff > 0 ? 1 : (diff < 0 ? -1 : 0);
    } else {
      d = sgn(p * p - 5 * q * q);
    }
    return sp > 0 ? d : -d;
  }

  friend constexpr std::strong_ordering operator<=>(const GoldenNumber& x, const GoldenNumber& y) {
    int s = (x - y).sign();
    return s < 0 ? std::strong_ordering::less : (s > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
  }

  friend constexpr GoldenNumber abs(const GoldenNumber& x) { return x.sign() < 0 ? -x : x; }

  double to_double() const {
    return static_cast<double>(a_) + static_cast<double>(b_) * 1.6180339887498948482;
  }

 private:
  Scalar a_{0};
  Scalar b_{0};
};

/// Writes "a+bt" / "a-bt", the vector file token.
template <class Scalar>
std::ostream& operator<<(std::ostream& os, const GoldenNumber<Scalar>& g) {
  os << g.a() << (g.b() < 0 ? "-" : "+") << (g.b() < 0 ? -g.b() : g.b()) << 't';
  return os;
}

}  // namespace ks

namespace Eigen {

template <class Scalar>
struct NumTraits<ks::GoldenNumber<Scalar>> : GenericNumTraits<ks::GoldenNumber<Scalar>> {
  using Real = ks::GoldenNumber<Scalar>;
  using NonInteger = ks::GoldenNumber<Scalar>;
  using Literal = ks::GoldenNumber<Scalar>;
  using Nested = ks::GoldenNumber<Scalar>;
  enum {
    IsComplex = 0,
    IsInteger = 0,
    IsSigned = 1,
    RequireInitialization = 0,
    ReadCost = 2,
    AddCost = 2,
    MulCost = 6
  };
  // exact values; IOFormat asks for this when printing matrices
  static inline int digits10() { return 0; }
};

}  // namespace Eigen
