#pragma once

// Arbitrary-precision binary floating value (MPFR) with its working
// precision chosen per value in decimal digits. Results of binary
// operations take the larger precision of the two operands.

#include <compare>
#include <string>

#include <gmpxx.h>
#include <mpfr.h>

namespace ks {

class PrecisionReal {
 public:
  static constexpr unsigned kDefaultDigits = 100;

  explicit PrecisionReal(unsigned digits = kDefaultDigits);
  PrecisionReal(double v, unsigned digits);
  PrecisionReal(long v, unsigned digits);
  PrecisionReal(const mpz_class& v, unsigned digits);
  /// Decimal text such as "9.0e15"; throws std::invalid_argument.
  PrecisionReal(const std::string& text, unsigned digits);

  PrecisionReal(const PrecisionReal& o);
  PrecisionReal(PrecisionReal&& o) noexcept;
  PrecisionReal& operator=(const PrecisionReal& o);
  PrecisionReal& operator=(PrecisionReal&& o) noexcept;
  ~PrecisionReal();

  unsigned digits() const { return digits_; }
  PrecisionReal with_digits(unsigned digits) const;

  PrecisionReal operator-() const;
  friend PrecisionReal operator+(const PrecisionReal& x, const PrecisionReal& y);
  friend PrecisionReal operator-(const PrecisionReal& x, const PrecisionReal& y);
  friend PrecisionReal operator*(const PrecisionReal& x, const PrecisionReal& y);
  friend PrecisionReal operator/(const PrecisionReal& x, const PrecisionReal& y);

  friend std::partial_ordering operator<=>(const PrecisionReal& x, const PrecisionReal& y);
  friend bool operator==(const PrecisionReal& x, const PrecisionReal& y);

  friend PrecisionReal log(const PrecisionReal& x);
  friend PrecisionReal log1p(const PrecisionReal& x);
  friend PrecisionReal exp(const PrecisionReal& x);
  friend PrecisionReal expm1(const PrecisionReal& x);
  friend PrecisionReal lngamma(const PrecisionReal& x);  // x > 0
  friend PrecisionReal pow(const PrecisionReal& x, const PrecisionReal& y);
  friend PrecisionReal abs(const PrecisionReal& x);

  int sign() const;
  bool is_zero() const { return sign() == 0; }
  double to_double() const;
  /// Scientific notation with `significant` digits, e.g. "1.19163e-05".
  std::string to_string(unsigned significant) const;
  /// Nearest integer (ties away from zero).
  mpz_class round() const;

  const __mpfr_struct* get() const { return value_; }
  __mpfr_struct* get() { return value_; }

 private:
  unsigned digits_;
  mpfr_t value_;
};

/// Bits needed for `digits` significant decimal digits plus guard bits.
mpfr_prec_t bits_for_digits(unsigned digits);

}  // namespace ks
