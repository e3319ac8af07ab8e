#include "ks/precision_real.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>

namespace ks {

mpfr_prec_t bits_for_digits(unsigned digits) {
  return static_cast<mpfr_prec_t>(std::ceil(digits * 3.321928094887362)) + 16;
}

PrecisionReal::PrecisionReal(unsigned digits) : digits_(digits) {
  mpfr_init2(value_, bits_for_digits(digits));
  mpfr_set_zero(value_, 1);
}

PrecisionReal::PrecisionReal(double v, unsigned digits) : PrecisionReal(digits) { mpfr_set_d(value_, v, MPFR_RNDN); }

PrecisionReal::PrecisionReal(long v, unsigned digits) : PrecisionReal(digits) { mpfr_set_si(value_, v, MPFR_RNDN); }

PrecisionReal::PrecisionReal(const mpz_class& v, unsigned digits) : PrecisionReal(digits) {
  mpfr_set_z(value_, v.get_mpz_t(), MPFR_RNDN);
}

PrecisionReal::PrecisionReal(const std::string& text, unsigned digits) : PrecisionReal(digits) {
  char* end = nullptr;
  if (!text.empty()) mpfr_strtofr(value_, text.c_str(), &end, 10, MPFR_RNDN);
  if (text.empty() || end != text.c_str() + text.size())
    throw std::invalid_argument("not a decimal number: '" + text + "'");
}

PrecisionReal::PrecisionReal(const PrecisionReal& o) : digits_(o.digits_) {
  mpfr_init2(value_, mpfr_get_prec(o.value_));
  mpfr_set(value_, o.value_, MPFR_RNDN);
}

PrecisionReal::PrecisionReal(PrecisionReal&& o) noexcept : PrecisionReal(o.digits_) { mpfr_swap(value_, o.value_); }

PrecisionReal& PrecisionReal::operator=(const PrecisionReal& o) {
  if (this != &o) {
    digits_ = o.digits_;
    mpfr_set_prec(value_, mpfr_get_prec(o.value_));
    mpfr_set(value_, o.value_, MPFR_RNDN);
  }
  return *this;
}

PrecisionReal& PrecisionReal::operator=(PrecisionReal&& o) noexcept {
  std::swap(digits_, o.digits_);
  mpfr_swap(value_, o.value_);
  return *this;
}

PrecisionReal::~PrecisionReal() { mpfr_clear(value_); }

PrecisionReal PrecisionReal::with_digits(unsigned digits) const {
  PrecisionReal r(digits);
  mpfr_set(r.value_, value_, MPFR_RNDN);
  return r;
}

namespace {

template <class Op>
PrecisionReal binary(const PrecisionReal& x, const PrecisionReal& y, Op op) {
  PrecisionReal r(std::max(x.digits(), y.digits()));
  op(r.get(), x.get(), y.get(), MPFR_RNDN);
  return r;
}

template <class Op>
PrecisionReal unary(const PrecisionReal& x, Op op) {
  PrecisionReal r(x.digits());
  op(r.get(), x.get(), MPFR_RNDN);
  return r;
}

}  // namespace

PrecisionReal PrecisionReal::operator-() const { return unary(*this, mpfr_neg); }
PrecisionReal operator+(const PrecisionReal& x, const PrecisionReal& y) { return binary(x, y, mpfr_add); }
PrecisionReal operator-(const PrecisionReal& x, const PrecisionReal& y) { return binary(x, y, mpfr_sub); }
PrecisionReal operator*(const PrecisionReal& x, const PrecisionReal& y) { return binary(x, y, mpfr_mul); }
PrecisionReal operator/(const PrecisionReal& x, const PrecisionReal& y) { return binary(x, y, mpfr_div); }
PrecisionReal pow(const PrecisionReal& x, const PrecisionReal& y) { return binary(x, y, mpfr_pow); }

std::partial_ordering operator<=>(const PrecisionReal& x, const PrecisionReal& y) {
  if (mpfr_unordered_p(x.value_, y.value_)) return std::partial_ordering::unordered;
  int c = mpfr_cmp(x.value_, y.value_);
  return c < 0 ? std::partial_ordering::less : (c > 0 ? std::partial_ordering::greater : std::partial_ordering::equivalent);
}

bool operator==(const PrecisionReal& x, const PrecisionReal& y) { return mpfr_equal_p(x.value_, y.value_) != 0; }

PrecisionReal log(const PrecisionReal& x) { return unary(x, mpfr_log); }
PrecisionReal log1p(const PrecisionReal& x) { return unary(x, mpfr_log1p); }
PrecisionReal exp(const PrecisionReal& x) { return unary(x, mpfr_exp); }
PrecisionReal expm1(const PrecisionReal& x) { return unary(x, mpfr_expm1); }
PrecisionReal abs(const PrecisionReal& x) { return unary(x, mpfr_abs); }

PrecisionReal lngamma(const PrecisionReal& x) {
  if (x.sign() <= 0) throw std::domain_error("lngamma: argument must be positive");
  return unary(x, mpfr_lngamma);
}

int PrecisionReal::sign() const { return mpfr_sgn(value_); }

double PrecisionReal::to_double() const { return mpfr_get_d(value_, MPFR_RNDN); }

std::string PrecisionReal::to_string(unsigned significant) const {
  significant = std::max(1u, significant);
  int n = mpfr_snprintf(nullptr, 0, "%.*Re", static_cast<int>(significant - 1), value_);
  std::string out(static_cast<std::size_t>(n) + 1, '\0');
  mpfr_snprintf(out.data(), out.size(), "%.*Re", static_cast<int>(significant - 1), value_);
  out.resize(static_cast<std::size_t>(n));
  return out;
}

mpz_class PrecisionReal::round() const {
  mpz_class z;
  PrecisionReal r(digits_);
  mpfr_round(r.value_, value_);
  mpfr_get_z(z.get_mpz_t(), r.value_, MPFR_RNDN);
  return z;
}

}  // namespace ks
