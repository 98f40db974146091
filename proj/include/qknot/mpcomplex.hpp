#pragma once

#include <mpfr.h>

#include <string>

#include "qknot/core.hpp"

namespace qknot {

// RAII wrapper around an mpfr_t. Results of binary operations take the larger
// precision of the operands; rounding is to nearest.
class MPReal {
 public:
  explicit MPReal(int prec_bits = 64);
  MPReal(double v, int prec_bits);
  MPReal(const BigInt& v, int prec_bits);
  MPReal(const Rational& v, int prec_bits);
  static MPReal parse(const std::string& text, int prec_bits);
  static MPReal pi(int prec_bits);

  MPReal(const MPReal& o);
  MPReal(MPReal&& o) noexcept;
  MPReal& operator=(const MPReal& o);
  MPReal& operator=(MPReal&& o) noexcept;
  ~MPReal();

  int prec() const { return static_cast<int>(mpfr_get_prec(v_)); }
  MPReal with_prec(int prec_bits) const;
  mpfr_srcptr get() const { return v_; }
  mpfr_ptr get() { return v_; }

  double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }
  long exponent2() const;  // binary exponent; very negative for zero
  bool is_zero() const { return mpfr_zero_p(v_) != 0; }
  int sign() const { return mpfr_sgn(v_); }
  // Scientific notation with `digits` significant decimal digits.
  std::string to_string(int digits) const;

  MPReal operator-() const;
  MPReal& operator+=(const MPReal& o);
  MPReal& operator-=(const MPReal& o);
  MPReal& operator*=(const MPReal& o);
  MPReal& operator/=(const MPReal& o);
  friend MPReal operator+(MPReal a, const MPReal& b) { return a += b; }
  friend MPReal operator-(MPReal a, const MPReal& b) { return a -= b; }
  friend MPReal operator*(MPReal a, const MPReal& b) { return a *= b; }
  friend MPReal operator/(MPReal a, const MPReal& b) { return a /= b; }
  friend bool operator<(const MPReal& a, const MPReal& b) { return mpfr_less_p(a.v_, b.v_) != 0; }
  friend bool operator>(const MPReal& a, const MPReal& b) { return b < a; }

 private:
  mpfr_t v_;
};

MPReal abs(const MPReal& x);
MPReal sqrt(const MPReal& x);
MPReal exp(const MPReal& x);
MPReal log(const MPReal& x);
MPReal sin(const MPReal& x);
MPReal cos(const MPReal& x);
MPReal atan2(const MPReal& y, const MPReal& x);
MPReal pow(const MPReal& x, const MPReal& y);
MPReal mul_si(const MPReal& x, long k);
MPReal div_si(const MPReal& x, long k);
// log2 |x| as a double (-inf for zero).
double log2_abs(const MPReal& x);

class MPComplex {
 public:
  explicit MPComplex(int prec_bits = 64) : re_(prec_bits), im_(prec_bits) {}
  MPComplex(MPReal re, MPReal im) : re_(std::move(re)), im_(std::move(im)) {}
  MPComplex(double re, double im, int prec_bits) : re_(re, prec_bits), im_(im, prec_bits) {}
  // exp(2 pi i x)
  static MPComplex e(const Rational& x, int prec_bits);
  static MPComplex polar(const MPReal& r, const MPReal& theta);

  const MPReal& re() const { return re_; }
  const MPReal& im() const { return im_; }
  int prec() const { return re_.prec(); }
  MPComplex with_prec(int prec_bits) const { return {re_.with_prec(prec_bits), im_.with_prec(prec_bits)}; }
  bool is_zero() const { return re_.is_zero() && im_.is_zero(); }
  std::string to_string(int digits) const;

  MPComplex operator-() const { return {-re_, -im_}; }
  MPComplex& operator+=(const MPComplex& o);
  MPComplex& operator-=(const MPComplex& o);
  MPComplex& operator*=(const MPComplex& o);
  MPComplex& operator*=(const MPReal& o);
  MPComplex& operator/=(const MPComplex& o);
  friend MPComplex operator+(MPComplex a, const MPComplex& b) { return a += b; }
  friend MPComplex operator-(MPComplex a, const MPComplex& b) { return a -= b; }
  friend MPComplex operator*(MPComplex a, const MPComplex& b) { return a *= b; }
  friend MPComplex operator*(MPComplex a, const MPReal& b) { return a *= b; }
  friend MPComplex operator/(MPComplex a, const MPComplex& b) { return a /= b; }

 private:
  MPReal re_, im_;
};

MPReal abs(const MPComplex& z);
MPReal norm(const MPComplex& z);  // |z|^2
MPReal arg(const MPComplex& z);
MPComplex conj(const MPComplex& z);
MPComplex exp(const MPComplex& z);
MPComplex log(const MPComplex& z);  // principal branch
MPComplex sqrt(const MPComplex& z);  // principal branch
MPComplex pow(const MPComplex& z, const MPComplex& w);  // exp(w log z)
MPComplex pow(const MPComplex& z, long k);
MPComplex real_to_complex(const MPReal& x);
// Number of leading bits on which a and b agree, relative to |b|.
double agreement_bits(const MPComplex& a, const MPComplex& b);

}  // namespace qknot
