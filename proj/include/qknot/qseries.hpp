#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "qknot/core.hpp"

namespace qknot {

// Element of Z[q^{±1/2}]. Terms are kept sorted by exponent; exponents are
// stored doubled so q^{1/2} has key 1.
class LaurentPoly {
 public:
  using Term = std::pair<std::int64_t, BigInt>;  // (2*exponent, coefficient)

  LaurentPoly() = default;
  LaurentPoly(std::int64_t constant);  // NOLINT(implicit)
  static LaurentPoly monomial(const BigInt& coeff, std::int64_t twice_exp);
  static LaurentPoly q_power(std::int64_t exp) { return monomial(1, 2 * exp); }
  // Build from unsorted terms; merges duplicates, drops zeros.
  static LaurentPoly from_terms(std::vector<Term> terms);

  const std::vector<Term>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  bool is_integral() const;  // all exponents are integers
  std::size_t size() const { return terms_.size(); }

  // Doubled extreme exponents; the polynomial must be nonzero.
  std::int64_t min_twice_exp() const;
  std::int64_t max_twice_exp() const;
  Rational min_degree() const;
  Rational max_degree() const;
  BigInt coeff_twice(std::int64_t twice_exp) const;
  BigInt coeff(std::int64_t exp) const { return coeff_twice(2 * exp); }

  LaurentPoly operator-() const;
  LaurentPoly& operator+=(const LaurentPoly& o);
  LaurentPoly& operator-=(const LaurentPoly& o);
  LaurentPoly& operator*=(const LaurentPoly& o);
  LaurentPoly& operator*=(const BigInt& s);
  friend LaurentPoly operator+(LaurentPoly a, const LaurentPoly& b) { return a += b; }
  friend LaurentPoly operator-(LaurentPoly a, const LaurentPoly& b) { return a -= b; }
  friend LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b);
  friend LaurentPoly operator*(LaurentPoly a, const BigInt& s) { return a *= s; }
  friend bool operator==(const LaurentPoly& a, const LaurentPoly& b) { return a.terms_ == b.terms_; }

  LaurentPoly shifted_twice(std::int64_t twice_exp) const;  // times q^{twice_exp/2}
  LaurentPoly mirrored() const;                              // q -> 1/q
  LaurentPoly pow(unsigned e) const;
  // q -> q^k on the doubled exponents (k may be negative).
  LaurentPoly substitute_power(std::int64_t k) const;
  // q^{1/2} -> -q^{1/2}: multiplies each term by (-1)^{twice_exp}.
  LaurentPoly flip_half_sign() const;
  // Exact division; throws Internal "inexact division" when b does not divide.
  LaurentPoly exact_div(const LaurentPoly& b) const;
  // Division by a nonzero integer; throws if inexact.
  LaurentPoly exact_div(const BigInt& s) const;
  // Value at q = 1.
  BigInt at_one() const;
  // Value at q = -1, only for integral polynomials.
  BigInt at_minus_one() const;

  // Descending order, e.g. "q^{1/2}+q^{-1/2}", "-q^{-4}+q^{-3}+1".
  std::string to_string(const std::string& var = "q") const;
  static LaurentPoly parse(const std::string& text);

 private:
  std::vector<Term> terms_;
};

std::ostream& operator<<(std::ostream& os, const LaurentPoly& p);

// Truncated Laurent series in q^{1/D}: known coefficients of q^{k/D} for
// lo <= k < trunc; everything at or beyond q^{trunc/D} is unknown.
class TruncatedSeries {
 public:
  TruncatedSeries() = default;
  // Zero series modulo q^{trunc_num/den}.
  static TruncatedSeries zero(std::int64_t trunc_num, std::int64_t den = 1);
  static TruncatedSeries one(std::int64_t trunc_num, std::int64_t den = 1);
  static TruncatedSeries zero_at(const Rational& trunc);
  // Coefficients start at q^{lo/den}.
  static TruncatedSeries from_coeffs(std::int64_t lo, std::vector<BigInt> coeffs, std::int64_t trunc_num,
                                     std::int64_t den = 1);
  static TruncatedSeries from_poly(const LaurentPoly& p, const Rational& trunc);

  std::int64_t den() const { return den_; }
  std::int64_t lo_num() const { return lo_; }
  std::int64_t trunc_num() const { return trunc_; }
  Rational min_degree() const;  // lowest stored exponent; a valuation only once normalized
  Rational trunc_order() const { return Rational(big(trunc_), big(den_)); }
  // Valuation in units 1/den (trunc_num if the series is zero to its precision).
  std::int64_t valuation_num() const;
  Rational valuation() const { return Rational(big(valuation_num()), big(den_)); }
  bool is_zero() const { return valuation_num() >= trunc_; }

  // Coefficient of q^{k/den}; throws if k >= trunc (unknown).
  BigInt coeff_num(std::int64_t k) const;
  BigInt coeff(const Rational& e) const;
  BigInt coeff(std::int64_t e) const { return coeff(Rational(big(e))); }
  const std::vector<BigInt>& raw() const { return c_; }

  TruncatedSeries operator-() const;
  friend TruncatedSeries operator+(const TruncatedSeries& a, const TruncatedSeries& b);
  friend TruncatedSeries operator-(const TruncatedSeries& a, const TruncatedSeries& b);
  friend TruncatedSeries operator*(const TruncatedSeries& a, const TruncatedSeries& b);
  friend TruncatedSeries operator*(const TruncatedSeries& a, const BigInt& s);
  TruncatedSeries& operator+=(const TruncatedSeries& b) { return *this = *this + b; }
  TruncatedSeries& operator-=(const TruncatedSeries& b) { return *this = *this - b; }
  TruncatedSeries& operator*=(const TruncatedSeries& b) { return *this = *this * b; }

  // Multiplicative inverse; the lowest nonzero coefficient must be ±1,
  // otherwise throws InvalidInput "non-unit divisor".
  TruncatedSeries inverse() const;
  friend TruncatedSeries operator/(const TruncatedSeries& a, const TruncatedSeries& b) {
    return a * b.inverse();
  }
  TruncatedSeries pow(unsigned e) const;
  // Integer power, negative allowed for units.
  TruncatedSeries ipow(int e) const;

  TruncatedSeries shifted(const Rational& e) const;  // times q^e
  TruncatedSeries truncated(const Rational& t) const;  // lower the truncation order to min(t, current)
  TruncatedSeries with_den(std::int64_t den) const;     // re-express on q^{1/den}, den a multiple of den()
  TruncatedSeries substitute_power(std::int64_t k) const;  // q -> q^k, k >= 1
  // Drops stored leading zeros and reduces den when possible.
  TruncatedSeries normalized() const;

  // Serialization: header "mindeg=<r> trunc=<r>" then "degree coefficient" lines
  // for nonzero coefficients.
  std::string serialize() const;
  static TruncatedSeries deserialize(const std::string& text);

 private:
  std::int64_t den_ = 1;
  std::int64_t lo_ = 0;
  std::int64_t trunc_ = 0;
  std::vector<BigInt> c_;  // c_[i] is the coefficient of q^{(lo_+i)/den_}; size trunc_-lo_
};

// Outcome of comparing two truncated series: equality is only decidable
// below the smaller truncation order.
struct SeriesComparison {
  bool equal;              // equal below `checked_to`
  Rational checked_to;     // min of both truncation orders
  Rational first_mismatch;  // meaningful when !equal
};
SeriesComparison compare(const TruncatedSeries& a, const TruncatedSeries& b);

// F(x,q) = sum_k x^k F_k(q), known for k < x_order.
struct BivariateSeries {
  std::vector<TruncatedSeries> coeffs;
  std::size_t x_order() const { return coeffs.size(); }
  const TruncatedSeries& operator[](std::size_t k) const { return coeffs.at(k); }
};
BivariateSeries operator*(const BivariateSeries& a, const BivariateSeries& b);

// (q)_n = prod_{k=1}^n (1 - q^k) modulo q^trunc.
TruncatedSeries pochhammer(std::int64_t n, const Rational& trunc);
// (q)_n as an exact polynomial.
LaurentPoly pochhammer_poly(std::int64_t n);
// (q)_infinity modulo q^trunc.
TruncatedSeries q_infty(const Rational& trunc);
// (x q^shift)_infinity expanded to x^{trunc_x - 1}, each coefficient mod q^trunc_q.
BivariateSeries pochhammer_x(std::int64_t shift, std::size_t trunc_x, const Rational& trunc_q);
// Unary theta / false theta series h_b.
TruncatedSeries h_series(std::int64_t b, const Rational& trunc);
// Summation window used by h_series: smallest W with the exponent above trunc for |n| > W.
std::int64_t h_series_window(std::int64_t b, const Rational& trunc);
// Same sum over the explicit window [-w, w]; used to test window sufficiency.
TruncatedSeries h_series_window_sum(std::int64_t b, const Rational& trunc, std::int64_t w);

}  // namespace qknot
