#include "qknot/qseries.hpp"

#include <algorithm>
#include <numeric>
#include <ostream>
#include <sstream>

namespace qknot {

// ---------------------------------------------------------------- LaurentPoly

LaurentPoly::LaurentPoly(std::int64_t constant) {
  if (constant != 0) terms_.emplace_back(0, big(constant));
}

LaurentPoly LaurentPoly::monomial(const BigInt& coeff, std::int64_t twice_exp) {
  LaurentPoly p;
  if (coeff != 0) p.terms_.emplace_back(twice_exp, coeff);
  return p;
}

LaurentPoly LaurentPoly::from_terms(std::vector<Term> terms) {
  std::sort(terms.begin(), terms.end(), [](const Term& a, const Term& b) { return a.first < b.first; });
  LaurentPoly p;
  for (auto& t : terms) {
    if (!p.terms_.empty() && p.terms_.back().first == t.first) {
      p.terms_.back().second += t.second;
      if (p.terms_.back().second == 0) p.terms_.pop_back();
    } else if (t.second != 0) {
      p.terms_.push_back(std::move(t));
    }
  }
  return p;
}

bool LaurentPoly::is_integral() const {
  return std::all_of(terms_.begin(), terms_.end(), [](const Term& t) { return t.first % 2 == 0; });
}

std::int64_t LaurentPoly::min_twice_exp() const {
  if (terms_.empty()) fail(ErrorKind::InvalidInput, "degree of zero polynomial");
  return terms_.front().first;
}

std::int64_t LaurentPoly::max_twice_exp() const {
  if (terms_.empty()) fail(ErrorKind::InvalidInput, "degree of zero polynomial");
  return terms_.back().first;
}

Rational LaurentPoly::min_degree() const { return make_rational(min_twice_exp(), 2); }
Rational LaurentPoly::max_degree() const { return make_rational(max_twice_exp(), 2); }

BigInt LaurentPoly::coeff_twice(std::int64_t twice_exp) const {
  auto it = std::lower_bound(terms_.begin(), terms_.end(), twice_exp,
                             [](const Term& t, std::int64_t e) { return t.first < e; });
  if (it != terms_.end() && it->first == twice_exp) return it->second;
  return 0;
}

LaurentPoly LaurentPoly::operator-() const {
  LaurentPoly r = *this;
  for (auto& t : r.terms_) t.second = -t.second;
  return r;
}

namespace {

std::vector<LaurentPoly::Term> merge_terms(const std::vector<LaurentPoly::Term>& a,
                                           const std::vector<LaurentPoly::Term>& b, int sign) {
  std::vector<LaurentPoly::Term> out;
  out.reserve(a.size() + b.size());
  std::size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    if (j == b.size() || (i < a.size() && a[i].first < b[j].first)) {
      out.push_back(a[i++]);
    } else if (i == a.size() || b[j].first < a[i].first) {
      out.emplace_back(b[j].first, sign > 0 ? b[j].second : BigInt(-b[j].second));
      ++j;
    } else {
      BigInt s = sign > 0 ? BigInt(a[i].second + b[j].second) : BigInt(a[i].second - b[j].second);
      if (s != 0) out.emplace_back(a[i].first, std::move(s));
      ++i;
      ++j;
    }
  }
  return out;
}

}  // namespace

LaurentPoly& LaurentPoly::operator+=(const LaurentPoly& o) {
  terms_ = merge_terms(terms_, o.terms_, 1);
  return *this;
}

LaurentPoly& LaurentPoly::operator-=(const LaurentPoly& o) {
  terms_ = merge_terms(terms_, o.terms_, -1);
  return *this;
}

LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b) {
  if (a.is_zero() || b.is_zero()) return {};
  std::int64_t lo = a.min_twice_exp() + b.min_twice_exp();
  std::int64_t hi = a.max_twice_exp() + b.max_twice_exp();
  std::size_t span = static_cast<std::size_t>(hi - lo + 1);
  LaurentPoly r;
  if (span > 8 * a.size() * b.size() + 64) {
    std::vector<LaurentPoly::Term> raw;
    raw.reserve(a.size() * b.size());
    for (const auto& x : a.terms_)
      for (const auto& y : b.terms_) raw.emplace_back(x.first + y.first, x.second * y.second);
    return LaurentPoly::from_terms(std::move(raw));
  }
  std::vector<BigInt> buf(span);
  for (const auto& x : a.terms_)
    for (const auto& y : b.terms_)
      mpz_addmul(buf[x.first + y.first - lo].get_mpz_t(), x.second.get_mpz_t(), y.second.get_mpz_t());
  for (std::size_t k = 0; k < span; ++k)
    if (buf[k] != 0) r.terms_.emplace_back(lo + static_cast<std::int64_t>(k), std::move(buf[k]));
  return r;
}

LaurentPoly& LaurentPoly::operator*=(const LaurentPoly& o) { return *this = *this * o; }

LaurentPoly& LaurentPoly::operator*=(const BigInt& s) {
  if (s == 0) {
    terms_.clear();
    return *this;
  }
  for (auto& t : terms_) t.second *= s;
  return *this;
}

LaurentPoly LaurentPoly::shifted_twice(std::int64_t twice_exp) const {
  LaurentPoly r = *this;
  for (auto& t : r.terms_) t.first += twice_exp;
  return r;
}

LaurentPoly LaurentPoly::mirrored() const { return substitute_power(-1); }

LaurentPoly LaurentPoly::substitute_power(std::int64_t k) const {
  if (k == 0) fail(ErrorKind::InvalidInput, "substitution q -> q^0");
  std::vector<Term> t;
  t.reserve(terms_.size());
  for (const auto& x : terms_) t.emplace_back(x.first * k, x.second);
  if (k < 0) std::reverse(t.begin(), t.end());
  LaurentPoly r;
  r.terms_ = std::move(t);
  return r;
}

LaurentPoly LaurentPoly::flip_half_sign() const {
  LaurentPoly r = *this;
  for (auto& t : r.terms_)
    if (t.first % 2 != 0) t.second = -t.second;
  return r;
}

LaurentPoly LaurentPoly::pow(unsigned e) const {
  LaurentPoly r(1), base = *this;
  while (e) {
    if (e & 1) r *= base;
    e >>= 1;
    if (e) base *= base;
  }
  return r;
}

LaurentPoly LaurentPoly::exact_div(const BigInt& s) const {
  if (s == 0) fail(ErrorKind::Internal, "inexact division: division by zero");
  LaurentPoly r = *this;
  for (auto& t : r.terms_) {
    if (!mpz_divisible_p(t.second.get_mpz_t(), s.get_mpz_t())) fail(ErrorKind::Internal, "inexact division");
    mpz_divexact(t.second.get_mpz_t(), t.second.get_mpz_t(), s.get_mpz_t());
  }
  return r;
}

LaurentPoly LaurentPoly::exact_div(const LaurentPoly& b) const {
  if (b.is_zero()) fail(ErrorKind::Internal, "inexact division: division by zero polynomial");
  if (is_zero()) return {};
  if (b.size() == 1) {
    LaurentPoly r = exact_div(b.terms_[0].second);
    return r.shifted_twice(-b.terms_[0].first);
  }
  // Dense long division from the top, on the doubled exponent lattice.
  const std::int64_t blo = b.min_twice_exp(), bhi = b.max_twice_exp();
  const std::int64_t alo = min_twice_exp(), ahi = max_twice_exp();
  const std::int64_t qlo = alo - blo, qhi = ahi - bhi;
  if (qhi < qlo) fail(ErrorKind::Internal, "inexact division");
  std::vector<BigInt> rem(static_cast<std::size_t>(ahi - alo + 1));
  for (const auto& t : terms_) rem[t.first - alo] = t.second;
  std::vector<BigInt> bd(static_cast<std::size_t>(bhi - blo + 1));
  for (const auto& t : b.terms_) bd[t.first - blo] = t.second;
  const BigInt& lead = bd.back();
  std::vector<Term> quot;
  BigInt qc;
  for (std::int64_t e = qhi; e >= qlo; --e) {
    BigInt& top = rem[e + bhi - alo];
    if (top == 0) continue;
    if (!mpz_divisible_p(top.get_mpz_t(), lead.get_mpz_t())) fail(ErrorKind::Internal, "inexact division");
    mpz_divexact(qc.get_mpz_t(), top.get_mpz_t(), lead.get_mpz_t());
    for (std::size_t k = 0; k < bd.size(); ++k) {
      if (bd[k] == 0) continue;
      mpz_submul(rem[e + blo + static_cast<std::int64_t>(k) - alo].get_mpz_t(), qc.get_mpz_t(), bd[k].get_mpz_t());
    }
    quot.emplace_back(e, qc);
  }
  for (const auto& r : rem)
    if (r != 0) fail(ErrorKind::Internal, "inexact division");
  std::reverse(quot.begin(), quot.end());
  LaurentPoly r;
  r.terms_ = std::move(quot);
  return r;
}

BigInt LaurentPoly::at_one() const {
  BigInt s = 0;
  for (const auto& t : terms_) s += t.second;
  return s;
}

BigInt LaurentPoly::at_minus_one() const {
  if (!is_integral()) fail(ErrorKind::InvalidInput, "evaluation at q=-1 of a polynomial in q^{1/2}");
  BigInt s = 0;
  for (const auto& t : terms_) {
    if ((t.first / 2) % 2 == 0)
      s += t.second;
    else
      s -= t.second;
  }
  return s;
}

namespace {

std::string exponent_text(std::int64_t twice_exp) {
  if (twice_exp % 2 == 0) return std::to_string(twice_exp / 2);
  return std::to_string(twice_exp) + "/2";
}

}  // namespace

std::string LaurentPoly::to_string(const std::string& var) const {
  if (terms_.empty()) return "0";
  std::string out;
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
    const auto& [e, c] = *it;
    bool neg = c < 0;
    BigInt mag = neg ? BigInt(-c) : c;
    if (!out.empty() || neg) out += neg ? "-" : "+";
    if (e == 0) {
      out += mag.get_str();
      continue;
    }
    if (mag != 1) out += mag.get_str();
    out += var;
    if (e != 2) {
      std::string ex = exponent_text(e);
      out += ex.size() == 1 ? "^" + ex : "^{" + ex + "}";
    }
  }
  return out;
}

std::ostream& operator<<(std::ostream& os, const LaurentPoly& p) { return os << p.to_string(); }

LaurentPoly LaurentPoly::parse(const std::string& text) {
  std::string s;
  for (char ch : text)
    if (!std::isspace(static_cast<unsigned char>(ch))) s += ch;
  if (s.empty()) fail(ErrorKind::InvalidInput, "empty polynomial");
  if (s == "0") return {};
  std::vector<Term> terms;
  std::size_t i = 0;
  auto bad = [&]() { fail(ErrorKind::InvalidInput, "cannot parse polynomial: '" + text + "'"); };
  while (i < s.size()) {
    int sign = 1;
    if (s[i] == '+' || s[i] == '-') {
      sign = s[i] == '-' ? -1 : 1;
      ++i;
    } else if (!terms.empty()) {
      bad();
    }
    std::size_t j = i;
    while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
    BigInt c = 1;
    bool have_num = j > i;
    if (have_num) c = BigInt(s.substr(i, j - i));
    i = j;
    std::int64_t e2 = 0;
    if (i < s.size() && s[i] == '*') ++i;
    if (i < s.size() && s[i] == 'q') {
      ++i;
      e2 = 2;
      if (i < s.size() && s[i] == '^') {
        ++i;
        std::string ex;
        if (i < s.size() && s[i] == '{') {
          auto close = s.find('}', i);
          if (close == std::string::npos) bad();
          ex = s.substr(i + 1, close - i - 1);
          i = close + 1;
        } else {
          std::size_t k = i;
          if (k < s.size() && s[k] == '-') ++k;
          while (k < s.size() && std::isdigit(static_cast<unsigned char>(s[k]))) ++k;
          ex = s.substr(i, k - i);
          i = k;
        }
        Rational r = parse_rational(ex);
        Rational d = r * 2;
        if (d.get_den() != 1) bad();
        e2 = d.get_num().get_si();
      }
    } else if (!have_num) {
      bad();
    }
    terms.emplace_back(e2, sign > 0 ? c : BigInt(-c));
  }
  return from_terms(std::move(terms));
}

// ------------------------------------------------------------ TruncatedSeries

namespace {

std::int64_t lcm64(std::int64_t a, std::int64_t b) { return std::lcm(a, b); }

std::int64_t to_units(const Rational& r, std::int64_t den) {
  Rational s = r * big(den);
  if (s.get_den() != 1) fail(ErrorKind::InvalidInput, "exponent not on the series lattice");
  return s.get_num().get_si();
}

// floor(r * den)

std::int64_t ceil_units(const Rational& r, std::int64_t den) {
  Rational s = r * big(den);
  BigInt f;
  mpz_cdiv_q(f.get_mpz_t(), s.get_num_mpz_t(), s.get_den_mpz_t());
  return f.get_si();
}

}  // namespace

TruncatedSeries TruncatedSeries::zero(std::int64_t trunc_num, std::int64_t den) {
  TruncatedSeries s;
  s.den_ = den;
  s.lo_ = trunc_num;
  s.trunc_ = trunc_num;
  return s;
}

TruncatedSeries TruncatedSeries::one(std::int64_t trunc_num, std::int64_t den) {
  if (trunc_num <= 0) return zero(trunc_num, den);
  TruncatedSeries s;
  s.den_ = den;
  s.lo_ = 0;
  s.trunc_ = trunc_num;
  s.c_.assign(static_cast<std::size_t>(trunc_num), BigInt(0));
  s.c_[0] = 1;
  return s;
}

TruncatedSeries TruncatedSeries::zero_at(const Rational& trunc) {
  std::int64_t den = trunc.get_den().get_si();
  return zero(trunc.get_num().get_si(), den);
}

TruncatedSeries TruncatedSeries::from_coeffs(std::int64_t lo, std::vector<BigInt> coeffs, std::int64_t trunc_num,
                                             std::int64_t den) {
  if (den < 1) fail(ErrorKind::InvalidInput, "series denominator must be positive");
  TruncatedSeries s;
  s.den_ = den;
  if (lo >= trunc_num) return zero(trunc_num, den);
  s.lo_ = lo;
  s.trunc_ = trunc_num;
  coeffs.resize(static_cast<std::size_t>(trunc_num - lo));
  s.c_ = std::move(coeffs);
  return s;
}

TruncatedSeries TruncatedSeries::from_poly(const LaurentPoly& p, const Rational& trunc) {
  std::int64_t den = lcm64(p.is_integral() ? 1 : 2, trunc.get_den().get_si());
  std::int64_t t = to_units(trunc, den);
  if (p.is_zero()) return zero(t, den);
  std::int64_t lo = std::min<std::int64_t>(p.min_twice_exp() * den / 2, t);
  TruncatedSeries s = zero(t, den);
  s.lo_ = lo;
  s.c_.assign(static_cast<std::size_t>(t - lo), BigInt(0));
  for (const auto& [e2, c] : p.terms()) {
    std::int64_t k = e2 * den / 2;
    if (k < t) s.c_[k - lo] = c;
  }
  return s;
}

Rational TruncatedSeries::min_degree() const { return Rational(big(lo_), big(den_)); }

std::int64_t TruncatedSeries::valuation_num() const {
  for (std::size_t i = 0; i < c_.size(); ++i)
    if (c_[i] != 0) return lo_ + static_cast<std::int64_t>(i);
  return trunc_;
}

BigInt TruncatedSeries::coeff_num(std::int64_t k) const {
  if (k >= trunc_) fail(ErrorKind::InvalidInput, "coefficient beyond truncation order");
  if (k < lo_) return 0;
  return c_[k - lo_];
}

BigInt TruncatedSeries::coeff(const Rational& e) const {
  Rational s = e * big(den_);
  if (s.get_den() != 1) {
    if (e >= trunc_order()) fail(ErrorKind::InvalidInput, "coefficient beyond truncation order");
    return 0;
  }
  return coeff_num(s.get_num().get_si());
}

TruncatedSeries TruncatedSeries::with_den(std::int64_t den) const {
  if (den == den_) return *this;
  if (den % den_ != 0) fail(ErrorKind::Internal, "incompatible series denominators");
  std::int64_t f = den / den_;
  TruncatedSeries s;
  s.den_ = den;
  s.lo_ = lo_ * f;
  s.trunc_ = trunc_ * f;
  s.c_.assign(static_cast<std::size_t>(s.trunc_ - s.lo_), BigInt(0));
  for (std::size_t i = 0; i < c_.size(); ++i) s.c_[i * f] = c_[i];
  return s;
}

TruncatedSeries TruncatedSeries::normalized() const {
  // Coarsen to the smallest lattice that carries every nonzero coefficient
  // and the truncation point.
  std::int64_t g = std::gcd(den_, trunc_);
  for (std::size_t i = 0; i < c_.size() && g > 1; ++i)
    if (c_[i] != 0) g = std::gcd(g, lo_ + static_cast<std::int64_t>(i));
  const std::int64_t v = valuation_num();
  TruncatedSeries s;
  s.den_ = den_ / g;
  s.lo_ = v / g;
  s.trunc_ = trunc_ / g;
  for (std::int64_t k = v; k < trunc_; k += g) s.c_.push_back(c_[k - lo_]);
  return s;
}

TruncatedSeries TruncatedSeries::operator-() const {
  TruncatedSeries r = *this;
  for (auto& x : r.c_) x = -x;
  return r;
}

namespace {

std::pair<TruncatedSeries, TruncatedSeries> common_den(const TruncatedSeries& a, const TruncatedSeries& b) {
  if (a.den() == b.den()) return {a, b};
  std::int64_t d = std::lcm(a.den(), b.den());
  return {a.with_den(d), b.with_den(d)};
}

TruncatedSeries add_sub(const TruncatedSeries& a0, const TruncatedSeries& b0, bool sub) {
  if (a0.den() != b0.den()) {
    auto [a, b] = common_den(a0, b0);
    return add_sub(a, b, sub);
  }
  const std::int64_t t = std::min(a0.trunc_num(), b0.trunc_num());
  const std::int64_t lo = std::min({a0.lo_num(), b0.lo_num(), t});
  std::vector<BigInt> c(static_cast<std::size_t>(t - lo));
  for (std::int64_t k = std::max(a0.lo_num(), lo); k < t; ++k) c[k - lo] = a0.raw()[k - a0.lo_num()];
  for (std::int64_t k = std::max(b0.lo_num(), lo); k < t; ++k) {
    if (sub)
      c[k - lo] -= b0.raw()[k - b0.lo_num()];
    else
      c[k - lo] += b0.raw()[k - b0.lo_num()];
  }
  return TruncatedSeries::from_coeffs(lo, std::move(c), t, a0.den());
}

}  // namespace

TruncatedSeries operator+(const TruncatedSeries& a, const TruncatedSeries& b) { return add_sub(a, b, false); }
TruncatedSeries operator-(const TruncatedSeries& a, const TruncatedSeries& b) { return add_sub(a, b, true); }

TruncatedSeries operator*(const TruncatedSeries& a0, const TruncatedSeries& b0) {
  if (a0.den() != b0.den()) {
    auto [a, b] = common_den(a0, b0);
    return a * b;
  }
  const std::int64_t den = a0.den();
  const std::int64_t va = a0.valuation_num(), vb = b0.valuation_num();
  // Known modulo q^{min(Ta + vb, Tb + va)}.
  const std::int64_t t = std::min(a0.trunc_num() + vb, b0.trunc_num() + va);
  const std::int64_t lo = std::min(va + vb, t);
  std::vector<BigInt> c(static_cast<std::size_t>(t - lo));
  for (std::int64_t i = va; i < a0.trunc_num() && i + vb < t; ++i) {
    const BigInt& x = a0.raw()[i - a0.lo_num()];
    if (x == 0) continue;
    for (std::int64_t j = vb; i + j < t; ++j) {
      const BigInt& y = b0.raw()[j - b0.lo_num()];
      if (y != 0) mpz_addmul(c[i + j - lo].get_mpz_t(), x.get_mpz_t(), y.get_mpz_t());
    }
  }
  return TruncatedSeries::from_coeffs(lo, std::move(c), t, den);
}

TruncatedSeries operator*(const TruncatedSeries& a, const BigInt& s) {
  TruncatedSeries r = a;
  for (auto& x : r.c_) x *= s;
  return r;
}

TruncatedSeries TruncatedSeries::inverse() const {
  const std::int64_t v = valuation_num();
  if (v >= trunc_) fail(ErrorKind::InvalidInput, "non-unit divisor");
  const BigInt& u = c_[v - lo_];
  if (u != 1 && u != -1) fail(ErrorKind::InvalidInput, "non-unit divisor");
  // s = q^v (u + r); inverse = q^{-v} u (1 - u r + ...), valid to T - 2v.
  const std::int64_t n = trunc_ - v;  // number of known coefficients from v
  std::vector<BigInt> inv(static_cast<std::size_t>(n));
  inv[0] = u;
  BigInt acc;
  for (std::int64_t k = 1; k < n; ++k) {
    acc = 0;
    for (std::int64_t j = 1; j <= k; ++j) {
      const BigInt& x = c_[v + j - lo_];
      if (x != 0) mpz_addmul(acc.get_mpz_t(), x.get_mpz_t(), inv[k - j].get_mpz_t());
    }
    inv[k] = u == 1 ? BigInt(-acc) : acc;
  }
  return from_coeffs(-v, std::move(inv), trunc_ - 2 * v, den_);
}

TruncatedSeries TruncatedSeries::pow(unsigned e) const {
  if (e == 0) return one(trunc_ - valuation_num(), den_);
  TruncatedSeries r = *this;
  for (unsigned k = 1; k < e; ++k) r = r * *this;
  return r;
}

TruncatedSeries TruncatedSeries::ipow(int e) const {
  if (e >= 0) return pow(static_cast<unsigned>(e));
  return inverse().pow(static_cast<unsigned>(-e));
}

TruncatedSeries TruncatedSeries::shifted(const Rational& e) const {
  std::int64_t den = lcm64(den_, e.get_den().get_si());
  TruncatedSeries s = with_den(den);
  std::int64_t k = to_units(e, den);
  s.lo_ += k;
  s.trunc_ += k;
  return s;
}

TruncatedSeries TruncatedSeries::truncated(const Rational& t) const {
  std::int64_t den = lcm64(den_, t.get_den().get_si());
  TruncatedSeries s = with_den(den);
  std::int64_t tn = to_units(t, den);
  if (tn >= s.trunc_) return *this;
  if (tn <= s.lo_) return zero(tn, den);
  s.c_.resize(static_cast<std::size_t>(tn - s.lo_));
  s.trunc_ = tn;
  return s;
}

TruncatedSeries TruncatedSeries::substitute_power(std::int64_t k) const {
  if (k < 1) fail(ErrorKind::InvalidInput, "substitution q -> q^k needs k >= 1");
  TruncatedSeries s;
  s.den_ = den_;
  s.lo_ = lo_ * k;
  s.trunc_ = trunc_ * k;
  s.c_.assign(static_cast<std::size_t>(s.trunc_ - s.lo_), BigInt(0));
  for (std::size_t i = 0; i < c_.size(); ++i) s.c_[i * k] = c_[i];
  return s;
}

std::string TruncatedSeries::serialize() const {
  std::ostringstream os;
  os << "mindeg=" << to_string(valuation()) << " trunc=" << to_string(trunc_order()) << "\n";
  for (std::size_t i = 0; i < c_.size(); ++i) {
    if (c_[i] == 0) continue;
    os << to_string(Rational(big(lo_ + static_cast<std::int64_t>(i)), big(den_))) << " " << c_[i].get_str() << "\n";
  }
  return os.str();
}

TruncatedSeries TruncatedSeries::deserialize(const std::string& text) {
  std::istringstream is(text);
  std::string line;
  Rational mindeg, trunc;
  bool header = false;
  std::vector<std::pair<Rational, BigInt>> entries;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (!header) {
      auto m = line.find("mindeg=");
      auto t = line.find("trunc=");
      if (m == std::string::npos || t == std::string::npos)
        fail(ErrorKind::InvalidInput, "series header must read 'mindeg=<r> trunc=<r>'");
      mindeg = parse_rational(line.substr(m + 7, line.find(' ', m) - m - 7));
      trunc = parse_rational(line.substr(t + 6));
      header = true;
      continue;
    }
    std::istringstream ls(line);
    std::string d, c;
    if (!(ls >> d >> c)) fail(ErrorKind::InvalidInput, "bad series line: '" + line + "'");
    entries.emplace_back(parse_rational(d), parse_bigint(c));
  }
  if (!header) fail(ErrorKind::InvalidInput, "missing series header");
  std::int64_t den = lcm64(mindeg.get_den().get_si(), trunc.get_den().get_si());
  for (const auto& e : entries) den = lcm64(den, e.first.get_den().get_si());
  std::int64_t lo = std::min(to_units(mindeg, den), to_units(trunc, den));
  std::int64_t t = to_units(trunc, den);
  std::vector<BigInt> c(static_cast<std::size_t>(t - lo));
  for (const auto& [d, v] : entries) {
    std::int64_t k = to_units(d, den);
    if (k < lo || k >= t) fail(ErrorKind::InvalidInput, "series entry outside [mindeg, trunc)");
    c[k - lo] = v;
  }
  return from_coeffs(lo, std::move(c), t, den);
}

SeriesComparison compare(const TruncatedSeries& a0, const TruncatedSeries& b0) {
  TruncatedSeries d = a0 - b0;
  SeriesComparison r;
  r.checked_to = d.trunc_order();
  r.equal = d.is_zero();
  r.first_mismatch = r.equal ? r.checked_to : d.valuation();
  return r;
}

BivariateSeries operator*(const BivariateSeries& a, const BivariateSeries& b) {
  BivariateSeries r;
  std::size_t n = std::min(a.x_order(), b.x_order());
  for (std::size_t k = 0; k < n; ++k) {
    TruncatedSeries acc = a[0] * b[k];
    for (std::size_t i = 1; i <= k; ++i) acc = acc + a[i] * b[k - i];
    r.coeffs.push_back(std::move(acc));
  }
  return r;
}

// ------------------------------------------------------------ q-Pochhammer etc

namespace {

// In-place multiplication of a dense coefficient vector (index = exponent,
// length = truncation) by (1 - q^k).
void mul_one_minus(std::vector<BigInt>& c, std::size_t k) {
  for (std::size_t i = c.size(); i-- > k;) c[i] -= c[i - k];
}

}  // namespace

TruncatedSeries pochhammer(std::int64_t n, const Rational& trunc) {
  if (n < 0) fail(ErrorKind::InvalidInput, "pochhammer needs n >= 0");
  std::int64_t t = ceil_units(trunc, 1);
  if (t <= 0) return TruncatedSeries::zero_at(trunc);
  std::vector<BigInt> c(static_cast<std::size_t>(t));
  c[0] = 1;
  for (std::int64_t k = 1; k <= n && k < t; ++k) mul_one_minus(c, static_cast<std::size_t>(k));
  TruncatedSeries s = TruncatedSeries::from_coeffs(0, std::move(c), t, 1);
  return s.truncated(trunc);
}

LaurentPoly pochhammer_poly(std::int64_t n) {
  if (n < 0) fail(ErrorKind::InvalidInput, "pochhammer needs n >= 0");
  std::size_t deg = static_cast<std::size_t>(n * (n + 1) / 2);
  std::vector<BigInt> c(deg + 1);
  c[0] = 1;
  for (std::int64_t k = 1; k <= n; ++k) mul_one_minus(c, static_cast<std::size_t>(k));
  std::vector<LaurentPoly::Term> terms;
  for (std::size_t i = 0; i <= deg; ++i)
    if (c[i] != 0) terms.emplace_back(2 * static_cast<std::int64_t>(i), c[i]);
  return LaurentPoly::from_terms(std::move(terms));
}

TruncatedSeries q_infty(const Rational& trunc) {
  // Factors 1 - q^k with k >= trunc are 1 modulo q^trunc.
  std::int64_t t = ceil_units(trunc, 1);
  return pochhammer(std::max<std::int64_t>(t, 0), trunc);
}

BivariateSeries pochhammer_x(std::int64_t shift, std::size_t trunc_x, const Rational& trunc_q) {
  // (x q^s)_inf = sum_k (-1)^k q^{k(k-1)/2 + s k} x^k / (q)_k.
  BivariateSeries r;
  std::int64_t t = ceil_units(trunc_q, 1);
  for (std::size_t kk = 0; kk < trunc_x; ++kk) {
    std::int64_t k = static_cast<std::int64_t>(kk);
    std::int64_t e = k * (k - 1) / 2 + shift * k;
    // 1/(q)_k is needed to order t - e.
    std::int64_t need = std::max<std::int64_t>(t - e, 0);
    TruncatedSeries inv = need > 0 ? pochhammer(k, Rational(big(need))).inverse() : TruncatedSeries::zero(0);
    TruncatedSeries term = inv.shifted(Rational(big(e)));
    if (k % 2) term = -term;
    r.coeffs.push_back(term.truncated(trunc_q));
  }
  return r;
}

std::int64_t h_series_window(std::int64_t b, const Rational& trunc) {
  // Exponent e(n) = (b/2) n (n+1) - n. Smallest W with e(n) >= trunc for all |n| > W.
  auto exceeds = [&](std::int64_t n) {
    Rational e = Rational(big(b * n * (n + 1)), 2) - big(n);
    return e >= trunc;
  };
  // e(n) is nondecreasing in |n| on each side, so the first exceeding pair settles it.
  std::int64_t w = 0;
  while (!(exceeds(w + 1) && exceeds(-(w + 1)))) ++w;
  return w;
}

TruncatedSeries h_series_window_sum(std::int64_t b, const Rational& trunc, std::int64_t w) {
  if (b < 1) fail(ErrorKind::InvalidInput, "h_b needs b >= 1");
  std::int64_t den = lcm64(2, trunc.get_den().get_si());
  std::int64_t t = to_units(trunc, den);
  std::int64_t lo = 0;
  for (std::int64_t n = -w; n <= w; ++n) {
    std::int64_t e = (b * n * (n + 1) - 2 * n) * den / 2;
    lo = std::min(lo, e);
  }
  lo = std::min(lo, t);
  std::vector<BigInt> c(static_cast<std::size_t>(t - lo));
  for (std::int64_t n = -w; n <= w; ++n) {
    std::int64_t e = (b * n * (n + 1) - 2 * n) * den / 2;
    if (e >= t) continue;
    int sign;
    if (b % 2)
      sign = (n % 2 == 0) ? 1 : -1;
    else
      sign = n >= 0 ? 1 : -1;
    c[e - lo] += sign;
  }
  return TruncatedSeries::from_coeffs(lo, std::move(c), t, den).normalized();
}

TruncatedSeries h_series(std::int64_t b, const Rational& trunc) {
  if (b < 1) fail(ErrorKind::InvalidInput, "h_b needs b >= 1");
  return h_series_window_sum(b, trunc, h_series_window(b, trunc));
}

}  // namespace qknot
