#include "qknot/mpcomplex.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace qknot {

namespace {

mpfr_prec_t larger(const MPReal& a, const MPReal& b) { return std::max(mpfr_get_prec(a.get()), mpfr_get_prec(b.get())); }

// Raises the precision of `x` to `p` keeping its value.
void widen(MPReal& x, mpfr_prec_t p) {
  if (mpfr_get_prec(x.get()) < p) mpfr_prec_round(x.get(), p, MPFR_RNDN);
}

}  // namespace

MPReal::MPReal(int prec_bits) {
  mpfr_init2(v_, prec_bits);
  mpfr_set_zero(v_, 1);
}
MPReal::MPReal(double v, int prec_bits) {
  mpfr_init2(v_, prec_bits);
  mpfr_set_d(v_, v, MPFR_RNDN);
}
MPReal::MPReal(const BigInt& v, int prec_bits) {
  mpfr_init2(v_, prec_bits);
  mpfr_set_z(v_, v.get_mpz_t(), MPFR_RNDN);
}
MPReal::MPReal(const Rational& v, int prec_bits) {
  mpfr_init2(v_, prec_bits);
  mpfr_set_q(v_, v.get_mpq_t(), MPFR_RNDN);
}
MPReal MPReal::parse(const std::string& text, int prec_bits) {
  MPReal r(prec_bits);
  if (mpfr_set_str(r.v_, text.c_str(), 10, MPFR_RNDN) != 0) fail(ErrorKind::InvalidInput, "bad number: " + text);
  return r;
}
MPReal MPReal::pi(int prec_bits) {
  MPReal r(prec_bits);
  mpfr_const_pi(r.v_, MPFR_RNDN);
  return r;
}

MPReal::MPReal(const MPReal& o) {
  mpfr_init2(v_, mpfr_get_prec(o.v_));
  mpfr_set(v_, o.v_, MPFR_RNDN);
}
MPReal::MPReal(MPReal&& o) noexcept {
  mpfr_init2(v_, mpfr_get_prec(o.v_));
  mpfr_swap(v_, o.v_);
}
MPReal& MPReal::operator=(const MPReal& o) {
  if (this != &o) {
    mpfr_set_prec(v_, mpfr_get_prec(o.v_));
    mpfr_set(v_, o.v_, MPFR_RNDN);
  }
  return *this;
}
MPReal& MPReal::operator=(MPReal&& o) noexcept {
  mpfr_swap(v_, o.v_);
  return *this;
}
MPReal::~MPReal() { mpfr_clear(v_); }

MPReal MPReal::with_prec(int prec_bits) const {
  MPReal r(prec_bits);
  mpfr_set(r.v_, v_, MPFR_RNDN);
  return r;
}

long MPReal::exponent2() const {
  if (mpfr_zero_p(v_)) return std::numeric_limits<long>::min() / 2;
  return mpfr_get_exp(v_);
}

std::string MPReal::to_string(int digits) const {
  if (mpfr_nan_p(v_)) return "nan";
  if (mpfr_inf_p(v_)) return mpfr_sgn(v_) > 0 ? "inf" : "-inf";
  std::string fmt = "%." + std::to_string(std::max(digits - 1, 0)) + "Re";
  char* out = nullptr;
  mpfr_asprintf(&out, fmt.c_str(), v_);
  std::string s(out);
  mpfr_free_str(out);
  return s;
}

MPReal MPReal::operator-() const {
  MPReal r(*this);
  mpfr_neg(r.v_, r.v_, MPFR_RNDN);
  return r;
}
MPReal& MPReal::operator+=(const MPReal& o) {
  widen(*this, larger(*this, o));
  mpfr_add(v_, v_, o.v_, MPFR_RNDN);
  return *this;
}
MPReal& MPReal::operator-=(const MPReal& o) {
  widen(*this, larger(*this, o));
  mpfr_sub(v_, v_, o.v_, MPFR_RNDN);
  return *this;
}
MPReal& MPReal::operator*=(const MPReal& o) {
  widen(*this, larger(*this, o));
  mpfr_mul(v_, v_, o.v_, MPFR_RNDN);
  return *this;
}
MPReal& MPReal::operator/=(const MPReal& o) {
  widen(*this, larger(*this, o));
  mpfr_div(v_, v_, o.v_, MPFR_RNDN);
  return *this;
}

#define QKNOT_UNARY(name, fn)          \
  MPReal name(const MPReal& x) {       \
    MPReal r(x.prec());                \
    fn(r.get(), x.get(), MPFR_RNDN);   \
    return r;                          \
  }
QKNOT_UNARY(abs, mpfr_abs)
QKNOT_UNARY(sqrt, mpfr_sqrt)
QKNOT_UNARY(exp, mpfr_exp)
QKNOT_UNARY(log, mpfr_log)
QKNOT_UNARY(sin, mpfr_sin)
QKNOT_UNARY(cos, mpfr_cos)
#undef QKNOT_UNARY

MPReal atan2(const MPReal& y, const MPReal& x) {
  MPReal r(static_cast<int>(larger(y, x)));
  mpfr_atan2(r.get(), y.get(), x.get(), MPFR_RNDN);
  return r;
}
MPReal pow(const MPReal& x, const MPReal& y) {
  MPReal r(static_cast<int>(larger(x, y)));
  mpfr_pow(r.get(), x.get(), y.get(), MPFR_RNDN);
  return r;
}
MPReal mul_si(const MPReal& x, long k) {
  MPReal r(x.prec());
  mpfr_mul_si(r.get(), x.get(), k, MPFR_RNDN);
  return r;
}
MPReal div_si(const MPReal& x, long k) {
  MPReal r(x.prec());
  mpfr_div_si(r.get(), x.get(), k, MPFR_RNDN);
  return r;
}
double log2_abs(const MPReal& x) {
  if (x.is_zero()) return -std::numeric_limits<double>::infinity();
  long e = 0;
  double m = mpfr_get_d_2exp(&e, x.get(), MPFR_RNDN);
  return std::log2(std::fabs(m)) + static_cast<double>(e);
}

MPComplex MPComplex::e(const Rational& x, int prec_bits) {
  // Reduce x mod 1 exactly before multiplying by 2 pi.
  Rational frac = x - Rational(BigInt(mpz_class(x.get_num() / x.get_den())));
  MPReal theta = MPReal(frac, prec_bits + 8) * mul_si(MPReal::pi(prec_bits + 8), 2);
  return {cos(theta).with_prec(prec_bits), sin(theta).with_prec(prec_bits)};
}
MPComplex MPComplex::polar(const MPReal& r, const MPReal& theta) { return {r * cos(theta), r * sin(theta)}; }

std::string MPComplex::to_string(int digits) const { return re_.to_string(digits) + " " + im_.to_string(digits); }

MPComplex& MPComplex::operator+=(const MPComplex& o) {
  re_ += o.re_;
  im_ += o.im_;
  return *this;
}
MPComplex& MPComplex::operator-=(const MPComplex& o) {
  re_ -= o.re_;
  im_ -= o.im_;
  return *this;
}
MPComplex& MPComplex::operator*=(const MPComplex& o) {
  MPReal r = re_ * o.re_ - im_ * o.im_;
  MPReal i = re_ * o.im_ + im_ * o.re_;
  re_ = std::move(r);
  im_ = std::move(i);
  return *this;
}
MPComplex& MPComplex::operator*=(const MPReal& o) {
  re_ *= o;
  im_ *= o;
  return *this;
}
MPComplex& MPComplex::operator/=(const MPComplex& o) {
  MPReal d = o.re_ * o.re_ + o.im_ * o.im_;
  if (d.is_zero()) fail(ErrorKind::Precision, "division by zero");
  MPReal r = (re_ * o.re_ + im_ * o.im_) / d;
  MPReal i = (im_ * o.re_ - re_ * o.im_) / d;
  re_ = std::move(r);
  im_ = std::move(i);
  return *this;
}

MPReal norm(const MPComplex& z) { return z.re() * z.re() + z.im() * z.im(); }
MPReal abs(const MPComplex& z) {
  MPReal r(z.prec());
  mpfr_hypot(r.get(), z.re().get(), z.im().get(), MPFR_RNDN);
  return r;
}
MPReal arg(const MPComplex& z) { return atan2(z.im(), z.re()); }
MPComplex conj(const MPComplex& z) { return {z.re(), -z.im()}; }
MPComplex exp(const MPComplex& z) { return MPComplex::polar(exp(z.re()), z.im()); }
MPComplex log(const MPComplex& z) {
  if (z.is_zero()) fail(ErrorKind::Precision, "log of zero");
  return {log(abs(z)), arg(z)};
}
MPComplex sqrt(const MPComplex& z) {
  if (z.is_zero()) return z;
  MPReal r = sqrt(abs(z));
  MPReal half = div_si(arg(z), 2);
  return MPComplex::polar(r, half);
}
MPComplex pow(const MPComplex& z, const MPComplex& w) { return exp(w * log(z)); }
MPComplex pow(const MPComplex& z, long k) {
  MPComplex result(MPReal(1.0, z.prec()), MPReal(z.prec()));
  MPComplex base = k < 0 ? MPComplex(MPReal(1.0, z.prec()), MPReal(z.prec())) / z : z;
  unsigned long e = k < 0 ? static_cast<unsigned long>(-k) : static_cast<unsigned long>(k);
  while (e) {
    if (e & 1) result *= base;
    e >>= 1;
    if (e) base *= base;
  }
  return result;
}
MPComplex real_to_complex(const MPReal& x) { return {x, MPReal(x.prec())}; }

double agreement_bits(const MPComplex& a, const MPComplex& b) {
  double scale = log2_abs(abs(b));
  double diff = log2_abs(abs(a - b));
  if (std::isinf(diff)) return static_cast<double>(std::min(a.prec(), b.prec()));
  if (std::isinf(scale)) return -diff;
  return scale - diff;
}

}  // namespace qknot
