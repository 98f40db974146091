#include "qknot/holonomic.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>

#include "qknot/asymptotics.hpp"

namespace qknot {

// ---------------------------------------------------------------------------
// BivariatePoly

BivariatePoly BivariatePoly::from_terms(const std::vector<std::pair<Key, BigInt>>& terms) {
  BivariatePoly p;
  for (const auto& [k, c] : terms) p.terms_[k] += c;
  std::erase_if(p.terms_, [](const auto& kv) { return kv.second == 0; });
  return p;
}

BivariatePoly BivariatePoly::monomial(const BigInt& c, std::int64_t u_exp, std::int64_t q_exp) {
  return from_terms({{{u_exp, q_exp}, c}});
}

BivariatePoly BivariatePoly::operator-() const {
  BivariatePoly r = *this;
  for (auto& [k, c] : r.terms_) c = -c;
  return r;
}

BivariatePoly& BivariatePoly::operator+=(const BivariatePoly& o) {
  for (const auto& [k, c] : o.terms_) {
    BigInt& slot = terms_[k];
    slot += c;
    if (slot == 0) terms_.erase(k);
  }
  return *this;
}

BivariatePoly operator*(const BivariatePoly& a, const BivariatePoly& b) {
  BivariatePoly r;
  for (const auto& [ka, ca] : a.terms_)
    for (const auto& [kb, cb] : b.terms_) r.terms_[{ka.first + kb.first, ka.second + kb.second}] += ca * cb;
  std::erase_if(r.terms_, [](const auto& kv) { return kv.second == 0; });
  return r;
}

LaurentPoly BivariatePoly::at(std::int64_t n) const {
  std::vector<LaurentPoly::Term> t;
  t.reserve(terms_.size());
  for (const auto& [k, c] : terms_) t.emplace_back(2 * (k.first * n + k.second), c);
  return LaurentPoly::from_terms(std::move(t));
}

std::string BivariatePoly::to_string() const {
  std::string out;
  for (const auto& [k, c] : terms_) {
    if (!out.empty()) out += "; ";
    out += qknot::to_string(c) + " u^" + std::to_string(k.first) + " q^" + std::to_string(k.second);
  }
  return out;
}

BivariatePoly BivariatePoly::parse(const std::string& text) {
  std::vector<std::pair<Key, BigInt>> terms;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ';')) {
    std::istringstream in(item);
    std::string coef, u, q, extra;
    if (!(in >> coef)) continue;
    if (!(in >> u >> q) || (in >> extra) || u.rfind("u^", 0) != 0 || q.rfind("q^", 0) != 0)
      fail(ErrorKind::InvalidInput, "bad monomial: '" + item + "'");
    try {
      terms.push_back({{std::stoll(u.substr(2)), std::stoll(q.substr(2))}, parse_bigint(coef)});
    } catch (const std::logic_error&) {
      fail(ErrorKind::InvalidInput, "bad monomial: '" + item + "'");
    }
  }
  return from_terms(terms);
}

// ---------------------------------------------------------------------------
// RecurrenceOperator

RecurrenceOperator::RecurrenceOperator(std::vector<BivariatePoly> a, BivariatePoly b) : a_(std::move(a)), b_(std::move(b)) {
  if (a_.empty() || a_.back().is_zero()) fail(ErrorKind::InvalidInput, "leading coefficient a_d must be nonzero");
}

LaurentPoly RecurrenceOperator::residual(std::int64_t n, const std::vector<LaurentPoly>& window) const {
  LaurentPoly r = b_.at(n);
  for (std::size_t j = 0; j < a_.size(); ++j) r += a_[j].at(n) * window.at(j);
  return r;
}

std::string RecurrenceOperator::serialize() const {
  std::string out = "order=" + std::to_string(order()) + "\n";
  out += "b: " + b_.to_string() + "\n";
  for (std::size_t j = 0; j < a_.size(); ++j) out += "a" + std::to_string(j) + ": " + a_[j].to_string() + "\n";
  return out;
}

RecurrenceOperator RecurrenceOperator::parse(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  int order = -1;
  std::map<int, BivariatePoly> a;
  BivariatePoly b;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (line.rfind("order=", 0) == 0) {
      order = std::stoi(line.substr(6));
      continue;
    }
    auto colon = line.find(':');
    if (colon == std::string::npos) fail(ErrorKind::InvalidInput, "bad recursion line: " + line);
    std::string key = line.substr(0, colon);
    BivariatePoly p = BivariatePoly::parse(line.substr(colon + 1));
    if (key == "b") {
      b = p;
    } else if (key.size() > 1 && key[0] == 'a') {
      a[std::stoi(key.substr(1))] = p;
    } else {
      fail(ErrorKind::InvalidInput, "bad recursion key: " + key);
    }
  }
  if (order < 0) fail(ErrorKind::InvalidInput, "missing order= header");
  std::vector<BivariatePoly> coeffs(static_cast<std::size_t>(order) + 1);
  for (auto& [j, p] : a) {
    if (j < 0 || j > order) fail(ErrorKind::InvalidInput, "coefficient index out of range");
    coeffs[static_cast<std::size_t>(j)] = p;
  }
  return RecurrenceOperator(std::move(coeffs), std::move(b));
}

RecurrenceOperator RecurrenceOperator::load(const std::filesystem::path& path) {
  std::ifstream f(path);
  if (!f) fail(ErrorKind::InvalidInput, "cannot open " + path.string());
  std::stringstream ss;
  ss << f.rdbuf();
  return parse(ss.str());
}

// ---------------------------------------------------------------------------
// Exact sequence operations

Sequence apply(const RecurrenceOperator& rec, const Sequence& initial, std::int64_t n_max) {
  const int d = rec.order();
  if (static_cast<int>(initial.values.size()) < d) fail(ErrorKind::InvalidInput, "need at least order initial values");
  Sequence s = initial;
  while (s.last() < n_max) {
    const std::int64_t n = s.last() - d + 1;
    LaurentPoly num = rec.inhomogeneous().at(n);
    for (int j = 0; j < d; ++j) num += rec.coeffs()[j].at(n) * s.at(n + j);
    LaurentPoly lead = rec.coeffs()[d].at(n);
    if (lead.is_zero()) fail(ErrorKind::PropertyViolation, "vanishing leading coefficient at n=" + std::to_string(n));
    try {
      s.values.push_back((-num).exact_div(lead));
    } catch (const Error&) {
      fail(ErrorKind::PropertyViolation, "inexact division at n=" + std::to_string(n));
    }
  }
  return s;
}

VerifyReport verify_report(const RecurrenceOperator& rec, const Sequence& seq) {
  const int d = rec.order();
  VerifyReport r;
  if (static_cast<int>(seq.values.size()) <= d) fail(ErrorKind::InvalidInput, "sequence shorter than order+1");
  for (std::int64_t n = seq.first; n + d <= seq.last(); ++n) {
    std::vector<LaurentPoly> w(seq.values.begin() + (n - seq.first), seq.values.begin() + (n - seq.first + d + 1));
    ++r.checked;
    if (!rec.residual(n, w).is_zero()) {
      r.ok = false;
      r.first_bad = n;
      break;
    }
  }
  return r;
}

// ---------------------------------------------------------------------------
// Numerical iteration on jets

namespace {

// Coefficients of the Taylor expansion in eps of a function of q = q0*exp(eps),
// truncated at `valid` terms.
struct Jet {
  std::vector<MPComplex> c;
  int valid;
};

// Evaluation point q0 and precomputed powers.
class JetContext {
 public:
  // Jets are taken in the scaled variable eps/scale, which keeps high orders
  // of q^e = exp(e eps) moderate when |e| is large.
  JetContext(int order, int prec, double scale = 1.0) : K_(order), prec_(prec), scale_(scale, prec), scale_log2_(std::log2(scale)) {}

  void set_root(std::int64_t a, std::int64_t c) {
    root_ = true;
    c_ = c;
    zeta_.clear();
    zeta_.reserve(static_cast<std::size_t>(c));
    for (std::int64_t k = 0; k < c; ++k) zeta_.push_back(MPComplex::e(make_rational(a * k % c, c), prec_));
  }
  void set_point(const MPComplex& q) {
    root_ = false;
    logq_ = log(q.with_prec(prec_));
  }

  int order() const { return K_; }
  int prec() const { return prec_; }
  double scale_log2() const { return scale_log2_; }
  bool at_root() const { return root_; }
  std::int64_t root_order() const { return c_; }

  MPComplex power(std::int64_t e) const {
    if (root_) return zeta_[static_cast<std::size_t>(((e % c_) + c_) % c_)];
    return exp(logq_ * MPReal(big(e), prec_));
  }

  // Adds coef * q^e (as a jet) to out.
  void add_monomial(Jet& out, const BigInt& coef, std::int64_t e) const {
    MPComplex base = power(e) * MPReal(coef, prec_);
    MPReal factor(1.0, prec_);
    const MPReal ee = MPReal(big(e), prec_) * scale_;
    for (int k = 0; k < K_; ++k) {
      out.c[static_cast<std::size_t>(k)] += base * factor;
      if (e == 0) break;
      factor = div_si(factor * ee, k + 1);
    }
  }

  Jet zero() const { return Jet{std::vector<MPComplex>(static_cast<std::size_t>(K_), MPComplex(prec_)), K_}; }

  Jet of(const BivariatePoly& p, std::int64_t n) const {
    Jet j = zero();
    for (const auto& [k, c] : p.terms()) add_monomial(j, c, k.first * n + k.second);
    return j;
  }
  Jet of(const LaurentPoly& p) const {
    Jet j = zero();
    for (const auto& [t, c] : p.terms()) {
      if (t % 2 != 0) fail(ErrorKind::InvalidInput, "initial values must have integral exponents");
      add_monomial(j, c, t / 2);
    }
    return j;
  }

  // Exact test: does the k-th Taylor coefficient of p(q^n, q) vanish at q0 = e(a/c)?
  bool exact_coefficient_zero(const BivariatePoly& p, std::int64_t n, int k) const;

 private:
  int K_, prec_;
  MPReal scale_;
  double scale_log2_ = 0;
  bool root_ = false;
  std::int64_t c_ = 1;
  std::vector<MPComplex> zeta_;
  MPComplex logq_{64};
  mutable std::vector<BigInt> cyclotomic_;  // Phi_c, low degree first
  const std::vector<BigInt>& cyclotomic() const;
};

int moebius(std::int64_t n) {
  int mu = 1;
  for (std::int64_t p = 2; p * p <= n; ++p) {
    if (n % p) continue;
    n /= p;
    if (n % p == 0) return 0;
    mu = -mu;
  }
  if (n > 1) mu = -mu;
  return mu;
}

const std::vector<BigInt>& JetContext::cyclotomic() const {
  if (!cyclotomic_.empty()) return cyclotomic_;
  // Phi_c = prod_{d | c} (x^d - 1)^{mu(c/d)}; multiply first, then divide.
  std::vector<BigInt> p{BigInt(1)};
  std::vector<std::int64_t> divide;
  for (std::int64_t d = 1; d <= c_; ++d) {
    if (c_ % d) continue;
    int mu = moebius(c_ / d);
    if (mu == 1) {
      std::vector<BigInt> r(p.size() + static_cast<std::size_t>(d));
      for (std::size_t i = 0; i < p.size(); ++i) {
        r[i + static_cast<std::size_t>(d)] += p[i];
        r[i] -= p[i];
      }
      p = std::move(r);
    } else if (mu == -1) {
      divide.push_back(d);
    }
  }
  for (std::int64_t d : divide) {
    // p / (x^d - 1): coefficients from the top, r[i] = p[i+d] + r[i+d].
    const std::size_t D = static_cast<std::size_t>(d);
    std::vector<BigInt> r(p.size() - D);
    for (std::size_t i = r.size(); i-- > 0;) r[i] = p[i + D] + (i + D < r.size() ? r[i + D] : BigInt(0));
    p = std::move(r);
  }
  cyclotomic_ = std::move(p);
  return cyclotomic_;
}

bool JetContext::exact_coefficient_zero(const BivariatePoly& p, std::int64_t n, int k) const {
  // sum_terms coef * e^k * zeta^{e mod c}, reduced modulo Phi_c.
  std::vector<BigInt> v(static_cast<std::size_t>(c_));
  for (const auto& [key, coef] : p.terms()) {
    const std::int64_t e = key.first * n + key.second;
    BigInt term = coef;
    for (int i = 0; i < k; ++i) term *= big(e);
    v[static_cast<std::size_t>(((e % c_) + c_) % c_)] += term;
  }
  const auto& phi = cyclotomic();
  const std::size_t deg = phi.size() - 1;
  for (std::size_t i = v.size(); i-- > deg;) {
    if (v[i] == 0) continue;
    BigInt lead = v[i];
    for (std::size_t j = 0; j <= deg; ++j) v[i - deg + j] -= lead * phi[j];
  }
  return std::all_of(v.begin(), v.end(), [](const BigInt& x) { return x == 0; });
}

Jet jet_mul(const Jet& a, const Jet& b, int prec) {
  const int L = std::min(a.valid, b.valid);
  Jet r{std::vector<MPComplex>(a.c.size(), MPComplex(prec)), L};
  for (int i = 0; i < L; ++i)
    for (int j = 0; i + j < L; ++j) r.c[static_cast<std::size_t>(i + j)] += a.c[static_cast<std::size_t>(i)] * b.c[static_cast<std::size_t>(j)];
  return r;
}

void jet_add(Jet& a, const Jet& b) {
  a.valid = std::min(a.valid, b.valid);
  for (int i = 0; i < a.valid; ++i) a.c[static_cast<std::size_t>(i)] += b.c[static_cast<std::size_t>(i)];
}

double magnitude_bound(const BivariatePoly& p, std::int64_t n, int k, double scale_log2) {
  // log2 of sum |coef| |e|^k / k!, a scale for the k-th jet coefficient.
  double best = -std::numeric_limits<double>::infinity();
  double total = 0;
  for (const auto& [key, coef] : p.terms()) {
    const double e = std::fabs(static_cast<double>(key.first * n + key.second));
    double l = std::log2(std::fabs(coef.get_d())) + (k > 0 ? k * std::log2(std::max(e, 1.0)) - std::lgamma(k + 1.0) / std::log(2.0) : 0.0);
    best = std::max(best, l);
    total += 1;
  }
  return best + k * scale_log2 + std::log2(std::max(total, 1.0));
}

struct IterationResult {
  MPComplex value;
  int degenerate = 0;
};

IterationResult iterate(const RecurrenceOperator& rec, const JetContext& ctx, const Sequence& initial, std::int64_t n_target) {
  const int d = rec.order();
  const int prec = ctx.prec();
  if (n_target >= initial.first && n_target <= initial.last()) return {ctx.of(initial.at(n_target)).c[0], 0};
  if (n_target < initial.first) fail(ErrorKind::InvalidInput, "target index precedes the initial values");
  if (static_cast<int>(initial.values.size()) < d) fail(ErrorKind::InvalidInput, "need at least order initial values");

  // Sliding window of the last d values.
  std::vector<Jet> window;
  const std::int64_t start = initial.last() - d + 1;
  for (int j = 0; j < d; ++j) window.push_back(ctx.of(initial.at(start + j)));
  IterationResult out;
  for (std::int64_t n = start; n + d <= n_target; ++n) {
    Jet num = ctx.of(rec.inhomogeneous(), n);
    for (int j = 0; j < d; ++j) jet_add(num, jet_mul(ctx.of(rec.coeffs()[j], n), window[static_cast<std::size_t>(j)], prec));
    const BivariatePoly& leading = rec.coeffs()[d];
    Jet lead = ctx.of(leading, n);
    // Valuation of the leading coefficient.
    int m = 0;
    for (; m < lead.valid; ++m) {
      const MPComplex& x = lead.c[static_cast<std::size_t>(m)];
      const double size = log2_abs(abs(x));
      const double scale = magnitude_bound(leading, n, m, ctx.scale_log2());
      if (size > scale - prec / 2.0) break;  // clearly nonzero
      if (!ctx.at_root()) fail(ErrorKind::Precision, "degenerate step at n=" + std::to_string(n));
      if (!ctx.exact_coefficient_zero(leading, n, m)) break;
    }
    if (m > 0) ++out.degenerate;
    const int L = std::min(num.valid, lead.valid) - m;
    if (L <= 0) fail(ErrorKind::Precision, "degenerate step at n=" + std::to_string(n) + ": jet order exhausted");
    // Solve lead * next = -num on the shifted coefficients.
    Jet next{std::vector<MPComplex>(static_cast<std::size_t>(ctx.order()), MPComplex(prec)), L};
    const MPComplex& l0 = lead.c[static_cast<std::size_t>(m)];
    for (int k = 0; k < L; ++k) {
      MPComplex acc = -num.c[static_cast<std::size_t>(k + m)];
      for (int i = 1; i <= k; ++i) acc -= lead.c[static_cast<std::size_t>(m + i)] * next.c[static_cast<std::size_t>(k - i)];
      next.c[static_cast<std::size_t>(k)] = acc / l0;
    }
    window.erase(window.begin());
    window.push_back(std::move(next));
  }
  out.value = window.back().c[0];
  return out;
}

// Sum over the steps start..n_target-d of the vanishing order of the leading
// coefficient at q = e(a/c).
int degenerate_orders(const RecurrenceOperator& rec, std::int64_t a, std::int64_t c, const Sequence& initial,
                      std::int64_t n_target, int prec) {
  const int d = rec.order();
  if (initial.values.size() < static_cast<std::size_t>(d) || n_target <= initial.last()) return 0;
  constexpr int probe = 8;
  JetContext ctx(probe, prec);
  ctx.set_root(a, c);
  const BivariatePoly& leading = rec.coeffs()[d];
  int total = 0;
  for (std::int64_t n = initial.last() - d + 1; n + d <= n_target; ++n) {
    int m = 0;
    Jet lead = ctx.of(leading, n);
    for (; m < probe; ++m) {
      const double size = log2_abs(abs(lead.c[static_cast<std::size_t>(m)]));
      if (size > magnitude_bound(leading, n, m, 0.0) - prec / 2.0) break;
      if (!ctx.exact_coefficient_zero(leading, n, m)) break;
    }
    if (m == probe) fail(ErrorKind::InvalidInput, "leading coefficient vanishes identically at the root");
    total += m;
  }
  return total;
}

}  // namespace

MPComplex eval_at_root_once(const RecurrenceOperator& rec, std::int64_t a, std::int64_t c, const Sequence& initial,
                            std::int64_t n_target, int prec_bits, int* degenerate_steps) {
  if (c < 1) fail(ErrorKind::InvalidInput, "root denominator must be positive");
  const std::int64_t a0 = ((a % c) + c) % c;
  // Every degenerate step consumes jet orders, so count them first.
  const int lost = degenerate_orders(rec, a0, c, initial, n_target, prec_bits);
  double emax = 1;
  for (const auto& coef : rec.coeffs())
    for (const auto& [k, v] : coef.terms())
      emax = std::max(emax, std::fabs(static_cast<double>(k.first)) * static_cast<double>(std::llabs(n_target)) +
                                std::fabs(static_cast<double>(k.second)));
  JetContext ctx(lost + 2, prec_bits, lost > 0 ? 1.0 / emax : 1.0);
  ctx.set_root(a0, c);
  IterationResult r = iterate(rec, ctx, initial, n_target);
  if (degenerate_steps) *degenerate_steps = r.degenerate;
  return r.value;
}

RootValue eval_at_root(const RecurrenceOperator& rec, std::int64_t a, std::int64_t c, const Sequence& initial,
                       std::int64_t n_target, int prec_bits) {
  int deg = 0;
  MPComplex lo = eval_at_root_once(rec, a, c, initial, n_target, prec_bits, &deg);
  MPComplex hi = eval_at_root_once(rec, a, c, initial, n_target, 2 * prec_bits);
  const double bits = agreement_bits(lo, hi);
  if (bits < prec_bits / 2.0)
    fail(ErrorKind::Precision, "insufficient precision: runs at " + std::to_string(prec_bits) + " and " +
                                   std::to_string(2 * prec_bits) + " bits agree to " + std::to_string(bits) + " bits");
  return RootValue{hi.with_prec(prec_bits), bits, deg};
}

MPComplex eval_at_point(const RecurrenceOperator& rec, const MPComplex& q, const Sequence& initial,
                        std::int64_t n_target, int prec_bits) {
  JetContext ctx(1, prec_bits);
  ctx.set_point(q);
  return iterate(rec, ctx, initial, n_target).value;
}

MPComplex eval_poly_at_root(const LaurentPoly& p, std::int64_t a, std::int64_t c, int prec_bits) {
  MPComplex s(prec_bits);
  for (const auto& [t, coef] : p.terms()) s += MPComplex::e(make_rational(a * t, 2 * c), prec_bits) * MPReal(coef, prec_bits);
  return s;
}

// ---------------------------------------------------------------------------
// q = 1 specialization

int MLPoly::l_degree() const {
  int d = -1;
  for (const auto& [k, c] : terms) d = std::max(d, k.second);
  return d;
}

std::string MLPoly::to_string() const {
  std::string out;
  // Descending in L, then in M.
  for (auto it = terms.rbegin(); it != terms.rend(); ++it) {
    const auto& [k, c] = *it;
    std::string mono;
    if (k.first != 0) mono += k.first == 1 ? "M" : "M^" + std::to_string(k.first);
    if (k.second != 0) mono += (mono.empty() ? "" : "*") + std::string(k.second == 1 ? "L" : "L^" + std::to_string(k.second));
    BigInt a = abs(c);
    std::string coef = (a == 1 && !mono.empty()) ? "" : qknot::to_string(a) + (mono.empty() ? "" : "*");
    out += (c < 0 ? "-" : (out.empty() ? "" : "+")) + coef + mono;
  }
  return out.empty() ? "0" : out;
}

MLPoly specialize_q1(const RecurrenceOperator& rec) {
  MLPoly r;
  for (int j = 0; j <= rec.order(); ++j)
    for (const auto& [k, c] : rec.coeffs()[static_cast<std::size_t>(j)].terms()) r.terms[{k.first, j}] += c;
  std::erase_if(r.terms, [](const auto& kv) { return kv.second == 0; });
  if (r.terms.empty()) return r;
  BigInt g = 0;
  std::int64_t low = std::numeric_limits<std::int64_t>::max();
  for (const auto& [k, c] : r.terms) {
    g = gcd(g, c);
    low = std::min(low, k.first);
  }
  // Sign: leading coefficient (highest L, then highest M) positive.
  if (r.terms.rbegin()->second < 0) g = -g;
  MLPoly out;
  for (const auto& [k, c] : r.terms) out.terms[{k.first - low, k.second}] = c / g;
  return out;
}

// ---------------------------------------------------------------------------
// Degrees and quasi-polynomials

std::vector<Rational> degree_sequence(const Sequence& seq, DegreeSide side) {
  std::vector<Rational> out;
  for (const auto& p : seq.values) {
    if (p.is_zero()) fail(ErrorKind::InvalidInput, "degree of the zero polynomial");
    out.push_back(side == DegreeSide::Max ? p.max_degree() : p.min_degree());
  }
  return out;
}

Rational QuasiPolynomial::eval(std::int64_t n) const {
  const std::size_t r = static_cast<std::size_t>(((n % period) + period) % period);
  const Rational x(big(n));
  return c2[r] * x * x + c1[r] * x + c0[r];
}

std::string QuasiPolynomial::to_string() const {
  auto list = [](const std::vector<Rational>& v) {
    std::string s = "(";
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + qknot::to_string(v[i]);
    return s + ")";
  };
  return "period=" + std::to_string(period) + " c2=" + list(c2) + " c1=" + list(c1) + " c0=" + list(c0);
}

QuasiPolynomial quasi_fit(const std::vector<Rational>& degrees, std::int64_t first, int max_period) {
  const std::int64_t count = static_cast<std::int64_t>(degrees.size());
  for (int p = 1; p <= max_period; ++p) {
    QuasiPolynomial qp;
    qp.period = p;
    qp.c2.assign(static_cast<std::size_t>(p), Rational(0));
    qp.c1 = qp.c2;
    qp.c0 = qp.c2;
    bool ok = true;
    for (int r = 0; r < p && ok; ++r) {
      std::vector<std::int64_t> idx;
      for (std::int64_t i = 0; i < count; ++i)
        if ((((first + i) % p) + p) % p == r) idx.push_back(i);
      if (idx.size() < 4) {
        ok = false;  // too few points to fit and check
        break;
      }
      // Exact interpolation through the first three points (Lagrange form).
      const Rational x0(big(first + idx[0])), x1(big(first + idx[1])), x2(big(first + idx[2]));
      const Rational &y0 = degrees[static_cast<std::size_t>(idx[0])], &y1 = degrees[static_cast<std::size_t>(idx[1])],
                     &y2 = degrees[static_cast<std::size_t>(idx[2])];
      const Rational w0 = y0 / ((x0 - x1) * (x0 - x2)), w1 = y1 / ((x1 - x0) * (x1 - x2)), w2 = y2 / ((x2 - x0) * (x2 - x1));
      Rational a2 = w0 + w1 + w2;
      Rational a1 = -(w0 * (x1 + x2) + w1 * (x0 + x2) + w2 * (x0 + x1));
      Rational a0 = w0 * x1 * x2 + w1 * x0 * x2 + w2 * x0 * x1;
      qp.c2[static_cast<std::size_t>(r)] = a2;
      qp.c1[static_cast<std::size_t>(r)] = a1;
      qp.c0[static_cast<std::size_t>(r)] = a0;
      for (std::int64_t i : idx) {
        const Rational x(big(first + i));
        if (a2 * x * x + a1 * x + a0 != degrees[static_cast<std::size_t>(i)]) {
          ok = false;
          break;
        }
      }
    }
    if (ok) return qp;
  }
  fail(ErrorKind::PropertyViolation, "no quasi-polynomial fit with period <= " + std::to_string(max_period));
}

// ---------------------------------------------------------------------------
// MMR

MmrReport mmr_check(const PointEvaluator& f, const LaurentPoly& alexander, const MPReal& alpha,
                    const std::vector<std::int64_t>& n_list, int prec_bits) {
  MmrReport rep{MPComplex(prec_bits), {}, MPComplex(prec_bits), 0.0, true};
  const MPReal a = alpha.with_prec(prec_bits);
  MPComplex delta(prec_bits);
  for (const auto& [t, c] : alexander.terms()) {
    if (t % 2) fail(ErrorKind::InvalidInput, "Alexander polynomial must have integral exponents");
    delta += real_to_complex(exp(mul_si(a, t / 2)) * MPReal(c, prec_bits));
  }
  if (log2_abs(abs(delta)) < -prec_bits / 2.0) fail(ErrorKind::PropertyViolation, "Alexander zero at e^alpha");
  rep.target = MPComplex(1.0, 0.0, prec_bits) / delta;
  std::vector<MPReal> ns;
  std::vector<MPComplex> vals;
  for (std::int64_t n : n_list) {
    MPComplex q = real_to_complex(exp(div_si(a, static_cast<long>(n))));
    MPComplex v = f(n, q, prec_bits);
    // [n] at q = e^{alpha/n}: sinh(alpha/2)/sinh(alpha/(2n)).
    MPComplex qn = n == 0 ? MPComplex(1.0, 0.0, prec_bits) : real_to_complex(exp(div_si(a, 2)));
    MPComplex qh = real_to_complex(exp(div_si(a, 2 * static_cast<long>(n))));
    MPComplex unit(1.0, 0.0, prec_bits);
    MPComplex qint = a.is_zero() ? MPComplex(static_cast<double>(n), 0.0, prec_bits)
                                 : (qn - unit / qn) / (qh - unit / qh);
    MmrRow row{n, v, abs(v - rep.target).to_double(), abs(v * qint - rep.target).to_double()};
    if (!rep.rows.empty() && !(row.error < rep.rows.back().error) && !(row.error == 0 && rep.rows.back().error == 0))
      rep.decreasing = false;
    rep.rows.push_back(row);
    ns.push_back(MPReal(big(n), prec_bits));
    vals.push_back(v);
  }
  if (vals.size() >= 2) {
    Acceleration acc = accelerate(ns, vals, static_cast<int>(vals.size()) - 1);
    rep.extrapolated = acc.coeffs[0];
  } else if (!vals.empty()) {
    rep.extrapolated = vals.back();
  }
  rep.extrapolated_error = abs(rep.extrapolated - rep.target).to_double();
  return rep;
}

}  // namespace qknot
