#include "qknot/nahm.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <limits>
#include <numeric>
#include <optional>
#include <sstream>

namespace qknot {

namespace {

constexpr std::int64_t kNegInf = std::numeric_limits<std::int64_t>::min();

std::vector<std::string> tokens_of(const std::string& line) {
  std::istringstream is(line);
  std::vector<std::string> out;
  std::string t;
  while (is >> t) out.push_back(t);
  return out;
}

std::int64_t parse_int(const std::string& t) {
  BigInt z = parse_bigint(t);
  if (!z.fits_slong_p()) fail(ErrorKind::InvalidInput, "integer out of range: " + t);
  return z.get_si();
}

// Dense integer series helpers: index = exponent.
void div_one_minus(std::vector<BigInt>& c, std::size_t k) {
  for (std::size_t i = k; i < c.size(); ++i) c[i] += c[i - k];
}
void mul_one_minus(std::vector<BigInt>& c, std::size_t k) {
  for (std::size_t i = c.size(); i-- > k;) c[i] -= c[i - k];
}

// Nullspace basis of a rational matrix with `cols` columns.
std::vector<std::vector<Rational>> nullspace(std::vector<std::vector<Rational>> m, int cols) {
  std::vector<int> pivots;
  std::size_t row = 0;
  for (int col = 0; col < cols && row < m.size(); ++col) {
    std::size_t p = row;
    while (p < m.size() && m[p][col] == 0) ++p;
    if (p == m.size()) continue;
    std::swap(m[p], m[row]);
    Rational inv = 1 / m[row][col];
    for (auto& x : m[row]) x *= inv;
    for (std::size_t r = 0; r < m.size(); ++r) {
      if (r == row || m[r][col] == 0) continue;
      Rational f = m[r][col];
      for (int j = 0; j < cols; ++j) m[r][j] -= f * m[row][j];
    }
    pivots.push_back(col);
    ++row;
  }
  std::vector<std::vector<Rational>> basis;
  for (int free = 0; free < cols; ++free) {
    if (std::find(pivots.begin(), pivots.end(), free) != pivots.end()) continue;
    std::vector<Rational> v(cols, Rational(0));
    v[free] = 1;
    for (std::size_t r = 0; r < pivots.size(); ++r) v[pivots[r]] = -m[r][free];
    basis.push_back(std::move(v));
  }
  return basis;
}

// Scales a rational vector to a primitive integer vector.
std::vector<Rational> primitive(std::vector<Rational> v) {
  BigInt l = 1, g = 0;
  for (const auto& x : v) l = lcm(l, BigInt(x.get_den()));
  for (auto& x : v) {
    x *= l;
    g = gcd(g, BigInt(x.get_num()));
  }
  if (g != 0)
    for (auto& x : v) x /= g;
  return v;
}

Rational quad(const NahmDatum& d, const std::vector<Rational>& u, const std::vector<Rational>& v) {
  Rational s = 0;
  for (int i = 0; i < d.rank; ++i)
    for (int j = 0; j < d.rank; ++j) s += u[i] * d.A[i][j] * v[j];
  return s;
}

Rational linear(const NahmDatum& d, const std::vector<Rational>& v) {
  Rational s = 0;
  for (int i = 0; i < d.rank; ++i) s += d.b[i] * v[i];
  return s;
}

std::string vec_string(const std::vector<Rational>& v) {
  std::string s = "(";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + to_string(v[i]);
  return s + ")";
}

// Variables with negative couplings first, then those under constraints; this
// lets the box bounds prune early. The result does not depend on the order.
std::vector<int> search_order(const NahmDatum& d) {
  std::vector<int> neg(d.rank, 0), constrained(d.rank, 0);
  for (int i = 0; i < d.rank; ++i)
    for (int j = 0; j < d.rank; ++j)
      if (i != j && d.A[i][j] < 0) ++neg[i];
  for (const auto* rows : {&d.eq, &d.ineq})
    for (const auto& row : *rows)
      for (int i = 0; i < d.rank; ++i)
        if (row[i] != 0) constrained[i] = 1;
  std::vector<int> order(d.rank);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int x, int y) {
    if (neg[x] != neg[y]) return neg[x] > neg[y];
    return constrained[x] > constrained[y];
  });
  return order;
}

// Depth-first enumeration with box bounds. Exponents are kept as integers
// W = L*Q; series states hold prod 1/(q)_l for the forms already determined.
class Enumerator {
 public:
  Enumerator(const NahmDatum& d, const Rational& trunc, std::int64_t cap, std::uint64_t budget)
      : d_(d), r_(d.rank), cap_(cap), budget_(budget) {
    BigInt l = 1;
    for (int i = 0; i < r_; ++i) {
      l = lcm(l, BigInt(Rational(d.A[i][i] / 2).get_den()));
      l = lcm(l, BigInt(d.b[i].get_den()));
      for (int j = i + 1; j < r_; ++j) l = lcm(l, BigInt(d.A[i][j].get_den()));
    }
    if (!l.fits_slong_p()) fail(ErrorKind::InvalidInput, "exponent denominators too large");
    L_ = l.get_si();
    auto to_i = [](const Rational& x) {
      if (x.get_den() != 1 || !x.get_num().fits_slong_p()) fail(ErrorKind::InvalidInput, "coefficient out of range");
      return x.get_num().get_si();
    };
    diag_.resize(r_);
    lin_.resize(r_);
    off_.assign(r_, std::vector<std::int64_t>(r_, 0));
    for (int i = 0; i < r_; ++i) {
      diag_[i] = to_i(Rational(d.A[i][i] * L_ / 2));
      lin_[i] = to_i(Rational(d.b[i] * L_));
      for (int j = 0; j < r_; ++j)
        if (i != j) off_[i][j] = to_i(Rational(d.A[i][j] * L_));
    }
    Rational tw = trunc * L_;
    BigInt c = tw.get_num();
    mpz_cdiv_q(c.get_mpz_t(), tw.get_num().get_mpz_t(), tw.get_den().get_mpz_t());
    TW_ = c.get_si();
    Rational t2 = trunc * 2;
    BigInt c2;
    mpz_cdiv_q(c2.get_mpz_t(), t2.get_num().get_mpz_t(), t2.get_den().get_mpz_t());
    T2_ = c2.get_si();
    for (const auto& row : d.eq) rows_.push_back({row, true});
    for (const auto& row : d.ineq) rows_.push_back({row, false});
    for (const auto& row : d.denom) rows_.push_back({row, false});
    forms_at_.resize(r_);
    for (std::size_t k = 0; k < d.denom.size(); ++k) {
      int last = -1;
      for (int i = 0; i < r_; ++i)
        if (d.denom[k][i] != 0) last = i;
      if (last >= 0) forms_at_[last].push_back(k);  // a zero form is (q)_0 = 1
    }
    x_.assign(r_, 0);
    states_.resize(r_ + 1);
    materialized_.assign(r_ + 1, false);
  }

  void run() { visit(0); }

  std::int64_t shell_hits() const { return shell_hits_; }
  std::uint64_t points() const { return points_; }
  std::uint64_t nodes() const { return nodes_; }
  std::int64_t result_lo() const { return res_lo_; }
  const std::vector<BigInt>& result() const { return res_; }
  std::int64_t trunc2() const { return T2_; }

 private:
  struct Row {
    std::vector<std::int64_t> coef;
    bool equality;
  };

  // Box [lo, hi] for the free positions >= depth; false if infeasible.
  bool box(int depth, std::vector<std::int64_t>& lo, std::vector<std::int64_t>& hi) const {
    lo.assign(r_, 0);
    hi.assign(r_, cap_);
    for (const auto& row : rows_) {
      std::int64_t rest = 0;
      int nfree = 0, last = -1;
      bool all_neg = true, all_pos = true;
      for (int i = 0; i < r_; ++i) {
        std::int64_t a = row.coef[i];
        if (a == 0) continue;
        if (i < depth) {
          rest += a * x_[i];
        } else {
          ++nfree;
          last = i;
          if (a > 0) all_neg = false;
          if (a < 0) all_pos = false;
        }
      }
      if (nfree == 0) {
        if (row.equality ? rest != 0 : rest < 0) return false;
        continue;
      }
      if (nfree == 1) {
        std::int64_t a = row.coef[last];
        if (row.equality) {
          if ((-rest) % a != 0) return false;
          std::int64_t v = -rest / a;
          lo[last] = std::max(lo[last], v);
          hi[last] = std::min(hi[last], v);
        } else if (a > 0) {
          lo[last] = std::max(lo[last], ceil_div(-rest, a));
        } else {
          hi[last] = std::min(hi[last], floor_div(rest, -a));
        }
        continue;
      }
      // Several free variables all with one sign: each is bounded by the rest.
      if (all_neg || (row.equality && all_pos)) {
        std::int64_t budget = all_neg ? rest : -rest;
        if (budget < 0) return false;
        for (int i = depth; i < r_; ++i) {
          std::int64_t a = row.coef[i];
          if (a != 0) hi[i] = std::min(hi[i], budget / (a < 0 ? -a : a));
        }
      }
    }
    for (int i = depth; i < r_; ++i)
      if (lo[i] > hi[i]) return false;
    return true;
  }

  // Lower bound of W over the box (positions < depth fixed). kNegInf when the
  // free block has a negative coupling.
  std::int64_t bound(int depth, const std::vector<std::int64_t>& lo, const std::vector<std::int64_t>& hi) const {
    std::vector<std::int64_t> p(r_);
    for (int i = 0; i < r_; ++i) p[i] = i < depth ? x_[i] : lo[i];
    for (int i = depth; i < r_; ++i)
      for (int j = i + 1; j < r_; ++j)
        if (off_[i][j] < 0 && hi[i] > lo[i] && hi[j] > lo[j]) return kNegInf;
    std::int64_t w = value(p);
    for (int j = depth; j < r_; ++j) {
      std::int64_t g = 2 * diag_[j] * p[j] + lin_[j];
      for (int i = 0; i < r_; ++i)
        if (i != j) g += off_[i][j] * p[i];
      std::int64_t u = hi[j] - lo[j];
      std::int64_t a = diag_[j];
      auto f = [&](std::int64_t z) { return g * z + a * z * z; };
      std::int64_t best = std::min(f(0), f(u));
      if (a > 0) {
        std::int64_t z = floor_div(-g, 2 * a);
        for (std::int64_t t : {z, z + 1})
          if (t >= 0 && t <= u) best = std::min(best, f(t));
      }
      w += best;
    }
    return w;
  }

  std::int64_t value(const std::vector<std::int64_t>& n) const {
    std::int64_t w = 0;
    for (int i = 0; i < r_; ++i) {
      w += diag_[i] * n[i] * n[i] + lin_[i] * n[i];
      for (int j = i + 1; j < r_; ++j) w += off_[i][j] * n[i] * n[j];
    }
    return w;
  }

  std::int64_t form(std::size_t k) const {
    std::int64_t s = 0;
    for (int i = 0; i < r_; ++i) s += d_.denom[k][i] * x_[i];
    return s;
  }

  // Number of integer-exponent coefficients needed below trunc when every
  // exponent is at least W/L.
  std::size_t length_for(std::int64_t w) const {
    // Smallest doubled exponent q2 with q2 * L >= 2 w.
    std::int64_t q2 = ceil_div(2 * w, L_);
    std::int64_t n = T2_ - q2;
    return n <= 0 ? 0 : static_cast<std::size_t>((n + 1) / 2);
  }

  void from_scratch(int depth, std::size_t len) {
    auto& s = states_[depth];
    s.assign(len, BigInt(0));
    if (len == 0) return;
    s[0] = 1;
    for (int pos = 0; pos < depth; ++pos)
      for (std::size_t k : forms_at_[pos]) {
        std::int64_t l = form(k);
        for (std::int64_t i = 1; i <= l && static_cast<std::size_t>(i) < len; ++i)
          div_one_minus(s, static_cast<std::size_t>(i));
      }
    materialized_[depth] = true;
  }

  void leaf() {
    std::int64_t w = value(x_);
    if (w >= TW_) return;
    if ((2 * w) % L_ != 0) fail(ErrorKind::InvalidInput, "exponent is not a half-integer at a lattice point");
    std::int64_t q2 = 2 * w / L_;
    std::int64_t n = T2_ - q2;
    if (n <= 0) return;
    std::size_t len = static_cast<std::size_t>((n + 1) / 2);
    ++points_;
    if (*std::max_element(x_.begin(), x_.end()) > cap_ - 1) ++shell_hits_;
    if (!materialized_[r_] || states_[r_].size() < len) from_scratch(r_, len);
    std::int64_t parity = 0;
    for (int i = 0; i < r_; ++i) parity += d_.c[i] * x_[i];
    bool negative = (parity % 2) != 0;
    if (res_.empty()) {
      res_lo_ = q2;
      res_.assign(static_cast<std::size_t>(T2_ - q2), BigInt(0));
    } else if (q2 < res_lo_) {
      res_.insert(res_.begin(), static_cast<std::size_t>(res_lo_ - q2), BigInt(0));
      res_lo_ = q2;
    }
    const auto& s = states_[r_];
    std::size_t off = static_cast<std::size_t>(q2 - res_lo_);
    for (std::size_t k = 0; k < len; ++k) {
      if (negative) {
        res_[off + 2 * k] -= s[k];
      } else {
        res_[off + 2 * k] += s[k];
      }
    }
  }

  void visit(int depth) {
    if (++nodes_ > budget_)
      fail(ErrorKind::BudgetExceeded, "enumeration budget exceeded at shell radius " + std::to_string(cap_ - 1));
    std::vector<std::int64_t> lo, hi;
    if (!box(depth, lo, hi)) return;
    if (depth == r_) {
      leaf();
      return;
    }
    std::int64_t b0 = bound(depth, lo, hi);
    if (b0 != kNegInf && b0 >= TW_) return;
    std::size_t len = b0 == kNegInf ? 0 : length_for(b0);
    const auto& forms = forms_at_[depth];
    std::vector<std::int64_t> ell(forms.size());
    bool first = true;
    for (std::int64_t v = lo[depth]; v <= hi[depth]; ++v) {
      std::vector<std::int64_t> lo2 = lo;
      lo2[depth] = v;
      std::int64_t bv = bound(depth, lo2, hi);
      if (bv != kNegInf && bv >= TW_) break;
      x_[depth] = v;
      if (b0 == kNegInf) {
        materialized_[depth + 1] = false;
      } else if (first || !materialized_[depth + 1]) {
        if (materialized_[depth] && states_[depth].size() >= len) {
          auto& s = states_[depth + 1];
          s.assign(states_[depth].begin(), states_[depth].begin() + static_cast<std::ptrdiff_t>(len));
          for (std::size_t f = 0; f < forms.size(); ++f) {
            std::int64_t l = form(forms[f]);
            for (std::int64_t i = 1; i <= l && static_cast<std::size_t>(i) < len; ++i)
              div_one_minus(s, static_cast<std::size_t>(i));
          }
          materialized_[depth + 1] = true;
        } else {
          from_scratch(depth + 1, len);
        }
      } else {
        auto& s = states_[depth + 1];
        for (std::size_t f = 0; f < forms.size(); ++f) {
          std::int64_t a = d_.denom[forms[f]][depth];
          std::int64_t l_new = form(forms[f]);
          std::int64_t l_old = l_new - a;
          if (a > 0) {
            for (std::int64_t i = l_old + 1; i <= l_new; ++i)
              if (static_cast<std::size_t>(i) < s.size()) div_one_minus(s, static_cast<std::size_t>(i));
          } else {
            for (std::int64_t i = l_new + 1; i <= l_old; ++i)
              if (i > 0 && static_cast<std::size_t>(i) < s.size()) mul_one_minus(s, static_cast<std::size_t>(i));
          }
        }
      }
      first = false;
      visit(depth + 1);
    }
    x_[depth] = 0;
  }

  const NahmDatum& d_;
  int r_;
  std::int64_t cap_;
  std::uint64_t budget_;
  std::int64_t L_ = 1, TW_ = 0, T2_ = 0;
  std::vector<std::int64_t> diag_, lin_;
  std::vector<std::vector<std::int64_t>> off_;
  std::vector<Row> rows_;
  std::vector<std::vector<std::size_t>> forms_at_;
  std::vector<std::int64_t> x_;
  std::vector<std::vector<BigInt>> states_;
  std::vector<bool> materialized_;
  std::vector<BigInt> res_;
  std::int64_t res_lo_ = 0;
  std::int64_t shell_hits_ = 0;
  std::uint64_t points_ = 0, nodes_ = 0;
};

TruncatedSeries apply_prefactor(const TruncatedSeries& s, const NahmPrefactor& p) {
  Rational t = s.trunc_order();
  TruncatedSeries out = s;
  if (p.qinf != 0) out = out * q_infty(t).ipow(p.qinf);
  if (p.one_minus_q != 0)
    out = out * TruncatedSeries::from_poly(LaurentPoly(1) - LaurentPoly::q_power(1), t).ipow(p.one_minus_q);
  if (p.unit < 0) out = -out;
  if (p.shift != 0) out = out.shifted(p.shift);
  return out;
}

// (q)_{4N+1-n} / ((q)_n^3 (q)_{N-n}^4) mod q^t, by in-place factor updates.
std::vector<BigInt> six_j_ratio(std::int64_t N, std::int64_t n, std::size_t t) {
  std::vector<BigInt> s(t, BigInt(0));
  if (t == 0) return s;
  s[0] = 1;
  for (std::int64_t i = 1; i <= 4 * N + 1 - n && static_cast<std::size_t>(i) < t; ++i)
    mul_one_minus(s, static_cast<std::size_t>(i));
  for (int rep = 0; rep < 3; ++rep)
    for (std::int64_t i = 1; i <= n && static_cast<std::size_t>(i) < t; ++i) div_one_minus(s, static_cast<std::size_t>(i));
  for (int rep = 0; rep < 4; ++rep)
    for (std::int64_t i = 1; i <= N - n && static_cast<std::size_t>(i) < t; ++i)
      div_one_minus(s, static_cast<std::size_t>(i));
  return s;
}

// (1/(1-q)) sum_n (-1)^n q^{(3n^2+n)/2} six_j_ratio, dense mod q^t.
std::vector<BigInt> six_j_dense(std::int64_t N, std::size_t t) {
  std::vector<BigInt> acc(t, BigInt(0));
  for (std::int64_t n = 0; n <= N; ++n) {
    std::int64_t e = (3 * n * n + n) / 2;
    if (static_cast<std::size_t>(e) >= t) break;
    auto r = six_j_ratio(N, n, t - static_cast<std::size_t>(e));
    for (std::size_t k = 0; k < r.size(); ++k) {
      if (n % 2) {
        acc[k + static_cast<std::size_t>(e)] -= r[k];
      } else {
        acc[k + static_cast<std::size_t>(e)] += r[k];
      }
    }
  }
  div_one_minus(acc, 1);
  return acc;
}

std::int64_t trunc_int(const Rational& trunc) {
  BigInt c;
  mpz_cdiv_q(c.get_mpz_t(), trunc.get_num().get_mpz_t(), trunc.get_den().get_mpz_t());
  return std::max<std::int64_t>(c.get_si(), 0);
}

// sum_n (-1)^n q^{(3n^2+n)/2}/(q)_n^3 mod q^t.
TruncatedSeries six_j_core(std::int64_t t) {
  std::vector<BigInt> acc(static_cast<std::size_t>(t), BigInt(0));
  for (std::int64_t n = 0;; ++n) {
    std::int64_t e = (3 * n * n + n) / 2;
    if (e >= t) break;
    std::vector<BigInt> s(static_cast<std::size_t>(t - e), BigInt(0));
    s[0] = 1;
    for (int rep = 0; rep < 3; ++rep)
      for (std::int64_t i = 1; i <= n && i < t - e; ++i) div_one_minus(s, static_cast<std::size_t>(i));
    for (std::size_t k = 0; k < s.size(); ++k) {
      if (n % 2) {
        acc[k + static_cast<std::size_t>(e)] -= s[k];
      } else {
        acc[k + static_cast<std::size_t>(e)] += s[k];
      }
    }
  }
  return TruncatedSeries::from_coeffs(0, std::move(acc), t);
}

}  // namespace

// ------------------------------------------------------------------ datum I/O

NahmDatum NahmDatum::parse(const std::string& text) {
  NahmDatum d;
  std::istringstream is(text);
  std::string line, section;
  bool have_rank = false;
  auto row_ints = [&](const std::vector<std::string>& tk) {
    std::vector<std::int64_t> v;
    for (const auto& t : tk) v.push_back(parse_int(t));
    return v;
  };
  auto row_rats = [&](const std::vector<std::string>& tk) {
    std::vector<Rational> v;
    for (const auto& t : tk) v.push_back(parse_rational(t));
    return v;
  };
  while (std::getline(is, line)) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    auto tk = tokens_of(line);
    if (tk.empty()) continue;
    const std::string& key = tk[0];
    if (key == "name") {
      d.name = tk.size() > 1 ? tk[1] : "";
      continue;
    }
    if (key == "vars") {
      d.vars.assign(tk.begin() + 1, tk.end());
      continue;
    }
    if (key == "rank") {
      if (tk.size() != 2) fail(ErrorKind::InvalidInput, "rank needs one value");
      d.rank = static_cast<int>(parse_int(tk[1]));
      have_rank = true;
      continue;
    }
    if (key == "A" || key == "b" || key == "c" || key == "eq" || key == "ineq" || key == "denom" ||
        key == "prefactor") {
      section = key;
      if (tk.size() > 1) fail(ErrorKind::InvalidInput, "section header '" + key + "' takes no values");
      continue;
    }
    if (section.empty()) fail(ErrorKind::InvalidInput, "data outside a section: " + line);
    if (section == "A") {
      d.A.push_back(row_rats(tk));
    } else if (section == "b") {
      if (!d.b.empty()) fail(ErrorKind::InvalidInput, "b given twice");
      d.b = row_rats(tk);
    } else if (section == "c") {
      if (!d.c.empty()) fail(ErrorKind::InvalidInput, "c given twice");
      d.c = row_ints(tk);
    } else if (section == "eq") {
      d.eq.push_back(row_ints(tk));
    } else if (section == "ineq") {
      d.ineq.push_back(row_ints(tk));
    } else if (section == "denom") {
      d.denom.push_back(row_ints(tk));
    } else if (section == "prefactor") {
      if (key == "qinf" && tk.size() == 2) {
        d.prefactor.qinf = static_cast<int>(parse_int(tk[1]));
      } else if (key == "one_minus_q" && tk.size() == 2) {
        d.prefactor.one_minus_q = static_cast<int>(parse_int(tk[1]));
      } else if (key == "unit" && tk.size() == 3) {
        d.prefactor.unit = static_cast<int>(parse_int(tk[1]));
        d.prefactor.shift = parse_rational(tk[2]);
      } else {
        fail(ErrorKind::InvalidInput, "bad prefactor line: " + line);
      }
    }
  }
  if (!have_rank) fail(ErrorKind::InvalidInput, "missing rank");
  if (d.c.empty()) d.c.assign(static_cast<std::size_t>(std::max(d.rank, 0)), 0);
  d.validate();
  return d;
}

NahmDatum NahmDatum::load(const std::filesystem::path& path) {
  std::ifstream f(path);
  if (!f) fail(ErrorKind::InvalidInput, "cannot open " + path.string());
  std::stringstream ss;
  ss << f.rdbuf();
  NahmDatum d = parse(ss.str());
  if (d.name.empty()) d.name = path.stem().string();
  return d;
}

std::string NahmDatum::serialize() const {
  std::ostringstream os;
  if (!name.empty()) os << "name " << name << "\n";
  if (!vars.empty()) {
    os << "vars";
    for (const auto& v : vars) os << ' ' << v;
    os << "\n";
  }
  os << "rank " << rank << "\n";
  auto rats = [&](const std::vector<Rational>& v) {
    for (std::size_t i = 0; i < v.size(); ++i) os << (i ? " " : "") << to_string(v[i]);
    os << "\n";
  };
  auto ints = [&](const std::vector<std::int64_t>& v) {
    for (std::size_t i = 0; i < v.size(); ++i) os << (i ? " " : "") << v[i];
    os << "\n";
  };
  os << "A\n";
  for (const auto& row : A) rats(row);
  os << "b\n";
  rats(b);
  os << "c\n";
  ints(c);
  os << "eq\n";
  for (const auto& row : eq) ints(row);
  os << "ineq\n";
  for (const auto& row : ineq) ints(row);
  os << "denom\n";
  for (const auto& row : denom) ints(row);
  os << "prefactor\n";
  os << "qinf " << prefactor.qinf << "\n";
  os << "one_minus_q " << prefactor.one_minus_q << "\n";
  os << "unit " << prefactor.unit << ' ' << to_string(prefactor.shift) << "\n";
  return os.str();
}

void NahmDatum::validate() const {
  auto bad = [](const std::string& m) { fail(ErrorKind::InvalidInput, m); };
  if (rank <= 0) bad("rank must be positive");
  auto r = static_cast<std::size_t>(rank);
  if (A.size() != r) bad("A needs rank rows");
  for (const auto& row : A)
    if (row.size() != r) bad("A rows need rank entries");
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < r; ++j)
      if (A[i][j] != A[j][i]) bad("A is not symmetric");
  if (b.size() != r) bad("b needs rank entries");
  if (c.size() != r) bad("c needs rank entries");
  for (const auto* rows : {&eq, &ineq, &denom})
    for (const auto& row : *rows)
      if (row.size() != r) bad("constraint and form rows need rank entries");
  if (!vars.empty() && vars.size() != r) bad("vars needs rank names");
  if (prefactor.unit != 1 && prefactor.unit != -1) bad("prefactor unit must be 1 or -1");
}

Rational NahmDatum::exponent(const std::vector<std::int64_t>& n) const {
  Rational s = 0;
  for (int i = 0; i < rank; ++i) {
    s += b[i] * big(n[i]);
    for (int j = 0; j < rank; ++j) s += A[i][j] * big(n[i]) * big(n[j]) / 2;
  }
  return s;
}

bool NahmDatum::in_cone(const std::vector<std::int64_t>& n) const {
  for (int i = 0; i < rank; ++i)
    if (n[i] < 0) return false;
  auto dot = [&](const std::vector<std::int64_t>& row) {
    std::int64_t s = 0;
    for (int i = 0; i < rank; ++i) s += row[i] * n[i];
    return s;
  };
  for (const auto& row : eq)
    if (dot(row) != 0) return false;
  for (const auto& row : ineq)
    if (dot(row) < 0) return false;
  return true;
}

NahmDatum NahmDatum::permuted(const std::vector<int>& order) const {
  if (order.size() != static_cast<std::size_t>(rank)) fail(ErrorKind::InvalidInput, "permutation size");
  std::vector<int> seen(rank, 0);
  for (int o : order) {
    if (o < 0 || o >= rank || seen[o]++) fail(ErrorKind::InvalidInput, "not a permutation");
  }
  NahmDatum p = *this;
  for (int i = 0; i < rank; ++i) {
    p.b[i] = b[order[i]];
    p.c[i] = c[order[i]];
    if (!vars.empty()) p.vars[i] = vars[order[i]];
    for (int j = 0; j < rank; ++j) p.A[i][j] = A[order[i]][order[j]];
  }
  auto perm_rows = [&](const std::vector<std::vector<std::int64_t>>& src, std::vector<std::vector<std::int64_t>>& dst) {
    for (std::size_t k = 0; k < src.size(); ++k)
      for (int i = 0; i < rank; ++i) dst[k][i] = src[k][order[i]];
  };
  perm_rows(eq, p.eq);
  perm_rows(ineq, p.ineq);
  perm_rows(denom, p.denom);
  return p;
}

NahmDatum shipped_datum(const std::string& name, const std::filesystem::path& data_dir) {
  return NahmDatum::load(data_dir / ("nahm_" + name + ".nahm"));
}

// ------------------------------------------------------------------ regularity

RegularityReport regularity_check(const NahmDatum& d) {
  d.validate();
  RegularityReport rep;
  const int r = d.rank;
  std::vector<std::vector<Rational>> eqs, ineqs;
  auto to_rat = [](const std::vector<std::int64_t>& row) {
    std::vector<Rational> v;
    for (auto x : row) v.emplace_back(big(x));
    return v;
  };
  for (const auto& row : d.eq) eqs.push_back(to_rat(row));
  for (const auto& row : d.ineq) ineqs.push_back(to_rat(row));
  for (int i = 0; i < r; ++i) {
    std::vector<Rational> e(r, Rational(0));
    e[i] = 1;
    ineqs.push_back(e);
  }
  auto dot = [&](const std::vector<Rational>& a, const std::vector<Rational>& v) {
    Rational s = 0;
    for (int i = 0; i < r; ++i) s += a[i] * v[i];
    return s;
  };
  auto admissible = [&](const std::vector<Rational>& v) {
    for (const auto& e : eqs)
      if (dot(e, v) != 0) return false;
    for (const auto& g : ineqs)
      if (dot(g, v) < 0) return false;
    return std::any_of(v.begin(), v.end(), [](const Rational& x) { return x != 0; });
  };
  // Extreme rays: one-dimensional solutions of E v = 0 plus a set of active inequalities.
  const std::size_t m = ineqs.size();
  std::vector<int> pick;
  std::function<void(std::size_t)> choose = [&](std::size_t start) {
    std::vector<std::vector<Rational>> sys = eqs;
    for (int p : pick) sys.push_back(ineqs[p]);
    auto ns = nullspace(sys, r);
    if (ns.size() == 1) {
      for (int sgn : {1, -1}) {
        std::vector<Rational> v = ns[0];
        for (auto& x : v) x *= sgn;
        if (!admissible(v)) continue;
        v = primitive(v);
        if (std::find(rep.rays.begin(), rep.rays.end(), v) == rep.rays.end()) rep.rays.push_back(v);
      }
      return;
    }
    if (ns.empty()) return;
    for (std::size_t i = start; i < m; ++i) {
      pick.push_back(static_cast<int>(i));
      choose(i + 1);
      pick.pop_back();
    }
  };
  choose(0);
  for (const auto& v : rep.rays) {
    Rational a = quad(d, v, v);
    if (a < 0 || (a == 0 && linear(d, v) <= 0)) {
      rep.regular = false;
      rep.witness = v;
      rep.reason = "Q does not grow along the ray " + vec_string(v);
      return rep;
    }
  }
  for (std::size_t i = 0; i < rep.rays.size(); ++i)
    for (std::size_t j = i + 1; j < rep.rays.size(); ++j) {
      const auto& u = rep.rays[i];
      const auto& v = rep.rays[j];
      Rational a = quad(d, u, u), c = quad(d, v, v), bb = quad(d, u, v);
      if (bb >= 0 || bb * bb <= a * c) continue;
      Rational s, t;
      if (c > 0) {
        s = c;
        t = -bb;
      } else if (a > 0) {
        s = -bb;
        t = a;
      } else {
        s = 1;
        t = 1;
      }
      std::vector<Rational> w(r);
      for (int k = 0; k < r; ++k) w[k] = s * u[k] + t * v[k];
      rep.regular = false;
      rep.witness = primitive(w);
      rep.reason = "Q is unbounded below on the face spanned by " + vec_string(u) + " and " + vec_string(v);
      return rep;
    }
  return rep;
}

// ------------------------------------------------------------------ evaluation

NahmEvaluation evaluate(const NahmDatum& d, const Rational& trunc, const NahmOptions& opts) {
  d.validate();
  if (opts.check_regularity) {
    auto reg = regularity_check(d);
    if (!reg.regular) fail(ErrorKind::InvalidInput, "datum is not regular: " + reg.reason);
  }
  NahmDatum work = d.permuted(search_order(d));
  std::int64_t radius = opts.radius > 0 ? opts.radius : 2 * trunc_int(trunc) + 2;
  std::uint64_t spent = 0;
  for (;;) {
    Enumerator en(work, trunc, radius + 1, opts.node_budget - std::min(spent, opts.node_budget));
    en.run();
    spent += en.nodes();
    if (en.shell_hits() > 0) {
      radius *= 2;
      continue;
    }
    NahmEvaluation out;
    out.radius = radius;
    out.points = en.points();
    out.nodes = en.nodes();
    TruncatedSeries s;
    if (en.result().empty()) {
      s = TruncatedSeries::zero(en.trunc2(), 2);
    } else {
      s = TruncatedSeries::from_coeffs(en.result_lo(), en.result(), en.trunc2(), 2);
    }
    s = apply_prefactor(s, d.prefactor).normalized();
    out.integral = s.den() == 1;
    out.series = s;
    return out;
  }
}

Phi85 phi_85(const Rational& trunc, const std::filesystem::path& data_dir, const NahmOptions& opts) {
  Phi85 out;
  out.evaluation = evaluate(shipped_datum("8_5", data_dir), trunc, opts);
  out.phi = out.evaluation.series;
  out.quotient = out.phi / q_infty(trunc);
  return out;
}

// ------------------------------------------------------------------ 6j family

TruncatedSeries six_j_plus_truncated(std::int64_t N, const Rational& trunc) {
  if (N < 0) fail(ErrorKind::InvalidInput, "six_j_plus needs N >= 0");
  std::int64_t t = trunc_int(trunc);
  return TruncatedSeries::from_coeffs(0, six_j_dense(N, static_cast<std::size_t>(t)), t);
}

LaurentPoly six_j_plus(std::int64_t N) {
  if (N < 0) fail(ErrorKind::InvalidInput, "six_j_plus needs N >= 0");
  auto deg = [](std::int64_t m) { return m * (m + 1) / 2; };
  std::int64_t top = 0;
  for (std::int64_t n = 0; n <= N; ++n)
    top = std::max(top, (3 * n * n + n) / 2 + deg(4 * N + 1 - n) - 3 * deg(n) - 4 * deg(N - n));
  // The numerator sum has degree <= top; after dividing by 1-q the series is a
  // polynomial exactly when its coefficient at q^top vanishes.
  auto s = six_j_dense(N, static_cast<std::size_t>(top + 2));
  if (s[static_cast<std::size_t>(top)] != 0 || s[static_cast<std::size_t>(top + 1)] != 0)
    fail(ErrorKind::PropertyViolation, "six_j_plus: sum not divisible by 1-q");
  std::vector<LaurentPoly::Term> terms;
  for (std::int64_t k = 0; k < top; ++k)
    if (s[static_cast<std::size_t>(k)] != 0) terms.emplace_back(2 * k, s[static_cast<std::size_t>(k)]);
  LaurentPoly p = LaurentPoly::from_terms(std::move(terms));
  if (p.is_zero() || p.min_twice_exp() != 0 || p.coeff(0) != 1)
    fail(ErrorKind::PropertyViolation, "six_j_plus(" + std::to_string(N) + ") is not in 1 + qZ[q]");
  return p;
}

SixJSeries phi_6j0(const Rational& trunc) {
  std::int64_t t = trunc_int(trunc);
  TruncatedSeries core = six_j_core(t);
  TruncatedSeries qi = q_infty(Rational(big(t)));
  TruncatedSeries one_minus = TruncatedSeries::from_poly(LaurentPoly(1) - LaurentPoly::q_power(1), Rational(big(t)));
  SixJSeries out;
  out.Phi = core / (one_minus * qi.pow(3));
  out.phi = qi * core;
  return out;
}

BivariateSeries f_6j(std::size_t x_order, const Rational& trunc) {
  if (x_order == 0) fail(ErrorKind::InvalidInput, "x_order must be positive");
  std::int64_t t = trunc_int(trunc);
  auto K = static_cast<std::int64_t>(x_order);
  // Valuation of the x^j coefficient of term n is at least (3n^2+n)/2 - n j.
  BivariateSeries total;
  for (std::size_t j = 0; j < x_order; ++j) total.coeffs.push_back(TruncatedSeries::zero(t));
  for (std::int64_t n = 0;; ++n) {
    std::int64_t e = (3 * n * n + n) / 2;
    if (e - n * (K - 1) >= t) break;
    // Slack for the precision lost to negative exponents inside the products.
    Rational inner(big(t - e + 2 * n * (K - 1) + 1));
    BivariateSeries a = pochhammer_x(-n, x_order, inner);
    BivariateSeries a4 = a * a * a * a;
    BivariateSeries den;
    for (std::size_t j = 0; j < x_order; ++j) {
      if (j % 4 != 0) {
        den.coeffs.push_back(TruncatedSeries::zero_at(inner));
        continue;
      }
      std::int64_t k = static_cast<std::int64_t>(j / 4);
      std::int64_t sh = (1 - n) * k;
      std::int64_t need = std::max<std::int64_t>(1, inner.get_num().get_si() - sh);
      TruncatedSeries inv = pochhammer(k, Rational(big(need))).inverse().shifted(Rational(big(sh)));
      den.coeffs.push_back(inv.truncated(inner));
    }
    BivariateSeries g = a4 * den;
    std::int64_t need = std::max<std::int64_t>(1, t - e + n * (K - 1) + 1);
    TruncatedSeries pre = pochhammer(n, Rational(big(need))).pow(3).inverse().shifted(Rational(big(e)));
    if (n % 2) pre = -pre;
    for (std::size_t j = 0; j < x_order; ++j) total.coeffs[j] = total.coeffs[j] + (pre * g[j]).truncated(Rational(big(t)));
  }
  TruncatedSeries one_minus = TruncatedSeries::from_poly(LaurentPoly(1) - LaurentPoly::q_power(1), Rational(big(t)));
  TruncatedSeries pref = (one_minus * q_infty(Rational(big(t))).pow(3)).inverse();
  for (auto& c : total.coeffs) c = (c * pref).truncated(Rational(big(t)));
  return total;
}

}  // namespace qknot
