// Colored Jones from braid closures with the U_q(sl2) R-matrix.
//
// V_N has basis v_0..v_m (m = N-1), K v_p = s^{m-2p} v_p,
// E v_p = [m-p+1] v_{p-1}, F v_p = [p+1] v_{p+1}. The braiding is tau o R with
// R = s^{H(x)H/2} sum_n s^{n(n-1)/2} (s-s^{-1})^n / [n]! E^n (x) F^n.
// Internally every polynomial is in w = s^{1/2}.

#include <unordered_map>

#include "qknot/knot_diagram.hpp"

namespace qknot {

namespace {

// Exponents in this file count powers of w.
LaurentPoly wpow(std::int64_t e) { return LaurentPoly::monomial(1, e); }

// [n] in s, as a polynomial in w.
LaurentPoly qint(int n) {
  std::vector<LaurentPoly::Term> t;
  for (int k = 0; k < n; ++k) t.emplace_back(2 * (n - 1 - 2 * k), BigInt(1));
  return LaurentPoly::from_terms(std::move(t));
}

LaurentPoly qbinom(int a, int b) {
  LaurentPoly num(1), den(1);
  for (int i = 1; i <= b; ++i) {
    num *= qint(a - b + i);
    den *= qint(i);
  }
  return num.exact_div(den);
}

struct RTables {
  int m = 0;
  // pos[p][r] = list of (n, coefficient): c(v_p (x) v_r) = sum coef v_{r+n} (x) v_{p-n}
  std::vector<std::vector<std::vector<std::pair<int, LaurentPoly>>>> pos, neg;
};

RTables make_tables(int m) {
  RTables t;
  t.m = m;
  const LaurentPoly diff = wpow(2) - wpow(-2);
  t.pos.assign(m + 1, std::vector<std::vector<std::pair<int, LaurentPoly>>>(m + 1));
  t.neg = t.pos;
  for (int p = 0; p <= m; ++p)
    for (int r = 0; r <= m; ++r) {
      for (int n = 0; n <= std::min(p, m - r); ++n) {
        LaurentPoly c = diff.pow(static_cast<unsigned>(n)) * wpow(n * (n - 1));
        for (int i = 1; i <= n; ++i) c *= qint(m - p + i);
        c *= qbinom(r + n, n);
        c *= wpow(static_cast<std::int64_t>(m - 2 * (p - n)) * (m - 2 * (r + n)));
        t.pos[p][r].emplace_back(n, std::move(c));
      }
      // c^{-1}(v_p (x) v_r) = sum coef v_{r-n} (x) v_{p+n}
      for (int n = 0; n <= std::min(r, m - p); ++n) {
        LaurentPoly c = diff.pow(static_cast<unsigned>(n)) * wpow(-n * (n - 1));
        if (n % 2) c = -c;
        for (int i = 1; i <= n; ++i) c *= qint(m - r + i);
        c *= qbinom(p + n, n);
        c *= wpow(-static_cast<std::int64_t>(m - 2 * r) * (m - 2 * p));
        t.neg[p][r].emplace_back(n, std::move(c));
      }
    }
  return t;
}

using Vec = std::unordered_map<std::uint64_t, LaurentPoly>;

struct Layout {
  int base;
  int strands;
  std::vector<std::uint64_t> place;  // base^i
  int digit(std::uint64_t idx, int i) const { return static_cast<int>((idx / place[i]) % base); }
};

Vec apply_generator(const Vec& v, int g, const RTables& t, const Layout& L) {
  const int i = std::abs(g) - 1;
  Vec out;
  out.reserve(v.size() * 2);
  for (const auto& [idx, coef] : v) {
    const int p = L.digit(idx, i), r = L.digit(idx, i + 1);
    const std::uint64_t rest = idx - p * L.place[i] - r * L.place[i + 1];
    const auto& entries = g > 0 ? t.pos[p][r] : t.neg[p][r];
    for (const auto& [n, c] : entries) {
      int a = g > 0 ? r + n : r - n;  // new digit at position i
      int b = g > 0 ? p - n : p + n;  // new digit at position i+1
      std::uint64_t j = rest + a * L.place[i] + b * L.place[i + 1];
      auto& slot = out[j];
      slot += coef * c;
    }
  }
  for (auto it = out.begin(); it != out.end();) it = it->second.is_zero() ? out.erase(it) : std::next(it);
  return out;
}

// Closure of strands 1..k-1 of the braid acting on v_0 (x) e_J; returns the
// scalar by which the resulting (1,1)-tangle acts.
LaurentPoly partial_trace(const BraidWord& b, const RTables& t, int pivot_sign) {
  const int m = t.m, k = b.strands;
  Layout L{m + 1, k, {}};
  std::uint64_t pl = 1;
  for (int i = 0; i < k; ++i) {
    L.place.push_back(pl);
    pl *= static_cast<std::uint64_t>(m + 1);
  }
  LaurentPoly total;
  const std::uint64_t count = pl / static_cast<std::uint64_t>(m + 1);
  for (std::uint64_t J = 0; J < count; ++J) {
    std::uint64_t idx = J * static_cast<std::uint64_t>(m + 1);  // digit 0 is v_0
    Vec v;
    v[idx] = LaurentPoly(1);
    for (int g : b.word) v = apply_generator(v, g, t, L);
    auto it = v.find(idx);
    if (it == v.end()) continue;
    std::int64_t e = 0;
    for (int i = 1; i < k; ++i) e += 2 * (m - 2 * L.digit(idx, i));  // K = s^{m-2p} = w^{2(m-2p)}
    total += it->second * wpow(pivot_sign * e);
  }
  return total;
}

// Pivotal element K used for the quantum trace.
constexpr int kPivotSign = 1;

}  // namespace

LaurentPoly normalized_colored_jones_braid(const BraidWord& braid, int N) {
  if (N < 1) fail(ErrorKind::InvalidInput, "color must be >= 1");
  if (braid.strands < 1) fail(ErrorKind::InvalidInput, "braid needs at least one strand");
  {
    // The closure must be a knot: the permutation is one cycle.
    std::vector<int> perm(static_cast<std::size_t>(braid.strands));
    for (int i = 0; i < braid.strands; ++i) perm[i] = i;
    for (int g : braid.word) {
      int i = std::abs(g) - 1;
      if (g == 0 || i + 1 >= braid.strands) fail(ErrorKind::InvalidInput, "braid generator out of range");
      std::swap(perm[i], perm[i + 1]);
    }
    int len = 1;
    for (int x = perm[0]; x != 0; x = perm[x]) ++len;
    if (len != braid.strands) fail(ErrorKind::InvalidInput, "braid closure is not a knot");
  }
  if (N == 1) return LaurentPoly(1);
  const RTables t = make_tables(N - 1);
  LaurentPoly z = partial_trace(braid, t, kPivotSign);
  // Framing correction: the closure of a single positive generator is an
  // unknot with writhe 1; its partial trace is the twist eigenvalue.
  BraidWord kink{2, {1}};
  LaurentPoly theta = partial_trace(kink, t, kPivotSign);
  if (theta.size() != 1 || theta.terms()[0].second != 1)
    fail(ErrorKind::Internal, "twist eigenvalue is not a unit monomial");
  int w = 0;
  for (int g : braid.word) w += g > 0 ? 1 : -1;
  LaurentPoly r = z.shifted_twice(-w * theta.terms()[0].first);
  // w = q^{1/4} with the orientation matching the bracket engine's q.
  std::vector<LaurentPoly::Term> terms;
  for (const auto& [e, c] : r.terms()) {
    if (e % 4 != 0) fail(ErrorKind::Internal, "normalized colored Jones has fractional exponents");
    terms.emplace_back(e / 2, c);
  }
  return LaurentPoly::from_terms(std::move(terms));
}

}  // namespace qknot
