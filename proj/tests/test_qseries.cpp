#include <doctest.h>

#include <random>

#include "qknot/qseries.hpp"

using namespace qknot;

namespace {

TruncatedSeries series(std::vector<long> c, std::int64_t trunc) {
  std::vector<BigInt> v(c.begin(), c.end());
  return TruncatedSeries::from_coeffs(0, v, trunc);
}

LaurentPoly random_poly(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> len(0, 5), ex(-7, 7), co(-9, 9);
  std::vector<LaurentPoly::Term> t;
  int n = len(rng);
  for (int i = 0; i < n; ++i) t.emplace_back(ex(rng), BigInt(co(rng)));
  return LaurentPoly::from_terms(t);
}

}  // namespace

TEST_CASE("geometric series times 1-q") {
  auto geo = series({1, 1, 1, 1, 1}, 5);
  auto r = series({1, -1}, 5) * geo;
  CHECK(compare(r, TruncatedSeries::one(5)).equal);
  CHECK(r.trunc_order() == 5);
}

TEST_CASE("half-integer square") {
  LaurentPoly u = LaurentPoly::parse("q^{1/2}+q^{-1/2}");
  CHECK((u * u).to_string() == "q+2+q^{-1}");
  CHECK(u.to_string() == "q^{1/2}+q^{-1/2}");
  CHECK(LaurentPoly::parse("-q^{-4}+q^{-3}+q^{-1}").to_string() == "q^{-1}+q^{-3}-q^{-4}");
}

TEST_CASE("polynomial printing and parsing round trip") {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 50; ++i) {
    LaurentPoly p = random_poly(rng);
    CHECK(LaurentPoly::parse(p.to_string()) == p);
  }
}

TEST_CASE("ring axioms on random Laurent polynomials") {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 200; ++i) {
    auto a = random_poly(rng), b = random_poly(rng), c = random_poly(rng);
    CHECK((a * b) * c == a * (b * c));
    CHECK(a * (b + c) == a * b + a * c);
    CHECK(a + b == b + a);
    CHECK(a * b == b * a);
    CHECK(a - a == LaurentPoly());
    if (!b.is_zero()) CHECK((a * b).exact_div(b) == a);
  }
}

TEST_CASE("inexact division is reported") {
  LaurentPoly a = LaurentPoly::parse("q^2+1");
  LaurentPoly b = LaurentPoly::parse("q+1");
  CHECK_THROWS_AS(a.exact_div(b), Error);
}

TEST_CASE("pochhammer values") {
  CHECK(compare(pochhammer(0, 10), TruncatedSeries::one(10)).equal);
  CHECK(compare(pochhammer(1, 10), series({1, -1}, 10)).equal);
  CHECK(compare(pochhammer(3, 10), series({1, -1, -1, 0, 1, 1, -1}, 10)).equal);
  CHECK(pochhammer_poly(3).to_string() == "-q^6+q^5+q^4-q^2-q+1");
  for (int n = 0; n <= 30; ++n) {
    auto lhs = pochhammer(n, 120) * series({1}, 120) - pochhammer(n, 120).shifted(n + 1);
    CHECK(compare(lhs, pochhammer(n + 1, 120)).equal);
  }
}

TEST_CASE("q_infty") {
  CHECK(compare(q_infty(6), series({1, -1, -1, 0, 0, 1}, 6)).equal);
  CHECK(compare(q_infty(1), TruncatedSeries::one(1)).equal);
  CHECK(compare(q_infty(50), pochhammer(50, 50)).equal);
  auto prod = q_infty(50) * q_infty(50).inverse();
  CHECK(compare(prod, TruncatedSeries::one(50)).equal);
  // Pentagonal number theorem.
  std::vector<BigInt> pent(200);
  for (long k = -20; k <= 20; ++k) {
    long e = k * (3 * k - 1) / 2;
    if (e < 200) pent[e] += (k % 2 == 0) ? 1 : -1;
  }
  CHECK(compare(q_infty(200), TruncatedSeries::from_coeffs(0, pent, 200)).equal);
}

TEST_CASE("inverse of units and non-units") {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> co(-5, 5);
  for (int i = 0; i < 30; ++i) {
    std::vector<long> c(40);
    for (auto& x : c) x = co(rng);
    c[0] = (i % 2) ? 1 : -1;
    auto s = series(c, 40).shifted(i % 3 - 1);
    CHECK(compare(s * s.inverse(), TruncatedSeries::one(40)).equal);
  }
  CHECK_THROWS_AS(series({2, 1}, 5).inverse(), Error);
}

TEST_CASE("truncation bookkeeping") {
  auto a = series({1, 2, 3}, 3);
  auto b = TruncatedSeries::one(10).shifted(2);  // q^2 mod q^12
  auto p = a * b;
  CHECK(p.trunc_order() == 5);
  auto s = a + TruncatedSeries::one(10);
  CHECK(s.trunc_order() == 3);
}

TEST_CASE("pochhammer_x") {
  auto f = pochhammer_x(0, 4, 30);
  CHECK(compare(f[0], TruncatedSeries::one(30)).equal);
  auto geo = -TruncatedSeries::from_coeffs(0, std::vector<BigInt>(30, BigInt(1)), 30);
  CHECK(compare(f[1], geo).equal);
  // Substituting x = q gives (q)_inf.
  auto g = pochhammer_x(0, 30, 30);
  TruncatedSeries acc = TruncatedSeries::zero(30);
  for (std::size_t k = 0; k < g.x_order(); ++k) acc += g[k].shifted(static_cast<long>(k));
  CHECK(compare(acc.truncated(30), q_infty(30)).equal);
  // Negative shift keeps negative exponents.
  auto h = pochhammer_x(-2, 3, 10);
  CHECK(h[1].valuation() == -2);
}

TEST_CASE("h series") {
  CHECK(h_series(1, 200).is_zero());
  CHECK(compare(h_series(2, 200), TruncatedSeries::one(200)).equal);
  CHECK(compare(h_series(3, 200), q_infty(200)).equal);
  for (int b = 1; b <= 8; ++b) {
    std::int64_t w = h_series_window(b, 80);
    CHECK(compare(h_series_window_sum(b, 80, w), h_series_window_sum(b, 80, w + 5)).equal);
  }
}

TEST_CASE("series serialization round trip") {
  auto s = (q_infty(30).inverse() * q_infty(30).shifted(Rational(1, 2))).shifted(-3);
  auto t = TruncatedSeries::deserialize(s.serialize());
  CHECK(compare(s, t).equal);
  CHECK(t.trunc_order() == s.trunc_order());
}
