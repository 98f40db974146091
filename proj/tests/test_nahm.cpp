#include <doctest.h>

#include <fstream>
#include <sstream>

#include "qknot/nahm.hpp"

using namespace qknot;

namespace {

TruncatedSeries series(std::vector<long> c, std::int64_t trunc) {
  std::vector<BigInt> v(c.begin(), c.end());
  return TruncatedSeries::from_coeffs(0, v, trunc);
}

NahmDatum rank_one(const std::string& a, const std::string& b) {
  return NahmDatum::parse("name t\nvars n\nrank 1\nA\n" + a + "\nb\n" + b + "\nc\n0\ndenom\n1\n");
}

}  // namespace

TEST_CASE("regularity") {
  CHECK(regularity_check(rank_one("1", "0")).regular);
  const RegularityReport bad = regularity_check(rank_one("0", "-1"));
  CHECK_FALSE(bad.regular);
  CHECK_FALSE(bad.reason.empty());
  CHECK(regularity_check(shipped_datum("8_5")).regular);
  bool refused = false;
  try {
    evaluate(rank_one("0", "-1"), Rational(10));
  } catch (const Error& e) {
    refused = e.kind() == ErrorKind::InvalidInput || e.kind() == ErrorKind::PropertyViolation;
  }
  CHECK(refused);
}

TEST_CASE("rank one sums") {
  // sum q^{n^2}/(q)_n is the Rogers-Ramanujan series.
  const NahmEvaluation ev = evaluate(rank_one("2", "0"), Rational(12));
  CHECK(compare(ev.series, series({1, 1, 1, 1, 2, 2, 3, 3, 4, 5, 6, 7}, 12)).equal);
  // sum q^{n(n+1)/2}/(q)_n = (-q; q)_inf.
  const NahmEvaluation distinct = evaluate(rank_one("1", "1/2"), Rational(10));
  CHECK(compare(distinct.series, series({1, 1, 1, 2, 2, 3, 4, 5, 6, 8}, 10)).equal);
}

TEST_CASE("shipped identities at small order") {
  const Rational t(20);
  CHECK(compare(evaluate(shipped_datum("3_1"), t).series, q_infty(t).ipow(-2)).equal);
  CHECK(compare(evaluate(shipped_datum("4_1"), t).series, q_infty(t).ipow(-3)).equal);
  CHECK(compare(evaluate(shipped_datum("6_3"), t).series, q_infty(t).ipow(-4)).equal);
}

TEST_CASE("order of variables does not matter") {
  const Rational t(15);
  for (const char* name : {"6_3", "8_5"}) {
    const NahmDatum d = shipped_datum(name);
    const TruncatedSeries ref = evaluate(d, t).series;
    std::vector<int> reversed(static_cast<std::size_t>(d.rank)), rotated(reversed.size());
    for (int i = 0; i < d.rank; ++i) {
      reversed[static_cast<std::size_t>(i)] = d.rank - 1 - i;
      rotated[static_cast<std::size_t>(i)] = (i + 1) % d.rank;
    }
    CHECK(compare(evaluate(d.permuted(reversed), t).series, ref).equal);
    CHECK(compare(evaluate(d.permuted(rotated), t).series, ref).equal);
  }
}

TEST_CASE("radius is sufficient") {
  const NahmDatum d = shipped_datum("4_1");
  const Rational t(15);
  const NahmEvaluation ev = evaluate(d, t);
  NahmOptions wide;
  wide.radius = 2 * ev.radius + 2;
  const NahmEvaluation again = evaluate(d, t, wide);
  CHECK(compare(again.series, ev.series).equal);
  CHECK(again.points == ev.points);
}

TEST_CASE("8_5 quotient") {
  const Phi85 p = phi_85(Rational(11));
  CHECK(compare(p.quotient, series({1, -1, 1, 0, -1, 1, 1, 0, -1, 0, 2}, 11)).equal);
}

TEST_CASE("tetrahedron sums") {
  CHECK(six_j_plus(0) == LaurentPoly(1));
  for (std::int64_t N = 1; N <= 4; ++N) {
    const LaurentPoly p = six_j_plus(N);
    CHECK(p.min_twice_exp() == 0);
    CHECK(p.coeff(0) == 1);
    CHECK(compare(TruncatedSeries::from_poly(p, Rational(25)), six_j_plus_truncated(N, Rational(25))).equal);
  }
}

TEST_CASE("6j limit") {
  const Rational t(8);
  const SixJSeries s = phi_6j0(t);
  CHECK(compare(s.phi, series({1, -1, -2, -2, -2, 0, 1, 5}, 8)).equal);
  const BivariateSeries f = f_6j(2, t);
  CHECK(compare(f[0], s.Phi).equal);
}

TEST_CASE("datum files round trip") {
  for (const char* name : {"3_1", "8_5"}) {
    const NahmDatum d = shipped_datum(name);
    const NahmDatum e = NahmDatum::parse(d.serialize());
    CHECK(e.serialize() == d.serialize());
    CHECK(e.rank == d.rank);
  }
  bool thrown = false;
  try {
    NahmDatum::parse("name x\nvars a b\nrank 2\nA\n1 2\n3 1\nb\n0 0\nc\n0 0\ndenom\n1 0\n").validate();
  } catch (const Error& e) {
    thrown = e.kind() == ErrorKind::InvalidInput;
  }
  CHECK(thrown);
}
