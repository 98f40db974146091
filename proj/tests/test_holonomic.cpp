#include <doctest.h>

#include "qknot/holonomic.hpp"
#include "qknot/knot_diagram.hpp"

using namespace qknot;

namespace {

KnotDiagram fixture(const std::string& name) { return KnotDiagram::load(default_data_dir() / (name + ".pd")); }
RecurrenceOperator shipped(const std::string& name) {
  return RecurrenceOperator::load(default_data_dir() / ("rec_" + name + ".rec"));
}

Sequence values(const KnotDiagram& d, int count, std::int64_t first = 1) {
  Sequence s;
  s.first = first;
  for (int N = static_cast<int>(first); N < first + count; ++N) s.values.push_back(normalized_colored_jones_auto(d, N));
  return s;
}

// f(n+1) - f(n) = 0
RecurrenceOperator constant_operator() {
  return RecurrenceOperator({BivariatePoly::monomial(-1, 0, 0), BivariatePoly::monomial(1, 0, 0)}, {});
}

}  // namespace

TEST_CASE("bivariate polynomials") {
  const BivariatePoly p = BivariatePoly::parse("1 u^1 q^2; -3 u^0 q^-1");
  CHECK(BivariatePoly::parse(p.to_string()) == p);
  CHECK(p.at(2) == LaurentPoly::parse("q^4-3q^{-1}"));
  CHECK((p - p).is_zero());
}

TEST_CASE("operator files round trip") {
  const RecurrenceOperator r = shipped("5_2");
  CHECK(r.order() == 3);
  const RecurrenceOperator s = RecurrenceOperator::parse(r.serialize());
  CHECK(s.serialize() == r.serialize());
}

TEST_CASE("apply a constant recursion") {
  Sequence init;
  init.first = 0;
  init.values = {LaurentPoly::parse("q+2")};
  const Sequence s = apply(constant_operator(), init, 5);
  CHECK(s.last() == 5);
  for (const auto& v : s.values) CHECK(v == init.values[0]);
  CHECK(verify(constant_operator(), s));
}

TEST_CASE("5_2 operator against the skein values") {
  const RecurrenceOperator r = shipped("5_2");
  const KnotDiagram d = fixture("5_2");
  const Sequence s = apply(r, values(d, 3), 6);
  CHECK(s.at(4) == normalized_colored_jones(d, 4, {16}));
  CHECK(s.at(6) == normalized_colored_jones_braid(*d.braid(), 6));
  CHECK(verify(r, values(d, 7)));
  CHECK_FALSE(verify(r, values(fixture("3_1"), 7)));
}

TEST_CASE("normalization and index hypotheses") {
  const RecurrenceOperator r = shipped("5_2");
  const KnotDiagram d = fixture("5_2");
  Sequence unnormalized = values(d, 7);
  for (std::size_t i = 0; i < unnormalized.values.size(); ++i)
    unnormalized.values[i] *= quantum_integer(static_cast<int>(i) + 1);
  CHECK_FALSE(verify(r, unnormalized));
  Sequence shifted = values(d, 7);
  shifted.first = 0;
  CHECK_FALSE(verify(r, shifted));
  shifted.first = 2;
  CHECK_FALSE(verify(r, shifted));
}

TEST_CASE("evaluation at roots of unity") {
  const RecurrenceOperator r = shipped("5_2");
  const KnotDiagram d = fixture("5_2");
  const Sequence init = values(d, 3);
  const int prec = 128;
  CHECK(agreement_bits(eval_at_root_once(r, 1, 3, init, 1, prec), MPComplex(1.0, 0.0, prec)) > 120);
  // Every step up to n = 8 is compared with the exact polynomial, at several roots.
  const Sequence exact = apply(r, init, 8);
  for (std::int64_t c : {2, 3, 5, 7, 12}) {
    for (std::int64_t n = 4; n <= 8; n += 2) {
      int degenerate = 0;
      const MPComplex v = eval_at_root_once(r, 1, c, init, n, prec, &degenerate);
      CHECK(agreement_bits(v, eval_poly_at_root(exact.at(n), 1, c, prec)) > 100);
    }
  }
  const RootValue rv = eval_at_root(r, 1, 3, init, 30, 256);
  CHECK(rv.error_bits > 150);
  CHECK(rv.degenerate_steps > 0);
}

TEST_CASE("guessed 4_1 operator") {
  const RecurrenceOperator r = shipped("4_1");
  const KnotDiagram d = fixture("4_1");
  const Sequence init = values(d, 2);
  const MPComplex v = eval_at_root_once(r, 1, 2, init, 2, 128);
  CHECK(agreement_bits(v, MPComplex(5.0, 0.0, 128)) > 120);
  CHECK(verify(r, values(d, 9)));
}

TEST_CASE("specialization at q = 1") {
  // L - qM becomes L - M.
  const RecurrenceOperator lqm({BivariatePoly::monomial(-1, 1, 1), BivariatePoly::monomial(1, 0, 0)}, {});
  const MLPoly p = specialize_q1(lqm);
  CHECK(p.l_degree() == 1);
  CHECK(p.terms.size() == 2);
  CHECK(p.terms.at({1, 0}) == -p.terms.at({0, 1}));
  CHECK(specialize_q1(shipped("5_2")).l_degree() == 3);
  CHECK(specialize_q1(shipped("m2_3_7")).l_degree() == 6);
  // A unit monomial factor does not change the specialization.
  const RecurrenceOperator r = shipped("5_2");
  std::vector<BivariatePoly> scaled;
  for (const auto& a : r.coeffs()) scaled.push_back(a * BivariatePoly::monomial(-1, 2, 3));
  CHECK(specialize_q1(RecurrenceOperator(scaled, r.inhomogeneous() * BivariatePoly::monomial(-1, 2, 3))).to_string() ==
        specialize_q1(r).to_string());
}

TEST_CASE("degree sequences and quasi-polynomial fits") {
  const RecurrenceOperator r = shipped("m2_3_7");
  const Sequence s = apply(r, values(fixture("m2_3_7"), 6), 8);
  const std::vector<Rational> deg = degree_sequence(s, DegreeSide::Max);
  CHECK(deg[1] - deg[0] == 13);
  CHECK(deg[2] - deg[0] == 35);
  std::vector<Rational> squares;
  for (int n = 0; n < 12; ++n) squares.push_back(n * n);
  const QuasiPolynomial qp = quasi_fit(squares, 0, 4);
  CHECK(qp.period == 1);
  CHECK(qp.c2[0] == 1);
  CHECK(qp.eval(20) == 400);
}

TEST_CASE("melvin-morton-rozansky") {
  const int prec = 128;
  const RecurrenceOperator r = shipped("5_2");
  const KnotDiagram d = fixture("5_2");
  const Sequence init = values(d, 3);
  const PointEvaluator f = [&](std::int64_t n, const MPComplex& q, int p) { return eval_at_point(r, q, init, n, p); };
  // q = 1 is a degenerate point of the recursion; use the exact polynomials there.
  const Sequence exact = apply(r, init, 20);
  const PointEvaluator g = [&](std::int64_t n, const MPComplex& q, int p) {
    MPComplex v(p);
    for (const auto& [e2, c] : exact.at(n).terms()) v += pow(q, static_cast<long>(e2 / 2)) * MPReal(c, p);
    return v;
  };
  const MmrReport at_zero = mmr_check(g, alexander(d), MPReal(0.0, prec), {10, 20}, prec);
  for (const auto& row : at_zero.rows) CHECK(row.error < 1e-30);
  const MmrReport rep = mmr_check(f, alexander(d), MPReal(make_rational(1, 10), prec), {25, 50, 100}, prec);
  CHECK(rep.decreasing);
  CHECK(rep.extrapolated_error < rep.rows.back().error);
  const PointEvaluator unknot = [&](std::int64_t, const MPComplex&, int p) { return MPComplex(1.0, 0.0, p); };
  const MmrReport u = mmr_check(unknot, LaurentPoly(1), MPReal(make_rational(1, 10), prec), {10, 20}, prec);
  for (const auto& row : u.rows) CHECK(row.error < 1e-30);
}
