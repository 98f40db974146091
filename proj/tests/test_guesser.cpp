#include <doctest.h>

#include "qknot/guesser.hpp"
#include "qknot/knot_diagram.hpp"
#include "qknot/modarith.hpp"

using namespace qknot;

namespace {

RecurrenceOperator shipped(const std::string& name) {
  return RecurrenceOperator::load(default_data_dir() / ("rec_" + name + ".rec"));
}

Sequence from_formula(std::int64_t count, const std::function<LaurentPoly(std::int64_t)>& f) {
  Sequence s;
  s.first = 0;
  for (std::int64_t n = 0; n < count; ++n) s.values.push_back(f(n));
  return s;
}

Sequence figure_eight(int count) {
  const KnotDiagram d = KnotDiagram::load(default_data_dir() / "4_1.pd");
  Sequence s;
  for (int N = 1; N <= count; ++N) s.values.push_back(normalized_colored_jones_braid(*d.braid(), N));
  return s;
}

}  // namespace

TEST_CASE("q^n is annihilated by L - q") {
  const Sequence s = from_formula(8, [](std::int64_t n) { return LaurentPoly::q_power(n); });
  const GuessResult g = guess_recursion(s, Ansatz::box(1, 0, 1, false), word_primes(2), 1);
  REQUIRE(g.op);
  const RecurrenceOperator want({BivariatePoly::monomial(-1, 0, 1), BivariatePoly::monomial(1, 0, 0)}, {});
  CHECK(proportional(*g.op, want));
}

TEST_CASE("q^{n(n+1)/2} is annihilated by L - qM") {
  const Sequence s = from_formula(10, [](std::int64_t n) { return LaurentPoly::q_power(n * (n + 1) / 2); });
  const RecurrenceOperator lqm({BivariatePoly::monomial(-1, 1, 1), BivariatePoly::monomial(1, 0, 0)}, {});
  CHECK(verify(lqm, s));
  const Sequence qn = from_formula(10, [](std::int64_t n) { return LaurentPoly::q_power(n); });
  CHECK_FALSE(verify(lqm, qn));
  const GuessResult g = guess_recursion(s, Ansatz::box(1, 1, 1, false), word_primes(2), 1);
  REQUIRE(g.op);
  CHECK(proportional(*g.op, lqm));
}

TEST_CASE("rational reconstruction") {
  CHECK(rational_reconstruct(5, 97) == Rational(5));
  CHECK(rational_reconstruct(65, 97) == make_rational(1, 3));
  const auto r = rational_reconstruct(48, 97);
  REQUIRE(r);
  const BigInt lhs = BigInt(r->get_num() - 48 * r->get_den());
  CHECK(lhs % 97 == 0);
  CHECK(abs(r->get_num()) * abs(r->get_num()) * 2 <= 97);
  CHECK(r->get_den() * r->get_den() * 2 <= 97);
}

TEST_CASE("certify") {
  const RecurrenceOperator r = shipped("4_1");
  const Sequence s = figure_eight(9);
  CHECK(certify(r, s));
  std::vector<BivariatePoly> a = r.coeffs();
  a[0] = a[0] + BivariatePoly::monomial(1, 1, 1);
  CHECK_FALSE(certify(RecurrenceOperator(a, r.inhomogeneous()), s));
  const KnotDiagram t = KnotDiagram::load(default_data_dir() / "3_1.pd");
  Sequence trefoil;
  for (int N = 1; N <= 9; ++N) trefoil.values.push_back(normalized_colored_jones_braid(*t.braid(), N));
  CHECK_FALSE(certify(r, trefoil));
}

TEST_CASE("proportionality") {
  const RecurrenceOperator r = shipped("4_1");
  std::vector<BivariatePoly> a;
  const BivariatePoly c = BivariatePoly::monomial(3, 1, 0) + BivariatePoly::monomial(-1, 0, 2);
  for (const auto& x : r.coeffs()) a.push_back(x * c);
  CHECK(proportional(r, RecurrenceOperator(a, r.inhomogeneous() * c)));
  CHECK_FALSE(proportional(r, shipped("5_2")));
}

TEST_CASE("round trip on the 4_1 operator") {
  const RecurrenceOperator r = shipped("4_1");
  const Sequence s = figure_eight(9);
  const Ansatz an = Ansatz::from_operator(r);
  const auto& primes = word_primes(8);
  const GuessResult a = guess_recursion(s, an, {primes.begin(), primes.begin() + 4}, 2);
  const GuessResult b = guess_recursion(s, an, {primes.begin() + 4, primes.end()}, 2);
  REQUIRE(a.op);
  REQUIRE(b.op);
  CHECK(proportional(*a.op, r));
  CHECK(proportional(*a.op, *b.op));
  CHECK(a.diagnostics.unknowns == an.unknown_count());
}

TEST_CASE("failures") {
  const Sequence s = figure_eight(8);
  // Order 1 with small support cannot hold the figure eight.
  const GuessResult g = guess_recursion(s, Ansatz::box(1, 1, 2, false), word_primes(2), 1);
  CHECK_FALSE(g.op);
  CHECK_FALSE(g.reason.empty());
  bool insufficient = false;
  try {
    guess_recursion(figure_eight(4), Ansatz::box(2, 6, 6, true), word_primes(2), 1);
  } catch (const Error& e) {
    insufficient = e.kind() == ErrorKind::InvalidInput && std::string(e.what()).find("insufficient data") != std::string::npos;
  }
  CHECK(insufficient);
}
