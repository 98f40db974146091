#include <doctest.h>

#include "qknot/nahm.hpp"
#include "qknot/stability.hpp"

using namespace qknot;

namespace {

std::vector<LaurentPoly> partial_geometric(int count) {
  std::vector<LaurentPoly> v;
  LaurentPoly s;
  for (int n = 0; n < count; ++n) {
    s += LaurentPoly::q_power(n);
    v.push_back(s);
  }
  return v;
}

TruncatedSeries geometric(std::int64_t lo, std::int64_t trunc, long sign) {
  std::vector<BigInt> c(static_cast<std::size_t>(trunc - lo), BigInt(sign));
  return TruncatedSeries::from_coeffs(lo, c, trunc);
}

}  // namespace

TEST_CASE("partial geometric sums") {
  const SeriesSequence seq = polynomial_sequence(partial_geometric(40), 0, false);
  const StabilityReport rep = stable_shells(seq, 1);
  REQUIRE(rep.shells.size() == 2);
  const Rational t0 = rep.verified_to();
  CHECK(t0 >= 20);
  CHECK(compare(rep.phi0(), geometric(0, 20, 1)).equal);
  CHECK(compare(rep.shells[1].phi, geometric(1, 10, -1)).equal);
  CHECK_FALSE(shell_residual_violation(seq, rep).has_value());
}

TEST_CASE("1 + q^n") {
  std::vector<LaurentPoly> v;
  for (int n = 1; n <= 30; ++n) v.push_back(LaurentPoly(1) + LaurentPoly::q_power(n));
  const StabilityReport rep = stable_shells(polynomial_sequence(v, 1, false), 1);
  CHECK(compare(rep.phi0(), TruncatedSeries::one(10)).equal);
  CHECK(compare(rep.shells[1].phi, TruncatedSeries::one(5)).equal);
}

TEST_CASE("witnesses are sound") {
  const std::vector<LaurentPoly> v = partial_geometric(30);
  const SeriesSequence seq = polynomial_sequence(v, 0, false);
  const StabilityReport rep = zero_stable_limit(seq);
  const StabilityShell& sh = rep.shells[0];
  for (std::size_t i = 0; i < sh.witness.size(); ++i) {
    const std::int64_t e = sh.m_lo + static_cast<std::int64_t>(i);
    for (std::int64_t n = sh.witness[i]; n <= seq.last(); ++n)
      CHECK(seq.terms[static_cast<std::size_t>(n - seq.first)].coeff(e) == sh.phi.coeff(e));
  }
  // More data never changes what was already certified.
  const StabilityReport longer = zero_stable_limit(polynomial_sequence(partial_geometric(60), 0, false));
  CHECK(longer.verified_to() >= rep.verified_to());
  CHECK(compare(longer.phi0(), rep.phi0()).equal);
}

TEST_CASE("shell residual detects a wrong limit") {
  const SeriesSequence seq = polynomial_sequence(partial_geometric(40), 0, false);
  StabilityReport rep = stable_shells(seq, 1);
  rep.shells[0].phi = rep.shells[0].phi + TruncatedSeries::from_coeffs(5, {BigInt(1)}, rep.shells[0].phi.trunc_num());
  CHECK(shell_residual_violation(seq, rep).has_value());
}

TEST_CASE("unstable sequences are rejected") {
  std::vector<LaurentPoly> v;
  for (int n = 1; n <= 20; ++n) v.push_back(LaurentPoly(n));
  bool thrown = false;
  try {
    zero_stable_limit(v, 1, false);
  } catch (const Error& e) {
    thrown = e.kind() == ErrorKind::PropertyViolation &&
             std::string(e.what()).find("not 0-stable") != std::string::npos;
  }
  CHECK(thrown);
}

TEST_CASE("table entries") {
  const Rational t(8);
  const TableMatch t31 = verify_table_entry("3_1", TableColumn::Mirror, t, 0, default_data_dir(), TableGenerator::Diagram);
  CHECK(t31.match);
  CHECK(t31.expected_label == "h_3");
  const TableMatch t41 = verify_table_entry("4_1", TableColumn::Plain, Rational(6), 0, default_data_dir(), TableGenerator::Diagram);
  CHECK(t41.match);
  const TableMatch t52 = verify_table_entry("5_2", TableColumn::Mirror, t);
  CHECK(t52.match);
  CHECK(t52.generator == "recursion");
  const TableMatch t63 = verify_table_entry("6_3", TableColumn::Plain, Rational(5));
  CHECK(t63.match);
  CHECK(t63.expected_label == "h_3^2");
}

TEST_CASE("h products") {
  const Rational t(30);
  CHECK(compare(h_product({3, 3}, t), q_infty(t).pow(2)).equal);
  CHECK(compare(h_product({2}, t), TruncatedSeries::one(30)).equal);
}

TEST_CASE("6j shells against F_6j") {
  // Shell 1 needs f_n to q^{n+10}, hence the longer truncation.
  const Rational t(40);
  SeriesSequence seq;
  seq.first = 1;
  for (std::int64_t N = 0; N <= 40; ++N) seq.terms.push_back(six_j_plus_truncated(N, t));
  const StabilityReport rep = stable_shells(seq, 1);
  const BivariateSeries f = f_6j(2, t);
  CHECK(compare(rep.phi0(), f[0]).equal);
  CHECK(compare(rep.shells[1].phi, f[1]).equal);
  CHECK(rep.shells[1].phi.trunc_order() >= 6);
}
