#include <doctest.h>

#include <cmath>

#include "qknot/asymptotics.hpp"
#include "qknot/knot_diagram.hpp"

using namespace qknot;

namespace {

constexpr int prec = 192;

MPComplex cx(double re, double im = 0) { return MPComplex(re, im, prec); }
MPReal pi() { return MPReal::pi(prec); }

}  // namespace

TEST_CASE("dilogarithm") {
  CHECK(abs(dilog(cx(0))).is_zero());
  const MPReal zeta2 = pi() * pi() / MPReal(6.0, prec);
  CHECK(agreement_bits(dilog(cx(1)), real_to_complex(zeta2)) > 180);
  // Li_2(-1) = -pi^2/12
  CHECK(agreement_bits(dilog(cx(-1)), real_to_complex(-div_si(zeta2, 2))) > 180);
  for (const MPComplex& z : {MPComplex::e(make_rational(1, 3), prec) * MPReal(0.9, prec), cx(0.3, -0.4), cx(-0.7, 0.1)})
    CHECK(agreement_bits(dilog(z), dilog_series(z)) > 170);
  // On the unit circle the reduction path stays finite and matches Im Li_2(e(1/6)) = Clausen value.
  const MPComplex w = dilog(MPComplex::e(make_rational(1, 6), prec));
  CHECK(std::fabs(w.im().to_double() - 1.0149416064096536) < 1e-15);
  // Above and below the cut.
  const MPComplex up = dilog(cx(2), 1), down = dilog(cx(2), -1);
  CHECK(agreement_bits(up, conj(down)) > 180);
  CHECK(up.im().sign() > 0);
}

TEST_CASE("rogers dilogarithm") {
  const MPReal zeta2 = pi() * pi() / MPReal(6.0, prec);
  CHECK(agreement_bits(rogers_R(cx(0)), real_to_complex(-zeta2)) > 180);
  // L(x) + L(1-x) = pi^2/6 for L = R + pi^2/6.
  const MPComplex x = real_to_complex(MPReal(make_rational(3, 10), prec));
  const MPComplex s = rogers_R(x) + rogers_R(cx(1) - x);
  CHECK(agreement_bits(s, real_to_complex(-zeta2)) > 180);
}

TEST_CASE("5_2 constants") {
  const AlgebraicContext ctx = algebraic_context_52(prec);
  const MPComplex& a = ctx.get("alpha");
  const MPComplex one = cx(1);
  CHECK(abs(a * a * a - a * a + one).to_double() < 1e-50);
  CHECK(a.im().sign() < 0);
  CHECK(agreement_bits(ctx.get("pi1^2*pi2"), cx(-23)) > 180);
  const double growth = (ctx.get("C").im() / mul_si(pi(), 2)).to_double();
  CHECK(std::fabs(growth - 0.450109610025) < 1e-11);
  CHECK(algebraic_context_52(128).get("A1").with_prec(128).to_string(30) ==
        ctx.get("A1").with_prec(128).to_string(30));
}

TEST_CASE("acceleration of exact models") {
  std::vector<MPReal> ns;
  std::vector<MPComplex> vs;
  for (int n = 10; n <= 14; ++n) {
    const MPReal x(static_cast<double>(n), prec);
    ns.push_back(x);
    vs.push_back(cx(2) + real_to_complex(MPReal(3.0, prec) / x) + real_to_complex(MPReal(5.0, prec) / (x * x)));
  }
  const Acceleration acc = accelerate(ns, vs, 2);
  CHECK(agreement_bits(acc.coeffs[0], cx(2)) > 170);
  CHECK(agreement_bits(acc.coeffs[1], cx(3)) > 160);
  CHECK(agreement_bits(acc.coeffs[2], cx(5)) > 150);
}

TEST_CASE("growth fits") {
  std::vector<std::int64_t> ns;
  for (std::int64_t n = 200; n <= 300; n += 20) ns.push_back(n);
  const GrowthFit g = growth_fit(
      [](std::int64_t n) {
        const MPReal x(static_cast<double>(n), prec);
        return real_to_complex(exp(x / MPReal(2.0, prec)) * pow(x, MPReal(1.5, prec)));
      },
      ns, 3);
  CHECK(std::fabs(g.rate.to_double() - 0.5) < 1e-20);
  CHECK(std::fabs(g.exponent.to_double() - 1.5) < 1e-15);
}

TEST_CASE("radial evaluation") {
  std::vector<BigInt> ones(200, BigInt(1));
  const RadialValue geo = radial_eval(TruncatedSeries::from_coeffs(0, ones, 200), cx(0.5), prec);
  CHECK(std::fabs(geo.value.re().to_double() - 2) < 1e-50);
  CHECK(geo.tail_bound < 1e-50);
  CHECK(geo.tail_bound >= std::fabs(geo.value.re().to_double() - 2));

  const MPReal q = exp(-(MPReal(1.0, prec) / MPReal(50.0, prec)));
  MPReal prod(1.0, prec), qk(1.0, prec);
  for (int k = 1; k < 6000; ++k) {
    qk *= q;
    prod *= MPReal(1.0, prec) - qk;
  }
  const RadialValue v = radial_eval(q_infty(Rational(4000)), real_to_complex(q), prec);
  const double err = std::fabs((v.value.re() - prod).to_double());
  CHECK(err < 1e-25);
  CHECK(err <= v.tail_bound + 1e-40);
}

TEST_CASE("exponent and phase selection") {
  const AlgebraicContext ctx = algebraic_context_52(prec);
  const MPComplex C = ctx.get("C");
  const MPComplex shifted = -conj(C) + real_to_complex(pi() * pi() / MPReal(6.0, prec));
  const ExponentChoice e = select_exponent(shifted + cx(1e-12), C);
  CHECK(e.conjugated);
  CHECK(e.shift == 1);
  const PhaseChoice p = match_phase(cx(2) * MPComplex::e(make_rational(-5, 12), prec), cx(2), 72);
  CHECK(p.k == 30);
}

TEST_CASE("gamma for a rational") {
  CHECK(gamma_for(make_rational(1, 3)) == std::array<std::int64_t, 4>{1, 0, 3, 1});
  CHECK(gamma_for(Rational(0)) == std::array<std::int64_t, 4>{0, -1, 1, 0});
  for (const Rational& a : {make_rational(2, 5), make_rational(3, 7)}) {
    const auto g = gamma_for(a);
    CHECK(g[0] * g[3] - g[1] * g[2] == 1);
    CHECK(make_rational(g[0], g[2]) == a);
  }
}

TEST_CASE("figure eight at alpha = 0, small fit") {
  const RecurrenceOperator rec = RecurrenceOperator::load(default_data_dir() / "rec_4_1.rec");
  const KnotDiagram d = KnotDiagram::load(default_data_dir() / "4_1.pd");
  const Sequence init{1, {LaurentPoly(1), normalized_colored_jones(d, 2)}};
  const int p = 256, order = 6;
  const std::array<std::int64_t, 4> gamma{0, -1, 1, 0};
  std::vector<std::int64_t> xs;
  for (std::int64_t X = 60; X < 60 + order + 2; ++X) xs.push_back(X);
  const auto ratios = modularity_samples(rec, init, gamma, xs, p);
  for (std::size_t i = 0; i < xs.size(); ++i)
    CHECK(agreement_bits(ratios[i], real_to_complex(figure_eight_kashaev(xs[i], p))) > 200);
  const ModularityFit fit = modularity_fit(gamma, xs, ratios, figure_eight_modular_C(p), order);
  const auto ak = figure_eight_coefficients(fit);
  CHECK(std::fabs(ak[0].re().to_double() - 1) < 1e-6);
  CHECK(std::fabs(ak[1].re().to_double() - 11) < 1e-2);
}

TEST_CASE("dual precision") {
  const MPComplex lo = dilog(MPComplex::e(make_rational(1, 3), 128));
  const MPComplex hi = dilog(MPComplex::e(make_rational(1, 3), 256));
  CHECK(agreement_bits(lo, hi.with_prec(128)) > 120);
  const MPReal q = exp(-(MPReal(1.0, 256) / MPReal(20.0, 256)));
  CHECK(agreement_bits(real_to_complex(six_j_radial(q.with_prec(128), 128)), real_to_complex(six_j_radial(q, 256)).with_prec(128)) > 110);
}
