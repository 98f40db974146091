// Acceptance suite: one PASS/FAIL line per criterion. Tolerances are fixed here.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "qknot/asymptotics.hpp"
#include "qknot/guesser.hpp"
#include "qknot/holonomic.hpp"
#include "qknot/knot_diagram.hpp"
#include "qknot/modarith.hpp"
#include "qknot/nahm.hpp"
#include "qknot/stability.hpp"

using namespace qknot;

namespace {

const std::filesystem::path data = default_data_dir();

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(double v, int decimals = 2) {
  std::ostringstream os;
  os.setf(std::ios::fixed);
  os.precision(decimals);
  os << v;
  return os.str();
}

TruncatedSeries load_series(const std::string& name) {
  std::ifstream f(data / name);
  std::stringstream ss;
  ss << f.rdbuf();
  return TruncatedSeries::deserialize(ss.str());
}

Sequence first_values(const KnotDiagram& d, int count, bool cabling, int width = 14) {
  Sequence s;
  s.first = 1;
  for (int N = 1; N <= count; ++N)
    s.values.push_back(cabling ? normalized_colored_jones(d, N, {width}) : normalized_colored_jones_auto(d, N));
  return s;
}

double digits(const MPComplex& a, const MPComplex& b) { return agreement_bits(a, b) * std::log10(2.0); }

// ---------------------------------------------------------------------------

Outcome nahm_identities() {
  struct Case {
    const char* name;
    int power;
    int trunc;
  };
  Outcome out{true, ""};
  for (const Case& c : {Case{"3_1", -2, 61}, Case{"4_1", -3, 61}, Case{"6_3", -4, 41}}) {
    const auto t0 = std::chrono::steady_clock::now();
    const Rational t(c.trunc);
    const NahmEvaluation ev = evaluate(shipped_datum(c.name, data), t);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const SeriesComparison cmp = compare(ev.series, q_infty(t).ipow(c.power));
    const bool ok = cmp.equal && cmp.checked_to == t && secs < 300;
    out.pass = out.pass && ok;
    out.detail += std::string(c.name) + (ok ? " exact" : " differs") + " to q^" + std::to_string(c.trunc - 1) + " (" +
                  fmt(secs, 2) + "s)  ";
  }
  return out;
}

Outcome golden_85() {
  const auto t0 = std::chrono::steady_clock::now();
  const TruncatedSeries golden = load_series("golden_8_5_quotient.series");
  const Phi85 p = phi_85(golden.trunc_order(), data);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const SeriesComparison cmp = compare(p.quotient, golden);
  const bool ok = cmp.equal && cmp.checked_to == 101 && secs < 1800;
  return {ok, std::string(cmp.equal ? "all" : "not all") + " printed coefficients through q^100 match, last " +
                  p.quotient.coeff(100).get_str() + " q^100 (" + fmt(secs, 1) + "s, radius " +
                  std::to_string(p.evaluation.radius) + ")"};
}

Outcome golden_6j() {
  const TruncatedSeries golden = load_series("golden_phi_6j0.series");
  const SixJSeries s = phi_6j0(golden.trunc_order());
  const SeriesComparison cmp = compare(s.phi, golden);
  const bool series_ok = cmp.equal && cmp.checked_to == 37;

  const Rational t(31);
  SeriesSequence seq;
  seq.first = 0;
  for (std::int64_t N = 0; N <= 60; ++N) seq.terms.push_back(six_j_plus_truncated(N, t));
  const StabilityReport rep = zero_stable_limit(seq);
  const SeriesComparison lim = compare(rep.phi0(), phi_6j0(t).Phi);
  const auto& w = rep.shells[0].witness;
  const bool limit_ok = lim.equal && rep.verified_to() >= 31 && w.size() >= 31;
  return {series_ok && limit_ok,
          "phi_6j,0 " + std::string(series_ok ? "matches" : "differs") + " through q^36; limit of N<=60 " +
              (limit_ok ? "equals" : "differs from") + " Phi_6j,0 through q^" + to_string(rep.verified_to() - 1) +
              ", witness for q^30 is N=" + (w.size() > 30 ? std::to_string(w[30]) : "none")};
}

Outcome h_series_values() {
  const Rational t(201);
  const bool h1 = h_series(1, t).is_zero();
  const bool h2 = compare(h_series(2, t), TruncatedSeries::one(201)).equal;
  const bool h3 = compare(h_series(3, t), q_infty(t)).equal;
  return {h1 && h2 && h3, std::string("h_1 = 0 ") + (h1 ? "yes" : "no") + ", h_2 = 1 " + (h2 ? "yes" : "no") +
                              ", h_3 = (q)_inf " + (h3 ? "yes" : "no") + " through q^200"};
}

Outcome skein_recursion_consistency() {
  Outcome out{true, ""};
  // The 4-strand cable of a bridge-2 diagram has width 16, above the default cap of 14.
  const auto check = [&](const std::string& knot, const std::string& rec_name, int n_max, bool cabling) {
    const RecurrenceOperator rec = RecurrenceOperator::load(data / rec_name);
    const VerifyReport r =
        verify_report(rec, first_values(KnotDiagram::load(data / (knot + ".pd")), n_max, cabling, 16));
    return std::make_pair(r.ok, r.checked);
  };
  // n + order <= 5 with cabling data.
  const auto [ok52, n52] = check("5_2", "rec_5_2.rec", 5, true);
  const RecurrenceOperator r237 = RecurrenceOperator::load(data / "rec_m2_3_7.rec");
  // n + order <= 5 is empty for the order-6 operator; braid data to N = 10 instead.
  const auto [ok237x, n237x] = check("m2_3_7", "rec_m2_3_7.rec", 10, false);
  const auto [rej, nrej] = check("3_1", "rec_5_2.rec", 5, true);
  out.pass = ok52 && n52 > 0 && ok237x && n237x > 0 && !rej;
  out.detail = "5_2: " + std::to_string(n52) + " relations hold; (-2,3,7) (order " + std::to_string(r237.order()) +
               "): none in range, " + std::to_string(n237x) + " with N<=10 " +
               (ok237x ? "hold" : "fail") + "; 3_1 " + (rej ? "accepted" : "rejected") + " by the 5_2 operator";
  return out;
}

Outcome slope_data() {
  const RecurrenceOperator rec = RecurrenceOperator::load(data / "rec_m2_3_7.rec");
  const Sequence init = first_values(KnotDiagram::load(data / "m2_3_7.pd"), rec.order(), false);
  const Sequence all = apply(rec, init, 41);
  const std::vector<Rational> deg = degree_sequence(all, DegreeSide::Max);  // deg[i] of \hat J_{i+1}
  const Rational a[4] = {0, make_rational(-1, 8), make_rational(-1, 2), make_rational(-1, 8)};
  bool exact = true;
  for (std::int64_t n = 0; n <= 40; ++n) {
    const Rational want = make_rational(37, 8) * n * n + make_rational(17, 2) * n + a[n % 4];
    if (deg[static_cast<std::size_t>(n)] != want) exact = false;
  }
  const QuasiPolynomial qp = quasi_fit(deg, 0, 8);
  const std::set<Rational> slopes = {0, 16, make_rational(37, 2), 20};
  bool in_set = true;
  for (const auto& c : qp.c2) in_set = in_set && slopes.count(4 * c);
  return {exact && in_set && qp.period == 4, "delta(n) exact for n<=40: " + std::string(exact ? "yes" : "no") +
                                                  "; fit period " + std::to_string(qp.period) + ", 4c = " +
                                                  to_string(4 * qp.c2[0]) + (in_set ? " in" : " not in") +
                                                  " {0,16,37/2,20}"};
}

Outcome volume_52() {
  const RecurrenceOperator rec = RecurrenceOperator::load(data / "rec_5_2.rec");
  const Sequence init = first_values(KnotDiagram::load(data / "5_2.pd"), rec.order(), false);
  std::vector<std::int64_t> ns;
  for (std::int64_t N = 1880; N <= 2000; N += 20) ns.push_back(N);
  // 700 + N bits: at least 200 digits plus the cancellation of the recursion.
  const GrowthFit g = growth_fit(
      [&](std::int64_t N) { return eval_at_root_once(rec, 1, N, init, N, 700 + static_cast<int>(N)); }, ns, 3);
  const MPReal ref = algebraic_context_52(256).get("C").im() / mul_si(MPReal::pi(256), 2);
  const double rel = std::fabs((g.rate.with_prec(256) - ref).to_double() / ref.to_double());
  return {rel <= 0.01, "rate " + g.rate.to_string(12) + " vs Im(C)/2pi " + ref.to_string(12) + ", relative error " +
                           fmt(rel * 100, 8) + "%"};
}

Outcome modularity_52() {
  const RecurrenceOperator rec = RecurrenceOperator::load(data / "rec_5_2.rec");
  const Sequence init = first_values(KnotDiagram::load(data / "5_2.pd"), rec.order(), false);
  const int prec = 400, order = 14;
  const auto gamma = gamma_for(make_rational(1, 3));
  std::vector<std::int64_t> xs;
  for (std::int64_t X = 150; X < 150 + order + 2; ++X) xs.push_back(X);
  const auto ratios = modularity_samples(rec, init, gamma, xs, prec);
  const AlgebraicContext ctx = algebraic_context_52(prec);
  const ExponentChoice ch = select_exponent(fit_exponent(gamma, xs, ratios, order - 2), ctx.get("C"));
  const ModularityFit fit = modularity_fit(gamma, xs, ratios, ch.value, order);
  const AlphaThirdComparison c = compare_alpha_third(fit, ch, ctx);
  const bool ok = c.a0_digits >= 6 && c.a1_mapped_digits >= 3;
  return {ok, "A0 " + fmt(c.a0_digits, 1) + " digits (phase e(" + std::to_string(c.phase.k) + "/72), C = " +
                  (ch.conjugated ? "-conj(C)" : "C") + "+" + std::to_string(ch.shift) + "pi^2/6); A1 " +
                  fmt(c.a1_mapped_digits, 1) + " digits after the convention map, " + fmt(c.a1_raw_digits, 1) +
                  " raw"};
}

Outcome guesser_round_trip() {
  const RecurrenceOperator rec = RecurrenceOperator::load(data / "rec_5_2.rec");
  const Sequence init = first_values(KnotDiagram::load(data / "5_2.pd"), rec.order(), false);
  const Sequence seq = apply(rec, init, 25);
  const auto& primes = word_primes(40);
  const std::vector<std::uint64_t> first(primes.begin(), primes.begin() + 20), second(primes.begin() + 20, primes.end());
  const Ansatz an = Ansatz::from_operator(rec);
  const GuessResult a = guess_recursion(seq, an, first, 2);
  const GuessResult b = guess_recursion(seq, an, second, 2);
  const bool ok = a.op && b.op && proportional(*a.op, rec) && proportional(*b.op, rec) && proportional(*a.op, *b.op);
  return {ok, std::to_string(an.unknown_count()) + " unknowns; prime sets of " +
                  std::to_string(a.diagnostics.primes.size()) + " and " + std::to_string(b.diagnostics.primes.size()) +
                  " primes " + (ok ? "both give" : "do not both give") + " the shipped operator"};
}

Outcome figure_eight_pipeline() {
  const KnotDiagram d = KnotDiagram::load(data / "4_1.pd");
  // Cabling data only, with a strand-width budget of 24.
  const Sequence seq = first_values(d, 7, true, 24);
  Ansatz an;
  an.order = 2;
  an.inhomogeneous = true;
  std::set<BivariatePoly::Key> band;
  for (std::int64_t u = 0; u <= 7; ++u)
    for (std::int64_t q = u - 1; q <= u + 2; ++q) band.insert({u, q});
  an.support.assign(4, band);
  const GuessResult g = guess_recursion(seq, an, word_primes(30), 1);
  if (!g.op) return {false, "blocked: no operator from n <= 7 (" + g.reason + ")"};
  const bool same = proportional(*g.op, RecurrenceOperator::load(data / "rec_4_1.rec"));

  // (a) alpha = 0 fit with the guessed operator.
  const int prec = 400, order = 12;
  const std::array<std::int64_t, 4> gamma{0, -1, 1, 0};
  std::vector<std::int64_t> xs;
  for (std::int64_t X = 200; X < 200 + order + 2; ++X) xs.push_back(X);
  const auto ratios = modularity_samples(*g.op, Sequence{1, {seq.values[0], seq.values[1]}}, gamma, xs, prec);
  const ModularityFit fit = modularity_fit(gamma, xs, ratios, figure_eight_modular_C(prec), order);
  const auto ak = figure_eight_coefficients(fit);
  const FigureEightData fe = load_figure_eight(data / "constants_4_1.txt");
  const double need[4] = {6, 5, 4, 3};
  bool a_ok = true;
  std::string a_detail;
  for (int j = 0; j < 4; ++j) {
    const double dj = digits(ak[static_cast<std::size_t>(j)], real_to_complex(MPReal(fe.Ak[static_cast<std::size_t>(j)], prec)));
    a_ok = a_ok && dj >= need[j];
    a_detail += " A" + std::to_string(j) + ":" + fmt(std::min(dj, 99.0), 1);
  }

  // (b) comparison of phi_6j,0 at e^{-1/X} with the 4_1 expansion.
  const auto rows = six_j_comparison(fe, {20, 40, 60}, 256);
  bool b_ok = rows.back().rel < 0.1;
  std::string b_detail;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (i > 0 && !(rows[i].rel < rows[i - 1].rel)) b_ok = false;
    b_detail += " X=" + std::to_string(rows[i].X) + ":" + fmt(rows[i].rel, 3) + "/" + fmt(rows[i].rel_printed, 3);
  }
  return {same && a_ok && b_ok, std::string("guessed operator ") + (same ? "= shipped rec_4_1" : "differs") +
                                    "; (a) " + (a_ok ? "PASS" : "FAIL") + " digits" + a_detail + "; (b) " +
                                    (b_ok ? "PASS" : "FAIL") + " relative error (fitted C/printed C)" + b_detail};
}

Outcome property_suites() {
  std::string detail;
  // Skein relation at every crossing of every fixture.
  bool skein = true;
  int crossings = 0;
  for (const char* name : {"unknot", "3_1", "4_1", "5_2", "6_3", "8_5", "m2_3_7"}) {
    const KnotDiagram k = KnotDiagram::load(data / (std::string(name) + ".pd"));
    for (std::size_t i = 0; i < k.num_crossings(); ++i) {
      const bool pos = k.crossings()[i].sign > 0;
      const KnotDiagram dp = pos ? k : k.switched(i), dn = pos ? k.switched(i) : k;
      const LaurentPoly lhs = LaurentPoly::q_power(1) * jones(dp) - LaurentPoly::q_power(-1) * jones(dn);
      const LaurentPoly rhs = (LaurentPoly::monomial(1, 1) - LaurentPoly::monomial(1, -1)) * jones(k.smoothed(i));
      skein = skein && lhs == rhs;
      ++crossings;
    }
  }
  detail += "skein " + std::string(skein ? "holds" : "fails") + " at " + std::to_string(crossings) + " crossings; ";

  // MMR at alpha = 0.1 for 5_2.
  const RecurrenceOperator rec = RecurrenceOperator::load(data / "rec_5_2.rec");
  const KnotDiagram k52 = KnotDiagram::load(data / "5_2.pd");
  const Sequence init = first_values(k52, rec.order(), false);
  const int prec = 256;
  const MmrReport mmr = mmr_check(
      [&](std::int64_t n, const MPComplex& q, int p) { return eval_at_point(rec, q, init, n, p); }, alexander(k52),
      MPReal(make_rational(1, 10), prec), {50, 100, 200, 400}, prec);
  const bool mmr_ok = mmr.decreasing && mmr.extrapolated_error < 1e-4;
  detail += "MMR errors";
  for (const auto& r : mmr.rows) detail += " " + MPReal(r.error, 64).to_string(2);
  detail += ", limit off by " + MPReal(mmr.extrapolated_error, 64).to_string(2) + "; ";

  // Dual precision on the exported numerics.
  bool dual = true;
  double worst = 1e9;
  const auto agree = [&](const MPComplex& lo, const MPComplex& hi, int p) {
    const double bits = agreement_bits(lo, hi.with_prec(p));
    worst = std::min(worst, bits / p);
    dual = dual && bits >= 0.8 * p;
  };
  agree(dilog(MPComplex::e(make_rational(1, 3), 128)), dilog(MPComplex::e(make_rational(1, 3), 256)), 128);
  agree(real_to_complex(figure_eight_growth(128)), real_to_complex(figure_eight_growth(256)), 128);
  agree(algebraic_context_52(128).get("C"), algebraic_context_52(256).get("C"), 128);
  agree(algebraic_context_52(128).get("A1"), algebraic_context_52(256).get("A1"), 128);
  const MPReal q = exp(-(MPReal(1.0, 256) / MPReal(20.0, 256)));
  agree(real_to_complex(six_j_radial(q.with_prec(128), 128)), real_to_complex(six_j_radial(q, 256)), 128);
  const RootValue kv = eval_at_root(rec, 1, 3, init, 100, 256);
  dual = dual && kv.error_bits >= 128;
  const RootValue kk = eval_at_root(rec, 1, 200, init, 200, 512);
  dual = dual && kk.error_bits >= 256;
  detail += "dual precision " + std::string(dual ? "agrees" : "disagrees") + " (worst " + fmt(worst * 100, 0) +
            "% of the bits); ";

  // Nahm evaluation does not depend on the variable order.
  bool order_free = true;
  for (const auto& [name, trunc] : {std::pair<const char*, int>{"6_3", 25}, {"8_5", 25}}) {
    const NahmDatum d = shipped_datum(name, data);
    const TruncatedSeries base = evaluate(d, Rational(trunc)).series;
    std::vector<int> rev(static_cast<std::size_t>(d.rank)), rot(rev.size());
    for (int i = 0; i < d.rank; ++i) {
      rev[static_cast<std::size_t>(i)] = d.rank - 1 - i;
      rot[static_cast<std::size_t>(i)] = (i + 2) % d.rank;
    }
    for (const auto& perm : {rev, rot})
      order_free = order_free && compare(evaluate(d.permuted(perm), Rational(trunc)).series, base).equal;
  }
  detail += "Nahm order " + std::string(order_free ? "independent" : "dependent");
  return {skein && mmr_ok && dual && order_free, detail};
}

}  // namespace

int main(int argc, char** argv) {
  // Optional arguments pick criteria by number; none runs them all.
  std::set<int> only;
  for (int i = 1; i < argc; ++i) only.insert(std::atoi(argv[i]));
  struct Criterion {
    int id;
    const char* title;
    Outcome (*run)();
    bool stretch;
  };
  const Criterion all[] = {
      {1, "Nahm identities", nahm_identities, false},
      {2, "8_5 golden series", golden_85, false},
      {3, "6j golden series and stable limit", golden_6j, false},
      {4, "h-series", h_series_values, false},
      {5, "skein/recursion consistency", skein_recursion_consistency, false},
      {6, "slope data of (-2,3,7)", slope_data, false},
      {7, "volume growth of 5_2", volume_52, false},
      {8, "modularity of 5_2 at 1/3", modularity_52, false},
      {9, "guesser round trip", guesser_round_trip, false},
      {10, "4_1 pipeline (stretch)", figure_eight_pipeline, true},
      {11, "property suites", property_suites, false},
  };
  int required_failures = 0;
  for (const auto& c : all) {
    if (!only.empty() && !only.count(c.id)) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::cout << "criterion " << c.id << " " << (o.pass ? "PASS" : "FAIL") << "  " << c.title << ": " << o.detail
              << "  [" << fmt(secs, 1) << "s]" << std::endl;
    if (!o.pass && !c.stretch) ++required_failures;
  }
  // A failing stretch criterion is reported above but does not fail the run.
  return required_failures == 0 ? 0 : 1;
}
