#pragma once

#include <array>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "qknot/holonomic.hpp"
#include "qknot/mpcomplex.hpp"
#include "qknot/qseries.hpp"

namespace qknot {

// Principal branch of Li_2. On the cut (1, inf) the side must be chosen:
// side = +1 takes the limit from Im z > 0, -1 from Im z < 0.
MPComplex dilog(const MPComplex& z, int side = 0);
// Li_2 by direct power series, |z| < 1 only (an independent path for tests).
MPComplex dilog_series(const MPComplex& z);
// R(x) = Li_2(x) + log(x) log(1-x)/2 - pi^2/6, with R(0) = -pi^2/6.
MPComplex rogers_R(const MPComplex& x);

struct Acceleration {
  std::vector<MPComplex> coeffs;     // c_0..c_k
  std::vector<double> stability;     // bits of agreement of each c_j with a shifted window
};
// values[i] ~ sum_{j<=k} c_j / n_i^j; interpolates through the last k+1 points
// and repeats on the window ending one point earlier for the diagnostics.
Acceleration accelerate(const std::vector<MPReal>& ns, const std::vector<MPComplex>& values, int k);

struct GrowthFit {
  MPReal rate;      // C in log|a_n| ~ C n + beta log n + ...
  MPReal exponent;  // beta
  double rate_stability_bits;
  double exponent_stability_bits;
};
// Fits log|a_n| = C n + beta log n + sum_{j<=k} c_j n^{-j} through the given samples.
GrowthFit growth_fit(const std::vector<std::int64_t>& ns, const std::vector<MPComplex>& values, int k);
GrowthFit growth_fit(const std::function<MPComplex(std::int64_t)>& evaluator, const std::vector<std::int64_t>& ns, int k);

// Data for phi(gamma X)/phi(X) ~ (2 pi/h)^{3/2} e^{C/h} Delta sum_j A_j h^j,
// h = 2 pi i/(X + d/c).
struct ModularityFit {
  std::array<std::int64_t, 4> gamma{};  // a, b, c, d
  Rational alpha;
  MPComplex C{64};
  MPComplex delta_times_a0{64};  // the leading coefficient of the expansion
  std::vector<MPComplex> series;   // Delta A_j for j = 0..k
  std::vector<double> stability;   // agreement bits per coefficient
};
// `ratios[i]` is phi(gamma X_i)/phi(X_i).
ModularityFit modularity_fit(const std::array<std::int64_t, 4>& gamma, const std::vector<std::int64_t>& xs,
                             const std::vector<MPComplex>& ratios, const MPComplex& C, int order);

// Fits C from ratio samples: log(ratio) - 3/2 log(2 pi/h) ~ C/h + const + O(h).
MPComplex fit_exponent(const std::array<std::int64_t, 4>& gamma, const std::vector<std::int64_t>& xs,
                       const std::vector<MPComplex>& ratios, int order);

struct RadialValue {
  MPComplex value;
  double tail_bound;  // bound on |sum over omitted terms|
};
// sum_k c_k q^k for |q| < 1, using the known coefficients; the tail is bounded by
// fitting a geometric growth envelope to the last coefficients.
RadialValue radial_eval(const TruncatedSeries& s, const MPComplex& q, int prec_bits);

// Constants attached to the 5_2 knot at alpha = 1/3.
struct AlgebraicContext {
  std::string minimal_polynomial;
  MPComplex root{64};
  std::vector<std::pair<std::string, MPComplex>> constants;
  const MPComplex& get(const std::string& name) const;
};
AlgebraicContext algebraic_context_52(int prec_bits);


// Among the exact candidates s(reference) + k pi^2/6 (s the identity or
// z -> -conj z, k mod 24) picks the one nearest to `fitted`.
struct ExponentChoice {
  MPComplex value;
  bool conjugated = false;
  int shift = 0;  // k
  double agreement_bits = 0;  // of `fitted` with the chosen candidate
};
ExponentChoice select_exponent(const MPComplex& fitted, const MPComplex& reference);

// The root of unity e(k/order) for which value * e(k/order) is closest to reference.
struct PhaseChoice {
  int k = 0;
  int order = 1;
  double agreement_bits = 0;
};
PhaseChoice match_phase(const MPComplex& value, const MPComplex& reference, int order);

// phi(gamma X)/phi(X) = \hat J_{cX+d}(e((aX+b)/(cX+d))) / \hat J_{d'}(...) for integer X,
// where phi(p/r) = \hat J_r(e(p/r)); phi(X) = 1 for integer X.
std::vector<MPComplex> modularity_samples(const RecurrenceOperator& rec, const Sequence& initial,
                                          const std::array<std::int64_t, 4>& gamma,
                                          const std::vector<std::int64_t>& xs, int prec_bits);

// (a, b, c, d) in SL_2(Z) with a/c = alpha, c > 0 and 0 <= d < c.
std::array<std::int64_t, 4> gamma_for(const Rational& alpha);

// The 5_2 fit at alpha = 1/3 against the printed constants. The printed data
// use the mirror convention when `exponent.conjugated`; Delta A_0 is compared up
// to a root of unity of order 72, and A_1 both as fitted and through
// A_1 = 24 (9 r + 1) A_0 with r = A_1/A_0 in the printed convention.
struct AlphaThirdComparison {
  ExponentChoice exponent;
  PhaseChoice phase;
  MPComplex a0_fit{64}, a0_printed{64};
  double a0_digits = 0;
  MPComplex a1_raw{64}, a1_mapped{64}, a1_printed{64};
  double a1_raw_digits = 0, a1_mapped_digits = 0;
};
AlphaThirdComparison compare_alpha_third(const ModularityFit& fit, const ExponentChoice& exponent,
                                         const AlgebraicContext& ctx);

// The 4_1 data at alpha = 0 (shipped as a constants file).
struct FigureEightData {
  std::vector<Rational> Ak;  // printed A_k
  Rational prefactor_power;  // 3^{prefactor_power}
  std::int64_t scale = 12;   // A_k/(k! scale^k)
};
FigureEightData load_figure_eight(const std::filesystem::path& path);
// A = pi/3^{3/2}.
MPReal figure_eight_A(int prec_bits);
// Growth constant vol(4_1)/(2 pi) = (3/(2 pi)) Im Li_2(e(1/3)).
MPReal figure_eight_growth(int prec_bits);
// The printed constant (1/pi) Li_2(e(1/3)).
MPComplex figure_eight_printed_C(int prec_bits);
// 3^{-1/4} X^{3/2} e^{C X} sum_{k<terms} A_k/(k! 12^k) (A/X)^k (principal powers).
MPComplex figure_eight_asymptotic(const FigureEightData& data, const MPComplex& X, const MPComplex& C, int terms);
// i vol(4_1): the exponent of the fit at gamma = (0, -1, 1, 0).
MPComplex figure_eight_modular_C(int prec_bits);
// A_j = (Delta A_j/Delta A_0) j! 12^j (2 pi i/A)^j from such a fit.
std::vector<MPComplex> figure_eight_coefficients(const ModularityFit& fit);
// <4_1>_N = sum_{k<N} |(q)_k|^2 at q = e(1/N); an independent closed form.
MPReal figure_eight_kashaev(std::int64_t N, int prec_bits);

// phi_{6j,0}(q) = (q)_inf sum_n (-1)^n q^{(3n^2+n)/2}/(q)_n^3 summed directly at a real 0 < q < 1.
MPReal six_j_radial(const MPReal& q, int prec_bits);

// phi_{6j,0}(e^{-1/X}) against phi(X)/X^{1/2} + conj(phi(-X)/(-X)^{1/2}), phi the
// 4_1 expansion, with the fitted growth constant and with the printed one.
struct SixJComparisonRow {
  std::int64_t X = 0;
  MPReal lhs{64};
  MPComplex rhs{64}, rhs_printed{64};
  double rel = 0, rel_printed = 0;  // |lhs - rhs|/|rhs|
};
std::vector<SixJComparisonRow> six_j_comparison(const FigureEightData& data, const std::vector<std::int64_t>& xs,
                                                int prec_bits);

}  // namespace qknot
