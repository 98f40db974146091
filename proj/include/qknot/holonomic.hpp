#pragma once

#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qknot/mpcomplex.hpp"
#include "qknot/qseries.hpp"

namespace qknot {

// Laurent polynomial in (u, q) with integer coefficients; u stands for q^n.
class BivariatePoly {
 public:
  using Key = std::pair<std::int64_t, std::int64_t>;  // (u exponent, q exponent)

  BivariatePoly() = default;
  static BivariatePoly from_terms(const std::vector<std::pair<Key, BigInt>>& terms);
  static BivariatePoly monomial(const BigInt& c, std::int64_t u_exp, std::int64_t q_exp);

  const std::map<Key, BigInt>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  BivariatePoly operator-() const;
  BivariatePoly& operator+=(const BivariatePoly& o);
  friend BivariatePoly operator+(BivariatePoly a, const BivariatePoly& b) { return a += b; }
  friend BivariatePoly operator-(BivariatePoly a, const BivariatePoly& b) { return a += -b; }
  friend BivariatePoly operator*(const BivariatePoly& a, const BivariatePoly& b);
  friend bool operator==(const BivariatePoly& a, const BivariatePoly& b) { return a.terms_ == b.terms_; }

  // Substitute u = q^n.
  LaurentPoly at(std::int64_t n) const;

  // Monomials "coef u^a q^b" separated by "; ".
  std::string to_string() const;
  static BivariatePoly parse(const std::string& text);

 private:
  std::map<Key, BigInt> terms_;
};

// Inhomogeneous q-holonomic relation  b(q^n,q) + sum_j a_j(q^n,q) f(n+j) = 0.
class RecurrenceOperator {
 public:
  RecurrenceOperator() = default;
  RecurrenceOperator(std::vector<BivariatePoly> a, BivariatePoly b);

  int order() const { return static_cast<int>(a_.size()) - 1; }
  const std::vector<BivariatePoly>& coeffs() const { return a_; }
  const BivariatePoly& inhomogeneous() const { return b_; }

  // Value of the relation at n for the window f(n..n+d).
  LaurentPoly residual(std::int64_t n, const std::vector<LaurentPoly>& window) const;

  // File format: "order=<d>", then "b: ..." and "a<j>: ..." lines.
  std::string serialize() const;
  static RecurrenceOperator parse(const std::string& text);
  static RecurrenceOperator load(const std::filesystem::path& path);

 private:
  std::vector<BivariatePoly> a_;
  BivariatePoly b_;
};

// A finite stretch f(first), f(first+1), ... of a sequence of polynomials.
struct Sequence {
  std::int64_t first = 1;
  std::vector<LaurentPoly> values;

  std::int64_t last() const { return first + static_cast<std::int64_t>(values.size()) - 1; }
  const LaurentPoly& at(std::int64_t n) const { return values.at(static_cast<std::size_t>(n - first)); }
};

// Extends `initial` (which must hold at least d values) up to index n_max by
// solving for f(n+d) with exact division by a_d(q^n, q).
Sequence apply(const RecurrenceOperator& rec, const Sequence& initial, std::int64_t n_max);

struct VerifyReport {
  bool ok = true;
  std::int64_t checked = 0;               // number of relations checked
  std::optional<std::int64_t> first_bad;  // n where the relation fails
};
VerifyReport verify_report(const RecurrenceOperator& rec, const Sequence& seq);
inline bool verify(const RecurrenceOperator& rec, const Sequence& seq) { return verify_report(rec, seq).ok; }

struct RootValue {
  MPComplex value;
  double error_bits;  // -log2 of the estimated relative error (from the dual-precision run)
  int degenerate_steps = 0;
};

// f(n_target) at q = e(a/c), iterating the relation numerically. Steps where
// the leading coefficient vanishes at the root are handled with truncated
// Taylor expansions in q = zeta*exp(eps) (jets); the vanishing order is decided
// exactly in Z[zeta].
RootValue eval_at_root(const RecurrenceOperator& rec, std::int64_t a, std::int64_t c, const Sequence& initial,
                       std::int64_t n_target, int prec_bits);
// Same, single precision run (no error estimate).
MPComplex eval_at_root_once(const RecurrenceOperator& rec, std::int64_t a, std::int64_t c, const Sequence& initial,
                            std::int64_t n_target, int prec_bits, int* degenerate_steps = nullptr);

// Exact value of a polynomial at q = e(a/c).
MPComplex eval_poly_at_root(const LaurentPoly& p, std::int64_t a, std::int64_t c, int prec_bits);

// Commutative polynomial in (M, L): keys are (M exponent, L exponent).
struct MLPoly {
  std::map<std::pair<std::int64_t, int>, BigInt> terms;
  int l_degree() const;
  std::string to_string() const;
};
// sum_j a_j(M, 1) L^j with the content and the lowest M power removed.
MLPoly specialize_q1(const RecurrenceOperator& rec);

enum class DegreeSide { Max, Min };
// Degrees of the polynomials of seq (entry i is the degree of seq.values[i]).
std::vector<Rational> degree_sequence(const Sequence& seq, DegreeSide side);

struct QuasiPolynomial {
  int period = 1;
  std::vector<Rational> c2, c1, c0;  // each of length `period`, indexed by n mod period
  Rational eval(std::int64_t n) const;
  std::string to_string() const;
};
// Fits delta(n) = c2(n) n^2 + c1(n) n + c0(n) with periodic coefficients to the
// points (first + i, degrees[i]); minimal period <= max_period that matches all points.
QuasiPolynomial quasi_fit(const std::vector<Rational>& degrees, std::int64_t first, int max_period);

// f(n) evaluated at a point q; used by mmr_check.
using PointEvaluator = std::function<MPComplex(std::int64_t n, const MPComplex& q, int prec_bits)>;

// f(n_target) at an arbitrary q (no root-of-unity handling); fails with
// "degenerate step at n" when the leading coefficient is numerically zero.
MPComplex eval_at_point(const RecurrenceOperator& rec, const MPComplex& q, const Sequence& initial,
                        std::int64_t n_target, int prec_bits);

struct MmrRow {
  std::int64_t n;
  MPComplex value;     // \hat J_{K,n}(e^{alpha/n})
  double error;        // |value - 1/Delta(e^alpha)|
  double unnormalized; // |J_{K,n}(e^{alpha/n}) - 1/Delta(e^alpha)|, for comparison
};
struct MmrReport {
  MPComplex target;  // 1/Delta(e^alpha)
  std::vector<MmrRow> rows;
  MPComplex extrapolated;       // Richardson limit of the values in n
  double extrapolated_error;    // |extrapolated - target|
  bool decreasing;              // errors strictly decrease along n_list
};
MmrReport mmr_check(const PointEvaluator& f, const LaurentPoly& alexander, const MPReal& alpha,
                    const std::vector<std::int64_t>& n_list, int prec_bits);

}  // namespace qknot
