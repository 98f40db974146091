#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "qknot/qseries.hpp"

namespace qknot {

// Formal multiplier applied after summation: unit * q^shift * (q)_inf^qinf * (1-q)^one_minus_q.
struct NahmPrefactor {
  int qinf = 0;
  int one_minus_q = 0;
  int unit = 1;
  Rational shift = 0;
};

// sum over n in C ∩ N^r of (-1)^{c.n} q^{n^T A n/2 + b.n} / prod_k (q)_{l_k(n)},
// C = {E n = 0, G n >= 0}.
struct NahmDatum {
  std::string name;
  std::vector<std::string> vars;
  int rank = 0;
  std::vector<std::vector<Rational>> A;
  std::vector<Rational> b;
  std::vector<std::int64_t> c;
  std::vector<std::vector<std::int64_t>> eq;
  std::vector<std::vector<std::int64_t>> ineq;
  std::vector<std::vector<std::int64_t>> denom;
  NahmPrefactor prefactor;

  static NahmDatum parse(const std::string& text);
  static NahmDatum load(const std::filesystem::path& path);
  std::string serialize() const;
  // Shape and symmetry checks; throws InvalidInput.
  void validate() const;

  Rational exponent(const std::vector<std::int64_t>& n) const;
  bool in_cone(const std::vector<std::int64_t>& n) const;
  // Variable i of the result is variable order[i] of this datum.
  NahmDatum permuted(const std::vector<int>& order) const;
};

// One of the shipped data files: "3_1", "4_1", "6_3" or "8_5".
NahmDatum shipped_datum(const std::string& name, const std::filesystem::path& data_dir = default_data_dir());

struct RegularityReport {
  bool regular = true;
  std::vector<std::vector<Rational>> rays;  // primitive generators of the extreme rays
  std::vector<Rational> witness;            // a direction along which Q does not grow
  std::string reason;
};
// Q must grow along every extreme ray and be copositive on every 2-face spanned
// by two rays; the latter is necessary but not sufficient for boundedness below.
RegularityReport regularity_check(const NahmDatum& d);

struct NahmOptions {
  std::int64_t radius = 0;              // initial coordinate cap; 0 picks one from trunc
  std::uint64_t node_budget = 4000000000ULL;
  bool check_regularity = true;
};

struct NahmEvaluation {
  TruncatedSeries series;
  std::int64_t radius = 0;       // coordinate cap that passed the empty-shell check
  std::uint64_t points = 0;      // lattice points with Q < trunc
  std::uint64_t nodes = 0;       // search nodes visited in the final pass
  bool integral = true;          // all exponents of the result are integers
};
// Exact sum of all terms with Q(n) < trunc, times the prefactor, mod q^trunc.
// Points are enumerated depth first with coordinates capped at a radius R;
// the radius is accepted when the shell R+1 holds no point below trunc.
NahmEvaluation evaluate(const NahmDatum& d, const Rational& trunc, const NahmOptions& opts = {});

struct Phi85 {
  TruncatedSeries phi;       // Phi_{8_5,0}
  TruncatedSeries quotient;  // Phi_{8_5,0}/(q)_inf
  NahmEvaluation evaluation;
};
Phi85 phi_85(const Rational& trunc, const std::filesystem::path& data_dir = default_data_dir(),
             const NahmOptions& opts = {});

// The tetrahedron evaluation J^+_{6j,N}, exact. Throws PropertyViolation if the
// result is not in 1 + qZ[q].
LaurentPoly six_j_plus(std::int64_t N);
// The same sum modulo q^trunc, cheap for large N.
TruncatedSeries six_j_plus_truncated(std::int64_t N, const Rational& trunc);

struct SixJSeries {
  TruncatedSeries Phi;  // Phi_{6j,0}
  TruncatedSeries phi;  // (q)_inf^4/(1-q) Phi_{6j,0}
};
SixJSeries phi_6j0(const Rational& trunc);

// F_{6j}(x,q) up to x^{x_order-1}; the x^k coefficient may have negative exponents.
BivariateSeries f_6j(std::size_t x_order, const Rational& trunc);

}  // namespace qknot
