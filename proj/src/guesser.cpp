#include "qknot/guesser.hpp"

#include <algorithm>
#include <map>

#include "qknot/modarith.hpp"

namespace qknot {

Ansatz Ansatz::box(int order, std::int64_t u_max, std::int64_t q_max, bool inhomogeneous) {
  Ansatz a;
  a.order = order;
  a.u_max = u_max;
  a.q_max = q_max;
  a.inhomogeneous = inhomogeneous;
  return a;
}

Ansatz Ansatz::from_operator(const RecurrenceOperator& rec) {
  Ansatz a;
  a.order = rec.order();
  a.inhomogeneous = !rec.inhomogeneous().is_zero();
  for (const auto& c : rec.coeffs()) {
    std::set<BivariatePoly::Key> keys;
    for (const auto& [k, v] : c.terms()) keys.insert(k);
    a.support.push_back(std::move(keys));
  }
  std::set<BivariatePoly::Key> keys;
  for (const auto& [k, v] : rec.inhomogeneous().terms()) keys.insert(k);
  a.support.push_back(std::move(keys));
  return a;
}

namespace {

struct Column {
  int slot;  // 0..order for a_j, order+1 for b
  BivariatePoly::Key key;
};

// Columns ordered b, a_0, ..., a_d and by (u, q) inside each slot, so that the
// kernel vector with the smallest highest column has minimal order and degree.
std::vector<Column> columns_of(const Ansatz& an) {
  if (an.order < 0) fail(ErrorKind::InvalidInput, "ansatz order must be nonnegative");
  std::vector<std::set<BivariatePoly::Key>> sup = an.support;
  if (sup.empty()) {
    if (an.u_min > an.u_max || an.q_min > an.q_max) fail(ErrorKind::InvalidInput, "empty ansatz box");
    std::set<BivariatePoly::Key> box;
    for (std::int64_t u = an.u_min; u <= an.u_max; ++u)
      for (std::int64_t q = an.q_min; q <= an.q_max; ++q) box.insert({u, q});
    sup.assign(static_cast<std::size_t>(an.order) + 1, box);
    sup.push_back(an.inhomogeneous ? box : std::set<BivariatePoly::Key>{});
  }
  if (sup.size() != static_cast<std::size_t>(an.order) + 2) fail(ErrorKind::InvalidInput, "ansatz support has the wrong length");
  if (!an.inhomogeneous) sup.back().clear();
  std::vector<Column> cols;
  for (const auto& k : sup.back()) cols.push_back({an.order + 1, k});
  for (int j = 0; j <= an.order; ++j)
    for (const auto& k : sup[static_cast<std::size_t>(j)]) cols.push_back({j, k});
  return cols;
}

using SparseRow = std::vector<std::pair<std::size_t, BigInt>>;

std::vector<SparseRow> build_equations(const Sequence& seq, const std::vector<Column>& cols, int order,
                                       std::int64_t n_last) {
  std::vector<SparseRow> rows;
  for (std::int64_t n = seq.first; n <= n_last; ++n) {
    std::map<std::int64_t, SparseRow> by_exp;  // doubled q exponent -> row
    for (std::size_t c = 0; c < cols.size(); ++c) {
      const auto& col = cols[c];
      const std::int64_t shift = 2 * (col.key.first * n + col.key.second);
      if (col.slot == order + 1) {
        by_exp[shift].emplace_back(c, BigInt(1));
        continue;
      }
      for (const auto& [t, v] : seq.at(n + col.slot).terms()) by_exp[t + shift].emplace_back(c, v);
    }
    for (auto& [e, row] : by_exp) rows.push_back(std::move(row));
  }
  return rows;
}

struct ModularKernel {
  std::size_t nullity = 0;
  std::size_t free_column = 0;
  std::vector<std::uint64_t> vector;  // normalized so the free column is 1
};

ModularKernel modular_kernel(const std::vector<SparseRow>& rows, std::size_t ncols, std::uint64_t p) {
  const ModRing R{p};
  std::vector<std::vector<std::uint64_t>> pivot(ncols);  // pivot[c]: row with leading 1 at c
  std::size_t rank = 0;
  std::vector<std::uint64_t> row(ncols);
  for (const auto& sr : rows) {
    if (rank == ncols) break;
    std::fill(row.begin(), row.end(), 0);
    for (const auto& [c, v] : sr) row[c] = R.add(row[c], R.reduce(v));
    for (std::size_t c = 0; c < ncols; ++c) {
      if (row[c] == 0) continue;
      if (!pivot[c].empty()) {
        const std::uint64_t f = row[c];
        const auto& pr = pivot[c];
        for (std::size_t k = c; k < ncols; ++k)
          if (pr[k]) row[k] = R.sub(row[k], R.mul(f, pr[k]));
        continue;
      }
      const std::uint64_t inv = R.inv(row[c]);
      for (std::size_t k = c; k < ncols; ++k) row[k] = R.mul(row[k], inv);
      pivot[c] = row;
      ++rank;
      break;
    }
  }
  // Back substitution to reduced echelon form.
  for (std::size_t c = ncols; c-- > 0;) {
    if (pivot[c].empty()) continue;
    for (std::size_t r = 0; r < c; ++r) {
      if (pivot[r].empty() || pivot[r][c] == 0) continue;
      const std::uint64_t f = pivot[r][c];
      for (std::size_t k = c; k < ncols; ++k)
        if (pivot[c][k]) pivot[r][k] = R.sub(pivot[r][k], R.mul(f, pivot[c][k]));
    }
  }
  ModularKernel K;
  K.nullity = ncols - rank;
  if (K.nullity == 0) return K;
  std::size_t f = 0;
  while (!pivot[f].empty()) ++f;
  K.free_column = f;
  K.vector.assign(ncols, 0);
  K.vector[f] = 1;
  for (std::size_t c = 0; c < f; ++c)
    if (!pivot[c].empty()) K.vector[c] = R.neg(pivot[c][f]);
  return K;
}

RecurrenceOperator operator_from(const std::vector<Column>& cols, const std::vector<BigInt>& v, int order) {
  std::vector<std::vector<std::pair<BivariatePoly::Key, BigInt>>> a(static_cast<std::size_t>(order) + 1);
  std::vector<std::pair<BivariatePoly::Key, BigInt>> b;
  for (std::size_t c = 0; c < cols.size(); ++c) {
    if (v[c] == 0) continue;
    if (cols[c].slot == order + 1)
      b.emplace_back(cols[c].key, v[c]);
    else
      a[static_cast<std::size_t>(cols[c].slot)].emplace_back(cols[c].key, v[c]);
  }
  std::vector<BivariatePoly> polys;
  for (auto& t : a) polys.push_back(BivariatePoly::from_terms(t));
  while (!polys.empty() && polys.back().is_zero()) polys.pop_back();
  if (polys.empty()) fail(ErrorKind::PropertyViolation, "kernel vector has no homogeneous part");
  return RecurrenceOperator(std::move(polys), BivariatePoly::from_terms(b));
}

}  // namespace

std::size_t Ansatz::unknown_count() const { return columns_of(*this).size(); }

std::optional<Rational> rational_reconstruct(const BigInt& residue, const BigInt& modulus) {
  if (modulus <= 0 || residue < 0 || residue >= modulus) return std::nullopt;
  // Extended Euclid on (m, r) stopped at the first remainder below sqrt(m/2).
  BigInt bound;
  BigInt half = modulus / 2;
  mpz_sqrt(bound.get_mpz_t(), half.get_mpz_t());
  BigInt r0 = modulus, r1 = residue, t0 = 0, t1 = 1;
  while (r1 > bound) {
    BigInt qt = r0 / r1;
    BigInt r2 = r0 - qt * r1;
    BigInt t2 = t0 - qt * t1;
    r0 = std::move(r1);
    r1 = std::move(r2);
    t0 = std::move(t1);
    t1 = std::move(t2);
  }
  if (t1 == 0 || abs(t1) > bound) return std::nullopt;
  Rational x(r1, t1);
  x.canonicalize();
  // Re-multiply: p == q r (mod m).
  BigInt check = x.get_num() - x.get_den() * residue;
  BigInt rem;
  mpz_fdiv_r(rem.get_mpz_t(), check.get_mpz_t(), modulus.get_mpz_t());
  BigInt g;
  mpz_gcd(g.get_mpz_t(), x.get_den().get_mpz_t(), modulus.get_mpz_t());
  if (rem != 0 || g != 1) return std::nullopt;
  return x;
}

bool certify(const RecurrenceOperator& rec, const Sequence& extra) {
  if (static_cast<int>(extra.values.size()) <= rec.order()) return false;
  return verify(rec, extra);
}

bool proportional(const RecurrenceOperator& a, const RecurrenceOperator& b) {
  if (a.order() != b.order()) return false;
  std::vector<BivariatePoly> pa = a.coeffs(), pb = b.coeffs();
  pa.push_back(a.inhomogeneous());
  pb.push_back(b.inhomogeneous());
  std::size_t k = 0;
  while (k < pa.size() && pa[k].is_zero()) ++k;
  if (k == pa.size() || pb[k].is_zero()) return false;
  for (std::size_t i = 0; i < pa.size(); ++i)
    if (!(pa[i] * pb[k] == pb[i] * pa[k])) return false;
  return true;
}

GuessResult guess_recursion(const Sequence& seq, const Ansatz& ansatz, const std::vector<std::uint64_t>& primes,
                            int holdout, std::ostream* log) {
  const std::vector<Column> cols = columns_of(ansatz);
  const int d = ansatz.order;
  GuessResult result;
  result.diagnostics.unknowns = cols.size();
  if (holdout < 0) fail(ErrorKind::InvalidInput, "holdout must be nonnegative");
  const std::int64_t n_last = seq.last() - d - holdout;
  if (n_last < seq.first) fail(ErrorKind::InvalidInput, "insufficient data: no relation left after the holdout");
  const std::vector<SparseRow> rows = build_equations(seq, cols, d, n_last);
  result.diagnostics.equations = rows.size();
  if (log)
    *log << "unknowns " << cols.size() << " equations " << rows.size() << " (n <= " << n_last + d << ")\n";
  if (rows.size() < cols.size()) fail(ErrorKind::InvalidInput, "insufficient data: fewer equations than unknowns");
  if (primes.empty()) fail(ErrorKind::InvalidInput, "no primes given");

  std::vector<std::uint64_t> used;
  std::vector<std::vector<std::uint64_t>> residues;  // per prime
  std::optional<std::size_t> free_col;
  std::optional<std::vector<Rational>> previous;
  for (std::uint64_t p : primes) {
    ModularKernel K = modular_kernel(rows, cols.size(), p);
    result.diagnostics.nullity.push_back(K.nullity);
    if (log) *log << "prime " << p << " nullity " << K.nullity << "\n";
    if (K.nullity == 0) {
      result.reason = "empty nullspace";
      return result;
    }
    if (free_col && *free_col != K.free_column) continue;  // unlucky prime
    free_col = K.free_column;
    used.push_back(p);
    residues.push_back(std::move(K.vector));
    result.diagnostics.primes = used;

    const CrtBasis crt(used);
    std::vector<Rational> x;
    bool ok = true;
    for (std::size_t c = 0; c < cols.size() && ok; ++c) {
      std::vector<std::uint64_t> r;
      for (const auto& v : residues) r.push_back(v[c]);
      auto q = rational_reconstruct(crt.lift(r), crt.modulus());
      if (!q) ok = false;
      else x.push_back(*q);
    }
    if (!ok) continue;
    const bool stable = previous && *previous == x;
    previous = x;
    if (!stable) continue;
    // Clear denominators and content; leading coefficient positive.
    BigInt l = 1, g = 0;
    for (const auto& v : x) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), v.get_den().get_mpz_t());
    std::vector<BigInt> ints;
    for (const auto& v : x) {
      ints.push_back(BigInt(v * Rational(l)));
      mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), ints.back().get_mpz_t());
    }
    std::size_t top = cols.size();
    while (top-- > 0 && ints[top] == 0) {
    }
    if (ints[top] < 0) g = -g;
    for (auto& v : ints) v /= g;
    RecurrenceOperator rec = operator_from(cols, ints, d);
    if (!verify(rec, seq)) {
      result.reason = "reconstruction does not certify on the full data";
      return result;
    }
    result.op = std::move(rec);
    return result;
  }
  fail(ErrorKind::BudgetExceeded, "reconstruction overflow: " + std::to_string(primes.size()) + " primes did not suffice");
}

}  // namespace qknot
