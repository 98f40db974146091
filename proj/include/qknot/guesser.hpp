#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <set>
#include <string>
#include <vector>

#include "qknot/holonomic.hpp"

namespace qknot {

// Monomial support of the unknown operator. With an empty `support` the box
// u_min..u_max x q_min..q_max is used for every a_j (and for b if requested).
struct Ansatz {
  int order = 1;
  std::int64_t u_min = 0, u_max = 0;
  std::int64_t q_min = 0, q_max = 0;
  bool inhomogeneous = false;
  // Explicit support: entries 0..order for a_j, entry order+1 for b.
  std::vector<std::set<BivariatePoly::Key>> support;

  static Ansatz box(int order, std::int64_t u_max, std::int64_t q_max, bool inhomogeneous);
  // The monomials of an existing operator.
  static Ansatz from_operator(const RecurrenceOperator& rec);
  std::size_t unknown_count() const;
};

struct GuessDiagnostics {
  std::size_t unknowns = 0;
  std::size_t equations = 0;
  std::vector<std::uint64_t> primes;  // primes actually used
  std::vector<std::size_t> nullity;   // per prime
};

struct GuessResult {
  std::optional<RecurrenceOperator> op;
  GuessDiagnostics diagnostics;
  std::string reason;  // why op is empty
};

// Fits an operator with the given support to seq (all but the last `holdout`
// values), reconstructs it over Q from the given primes, clears denominators
// and certifies it on the whole sequence. Throws InvalidInput
// "insufficient data" when there are fewer equations than unknowns and
// BudgetExceeded "reconstruction overflow" when the primes run out.
GuessResult guess_recursion(const Sequence& seq, const Ansatz& ansatz, const std::vector<std::uint64_t>& primes,
                            int holdout, std::ostream* log = nullptr);

// The p/q with |p|, q <= sqrt(m/2) and p = q r mod m, if it exists.
std::optional<Rational> rational_reconstruct(const BigInt& residue, const BigInt& modulus);

// verify() on data that was not used for guessing.
bool certify(const RecurrenceOperator& rec, const Sequence& extra);

// True when the two operators differ by a nonzero factor c(u, q) that is the
// same for every coefficient (checked by cross-multiplication).
bool proportional(const RecurrenceOperator& a, const RecurrenceOperator& b);

}  // namespace qknot
