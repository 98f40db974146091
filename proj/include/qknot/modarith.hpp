#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "qknot/core.hpp"

namespace qknot {

// Arithmetic in Z/pZ for word-size primes p < 2^63.
struct ModRing {
  std::uint64_t p;

  std::uint64_t add(std::uint64_t a, std::uint64_t b) const {
    std::uint64_t s = a + b;
    return s >= p ? s - p : s;
  }
  std::uint64_t sub(std::uint64_t a, std::uint64_t b) const { return a >= b ? a - b : a + p - b; }
  std::uint64_t neg(std::uint64_t a) const { return a == 0 ? 0 : p - a; }
  std::uint64_t mul(std::uint64_t a, std::uint64_t b) const {
    return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % p);
  }
  std::uint64_t pow(std::uint64_t a, std::uint64_t e) const;
  std::uint64_t inv(std::uint64_t a) const;  // a != 0
  std::uint64_t from_signed(std::int64_t v) const {
    std::int64_t r = v % static_cast<std::int64_t>(p);
    return static_cast<std::uint64_t>(r < 0 ? r + static_cast<std::int64_t>(p) : r);
  }
  std::uint64_t reduce(const BigInt& z) const;
};

// Deterministic list of distinct primes just below 2^62, largest first.
const std::vector<std::uint64_t>& word_primes(std::size_t count);

// Chinese remaindering of residues modulo pairwise distinct primes into the
// symmetric range (-M/2, M/2].
class CrtBasis {
 public:
  explicit CrtBasis(std::span<const std::uint64_t> primes);
  BigInt lift_symmetric(std::span<const std::uint64_t> residues) const;
  BigInt lift(std::span<const std::uint64_t> residues) const;  // in [0, M)
  const BigInt& modulus() const { return modulus_; }
  std::size_t size() const { return primes_.size(); }

 private:
  std::vector<std::uint64_t> primes_;
  std::vector<BigInt> cofactors_;  // (M/p_i) * ((M/p_i)^{-1} mod p_i)
  BigInt modulus_;
  BigInt half_;
};

}  // namespace qknot
