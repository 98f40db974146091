#include "qknot/core.hpp"
#include "qknot/modarith.hpp"

#include <algorithm>
#include <cctype>
#include <mutex>

namespace qknot {

std::string to_string(const BigInt& z) { return z.get_str(); }

std::string to_string(const Rational& r) {
  if (r.get_den() == 1) return r.get_num().get_str();
  return r.get_num().get_str() + "/" + r.get_den().get_str();
}

BigInt parse_bigint(const std::string& text) {
  std::string t = text;
  t.erase(std::remove_if(t.begin(), t.end(), [](unsigned char c) { return std::isspace(c); }), t.end());
  if (!t.empty() && t[0] == '+') t.erase(0, 1);
  BigInt z;
  if (t.empty() || z.set_str(t, 10) != 0) fail(ErrorKind::InvalidInput, "not an integer: '" + text + "'");
  return z;
}

Rational parse_rational(const std::string& text) {
  auto slash = text.find('/');
  if (slash == std::string::npos) return Rational(parse_bigint(text));
  BigInt den = parse_bigint(text.substr(slash + 1));
  if (den == 0) fail(ErrorKind::InvalidInput, "zero denominator: '" + text + "'");
  Rational r(parse_bigint(text.substr(0, slash)), den);
  r.canonicalize();
  return r;
}

std::uint64_t ModRing::pow(std::uint64_t a, std::uint64_t e) const {
  std::uint64_t r = 1 % p;
  a %= p;
  while (e) {
    if (e & 1) r = mul(r, a);
    a = mul(a, a);
    e >>= 1;
  }
  return r;
}

std::uint64_t ModRing::inv(std::uint64_t a) const {
  if (a % p == 0) fail(ErrorKind::Internal, "modular inverse of zero");
  return pow(a, p - 2);
}

std::uint64_t ModRing::reduce(const BigInt& z) const {
  BigInt r;
  BigInt pp;
  mpz_set_ui(pp.get_mpz_t(), p);
  mpz_fdiv_r(r.get_mpz_t(), z.get_mpz_t(), pp.get_mpz_t());
  return mpz_get_ui(r.get_mpz_t());
}

const std::vector<std::uint64_t>& word_primes(std::size_t count) {
  static std::mutex mu;
  static std::vector<std::uint64_t> primes;
  std::lock_guard<std::mutex> lock(mu);
  BigInt candidate = BigInt(1) << 62;
  if (!primes.empty()) mpz_set_ui(candidate.get_mpz_t(), primes.back());
  while (primes.size() < count) {
    // Walk downwards: largest prime strictly below the previous one.
    do {
      candidate -= 1;
    } while (mpz_probab_prime_p(candidate.get_mpz_t(), 40) == 0);
    primes.push_back(mpz_get_ui(candidate.get_mpz_t()));
  }
  return primes;
}

CrtBasis::CrtBasis(std::span<const std::uint64_t> primes) : primes_(primes.begin(), primes.end()) {
  modulus_ = 1;
  for (auto p : primes_) {
    BigInt pp;
    mpz_set_ui(pp.get_mpz_t(), p);
    modulus_ *= pp;
  }
  for (auto p : primes_) {
    BigInt pp;
    mpz_set_ui(pp.get_mpz_t(), p);
    BigInt rest = modulus_ / pp;
    BigInt inv;
    mpz_invert(inv.get_mpz_t(), rest.get_mpz_t(), pp.get_mpz_t());
    cofactors_.push_back(rest * inv);
  }
  half_ = modulus_ / 2;
}

BigInt CrtBasis::lift(std::span<const std::uint64_t> residues) const {
  BigInt acc = 0;
  for (std::size_t i = 0; i < primes_.size(); ++i) {
    BigInt r;
    mpz_set_ui(r.get_mpz_t(), residues[i]);
    acc += r * cofactors_[i];
  }
  mpz_fdiv_r(acc.get_mpz_t(), acc.get_mpz_t(), modulus_.get_mpz_t());
  return acc;
}

BigInt CrtBasis::lift_symmetric(std::span<const std::uint64_t> residues) const {
  BigInt v = lift(residues);
  if (v > half_) v -= modulus_;
  return v;
}

}  // namespace qknot
