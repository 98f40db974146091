#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <stdexcept>
#include <string>

namespace qknot {

using BigInt = mpz_class;
using Rational = mpq_class;

// Error categories. The CLI maps each one to a distinct exit code.
enum class ErrorKind {
  InvalidInput,       // malformed files, bad arguments, violated preconditions
  BudgetExceeded,     // strand width, enumeration or data budgets
  Precision,          // dual-precision runs disagree
  PropertyViolation,  // a checked invariant failed on valid input
  Internal,           // inexact division and other bug signals
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

inline Rational make_rational(std::int64_t num, std::int64_t den = 1) {
  Rational r(BigInt(static_cast<long>(num)), BigInt(static_cast<long>(den)));
  r.canonicalize();
  return r;
}

// "p/q" or "p"; canonical form.
std::string to_string(const Rational& r);
std::string to_string(const BigInt& z);
Rational parse_rational(const std::string& text);
BigInt parse_bigint(const std::string& text);

inline BigInt big(std::int64_t v) { return BigInt(static_cast<long>(v)); }

// Floor division for signed 64-bit integers.
inline std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}
// Shipped fixtures: $QKNOT_DATA if set, else the source tree's data/.
inline std::filesystem::path default_data_dir() {
  if (const char* env = std::getenv("QKNOT_DATA")) return env;
#ifdef QKNOT_DATA_DIR
  return QKNOT_DATA_DIR;
#else
  return "data";
#endif
}

inline std::int64_t ceil_div(std::int64_t a, std::int64_t b) { return -floor_div(-a, b); }

}  // namespace qknot
