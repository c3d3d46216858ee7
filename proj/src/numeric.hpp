#pragma once

// Arbitrary-precision integers/rationals (GMP-backed) plus the small
// modular-arithmetic and prime-table utilities shared across the library.

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace acnum {

using BigInt = mpz_class;

enum class Errc {
  parse_error,
  invalid_argument,
  undefined_value,
  unsupported,
  budget_exceeded,
  internal_error,
  io_error,
};

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& msg) : std::runtime_error(msg), code_(code) {}
  Errc code() const { return code_; }

 private:
  Errc code_;
};

// Canonical rational: gcd(|num|, den) = 1, den >= 1.
class Rat {
 public:
  Rat() : v_(0) {}
  Rat(long n) : v_(n) {}  // NOLINT: implicit by design
  explicit Rat(const BigInt& n) : v_(n) {}
  Rat(const BigInt& num, const BigInt& den);
  explicit Rat(const mpq_class& q) : v_(q) { v_.canonicalize(); }

  // Exact conversion; doubles are binary rationals.
  static Rat from_double(double d);
  // Accepts "<num>" or "<num>/<den>" in base 10, den >= 1.
  static Rat from_string(std::string_view s);

  BigInt num() const { return v_.get_num(); }
  BigInt den() const { return v_.get_den(); }
  const mpq_class& raw() const { return v_; }

  bool is_integer() const { return v_.get_den() == 1; }
  bool is_zero() const { return sgn(v_) == 0; }
  int sign() const { return sgn(v_); }

  std::string str() const;

  Rat operator-() const { return Rat(mpq_class(-v_)); }
  Rat operator+(const Rat& o) const { return Rat(mpq_class(v_ + o.v_)); }
  Rat operator-(const Rat& o) const { return Rat(mpq_class(v_ - o.v_)); }
  Rat operator*(const Rat& o) const { return Rat(mpq_class(v_ * o.v_)); }
  Rat operator/(const Rat& o) const;

  bool operator==(const Rat& o) const { return v_ == o.v_; }
  bool operator!=(const Rat& o) const { return v_ != o.v_; }
  bool operator<(const Rat& o) const { return v_ < o.v_; }
  bool operator<=(const Rat& o) const { return v_ <= o.v_; }
  bool operator>(const Rat& o) const { return v_ > o.v_; }
  bool operator>=(const Rat& o) const { return v_ >= o.v_; }

 private:
  mpq_class v_;
};

// Bit length of |x|; 0 for x = 0.
std::size_t bit_length(const BigInt& x);

// 2^e as a BigInt.
BigInt pow2(unsigned long e);

// Deterministic 64-bit generator (splitmix64). All randomized behavior in
// the library derives from this, so runs are reproducible from a seed.
struct SplitMix64 {
  std::uint64_t state;

  explicit SplitMix64(std::uint64_t seed) : state(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  // Uniform integer in [0, n), n >= 1. Rejection sampled.
  std::uint64_t below(std::uint64_t n);

  // Uniform integer with exactly `bits` random bits, as a BigInt.
  BigInt bits_value(std::uint64_t bits);
};

// Derives an independent stream for (seed, index); used for per-round and
// per-case sub-seeds.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  SplitMix64 g(seed + 0x9E3779B97F4A7C15ull * (index + 1));
  return g.next();
}

inline std::uint64_t mulmod_u64(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

inline std::uint64_t addmod_u64(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  std::uint64_t s = a + b;  // a,b < m <= 2^63 in all our uses
  return s >= m ? s - m : s;
}

inline std::uint64_t submod_u64(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return a >= b ? a - b : a + m - b;
}

std::uint64_t powmod_u64(std::uint64_t base, std::uint64_t exp, std::uint64_t m);

// Inverse of a modulo m, gcd(a, m) = 1 required.
std::uint64_t invmod_u64(std::uint64_t a, std::uint64_t m);

// Shared, lazily grown table of odd primes (3, 5, 7, ...). Thread-safe.
namespace primes {

// First `count` odd primes.
std::vector<std::uint64_t> first_odd(std::size_t count);

// All odd primes <= limit. Throws Errc::budget_exceeded past the sieve budget.
std::vector<std::uint64_t> odd_up_to(std::uint64_t limit);

// Minimal prefix 3,5,7,... whose product exceeds 2^bits.
std::vector<std::uint64_t> odd_prefix_with_product_over(std::uint64_t bits);

}  // namespace primes

}  // namespace acnum
