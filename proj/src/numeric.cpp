#include "numeric.hpp"

#include <algorithm>
#include <mutex>

namespace acnum {

Rat::Rat(const BigInt& num, const BigInt& den) {
  if (den == 0) throw Error(Errc::invalid_argument, "rational with zero denominator");
  v_ = mpq_class(num, den);
  v_.canonicalize();
}

Rat Rat::from_double(double d) {
  mpq_class q;
  q = d;  // exact: doubles are binary rationals
  return Rat(q);
}

Rat Rat::from_string(std::string_view s) {
  auto slash = s.find('/');
  try {
    if (slash == std::string_view::npos) {
      return Rat(BigInt(std::string(s)));
    }
    BigInt num(std::string(s.substr(0, slash)));
    BigInt den(std::string(s.substr(slash + 1)));
    if (den <= 0) throw Error(Errc::parse_error, "denominator must be >= 1: '" + std::string(s) + "'");
    return Rat(num, den);
  } catch (const std::invalid_argument&) {
    throw Error(Errc::parse_error, "malformed rational '" + std::string(s) + "'");
  }
}

std::string Rat::str() const {
  if (is_integer()) return v_.get_num().get_str();
  return v_.get_num().get_str() + "/" + v_.get_den().get_str();
}

Rat Rat::operator/(const Rat& o) const {
  if (o.is_zero()) throw Error(Errc::invalid_argument, "division by zero rational");
  return Rat(mpq_class(v_ / o.v_));
}

std::size_t bit_length(const BigInt& x) {
  if (x == 0) return 0;
  return mpz_sizeinbase(x.get_mpz_t(), 2);
}

BigInt pow2(unsigned long e) {
  BigInt r;
  mpz_ui_pow_ui(r.get_mpz_t(), 2, e);
  return r;
}

std::uint64_t SplitMix64::below(std::uint64_t n) {
  if (n == 0) throw Error(Errc::invalid_argument, "below(0)");
  if (n == 1) return 0;
  // reject to avoid modulo bias
  std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
  for (;;) {
    std::uint64_t v = next();
    if (v < limit) return v % n;
  }
}

BigInt SplitMix64::bits_value(std::uint64_t bits) {
  if (bits == 0) return BigInt(0);
  std::size_t words = static_cast<std::size_t>((bits + 63) / 64);
  std::vector<std::uint64_t> buf(words);
  for (auto& w : buf) w = next();
  unsigned rem = static_cast<unsigned>(bits % 64);
  if (rem != 0) buf.back() &= (~0ull) >> (64 - rem);
  BigInt r;
  mpz_import(r.get_mpz_t(), buf.size(), -1 /*lsw first*/, sizeof(std::uint64_t), 0, 0, buf.data());
  return r;
}

std::uint64_t powmod_u64(std::uint64_t base, std::uint64_t exp, std::uint64_t m) {
  if (m == 1) return 0;
  std::uint64_t r = 1;
  base %= m;
  while (exp > 0) {
    if (exp & 1) r = mulmod_u64(r, base, m);
    base = mulmod_u64(base, base, m);
    exp >>= 1;
  }
  return r;
}

std::uint64_t invmod_u64(std::uint64_t a, std::uint64_t m) {
  // extended Euclid over signed 128-bit intermediates
  __int128 t = 0, newt = 1;
  __int128 r = m, newr = a % m;
  while (newr != 0) {
    __int128 q = r / newr;
    __int128 tmp = t - q * newt;
    t = newt;
    newt = tmp;
    tmp = r - q * newr;
    r = newr;
    newr = tmp;
  }
  if (r != 1) throw Error(Errc::invalid_argument, "invmod: arguments not coprime");
  if (t < 0) t += m;
  return static_cast<std::uint64_t>(t);
}

namespace primes {
namespace {

constexpr std::uint64_t kSieveBudget = 1ull << 26;

std::mutex g_mutex;
std::vector<std::uint64_t> g_odd_primes;  // ascending, starts at 3
std::uint64_t g_sieved_to = 0;

// Extends the shared table to cover [3, limit]. Caller holds g_mutex.
void extend_locked(std::uint64_t limit) {
  if (limit <= g_sieved_to) return;
  if (limit > kSieveBudget)
    throw Error(Errc::budget_exceeded,
                "prime sieve budget exceeded (limit " + std::to_string(limit) + " > 2^26)");
  std::uint64_t n = std::max<std::uint64_t>(limit, 1u << 16);
  std::vector<bool> composite(n + 1, false);
  g_odd_primes.clear();
  for (std::uint64_t p = 3; p <= n; p += 2) {
    if (composite[p]) continue;
    g_odd_primes.push_back(p);
    for (std::uint64_t q = p * p; q <= n; q += 2 * p) composite[q] = true;
  }
  g_sieved_to = n;
}

}  // namespace

std::vector<std::uint64_t> first_odd(std::size_t count) {
  std::lock_guard<std::mutex> lock(g_mutex);
  while (g_odd_primes.size() < count) {
    if (g_sieved_to >= kSieveBudget)
      throw Error(Errc::budget_exceeded, "prime sieve budget exceeded");
    extend_locked(std::min<std::uint64_t>(kSieveBudget, std::max<std::uint64_t>(g_sieved_to * 4, 1u << 16)));
  }
  return {g_odd_primes.begin(), g_odd_primes.begin() + static_cast<std::ptrdiff_t>(count)};
}

std::vector<std::uint64_t> odd_up_to(std::uint64_t limit) {
  std::lock_guard<std::mutex> lock(g_mutex);
  extend_locked(limit);
  auto end = std::upper_bound(g_odd_primes.begin(), g_odd_primes.end(), limit);
  return {g_odd_primes.begin(), end};
}

std::vector<std::uint64_t> odd_prefix_with_product_over(std::uint64_t bits) {
  BigInt target = pow2(static_cast<unsigned long>(bits));
  BigInt product = 1;
  std::vector<std::uint64_t> result;
  std::size_t want = 16;
  for (;;) {
    auto table = first_odd(want);
    for (std::size_t i = result.size(); i < table.size(); ++i) {
      result.push_back(table[i]);
      product *= static_cast<unsigned long>(table[i]);
      if (product > target) return result;
    }
    want *= 2;
  }
}

}  // namespace primes

}  // namespace acnum
