#include "eqcheck.hpp"

#include <algorithm>
#include <cmath>

#include "lowering.hpp"

namespace acnum {

namespace {

struct LoweredPair {
  Circuit a, b;
  std::size_t size;  // max of the two (they coincide except on identity paths)
};

LoweredPair lower_for_eq(const Circuit& s1, const Circuit& s2) {
  auto [a, b] = comparison_instance(s1, s2, BasisId::monotone);
  std::size_t l = std::max(a.size(), b.size());
  return {std::move(a), std::move(b), l};
}

}  // namespace

std::uint64_t rounds_for_error(std::uint64_t l, double target_error) {
  if (target_error >= 1.0) return 1;
  if (!(target_error > 0.0))
    throw Error(Errc::invalid_argument, "target error must be in (0, 1)");
  l = std::max<std::uint64_t>(l, 1);
  // per-round retention is (2l-1)/(2l)
  double retention = 1.0 - 1.0 / static_cast<double>(2 * l);
  double estimate = std::ceil(std::log(target_error) / std::log(retention));
  std::uint64_t t = estimate < 1.0 ? 1 : static_cast<std::uint64_t>(estimate);
  // settle the floating-point estimate exactly
  mpq_class target;
  target = target_error;  // exact binary rational
  mpq_class p(2 * l - 1, 2 * l);
  auto pow_q = [&](std::uint64_t e) {
    mpq_class r;
    mpz_pow_ui(mpq_numref(r.get_mpq_t()), mpq_numref(p.get_mpq_t()), static_cast<unsigned long>(e));
    mpz_pow_ui(mpq_denref(r.get_mpq_t()), mpq_denref(p.get_mpq_t()), static_cast<unsigned long>(e));
    return r;  // num/den of p are coprime, so the powers stay canonical
  };
  mpq_class pt = pow_q(t);
  while (pt > target) {
    pt *= p;
    ++t;
  }
  while (t > 1 && pt / p <= target) {
    pt /= p;
    --t;
  }
  return t;
}

EqVerdict eq_test(const Circuit& s1, const Circuit& s2, const EqOptions& options) {
  if (!value_defined(s1) || !value_defined(s2))
    throw Error(Errc::undefined_value, "eq_test: undefined input value (promise violation)");
  LoweredPair low = lower_for_eq(s1, s2);
  std::uint64_t l_eff = std::max<std::uint64_t>(low.size, 1);
  std::uint64_t bound_bits = 2 * static_cast<std::uint64_t>(low.size);
  BigInt bound = pow2(static_cast<unsigned long>(bound_bits));
  std::uint64_t t = options.rounds ? std::max<std::uint64_t>(*options.rounds, 1)
                                   : rounds_for_error(l_eff, options.target_error);
  EqParams params{bound, t, options.seed, low.size};

  bool u64_path = bound_bits <= 62;
  for (std::uint64_t round = 0; round < t; ++round) {
    SplitMix64 rng(derive_seed(options.seed, round));
    // B is a power of two, so a (2l)-bit draw plus one is exactly uniform
    // on [1, B]; no rejection occurs.
    if (u64_path) {
      std::uint64_t mask = bound_bits == 0 ? 0 : ((~0ull) >> (64 - bound_bits));
      std::uint64_t m = (rng.next() & mask) + 1;
      if (eval_mod_u64(low.a, m) != eval_mod_u64(low.b, m))
        return {EqOutcome::not_equal, round + 1, BigInt(static_cast<unsigned long>(m)), 0.0,
                params};
    } else {
      BigInt m = rng.bits_value(bound_bits) + 1;
      if (eval_mod(low.a, m) != eval_mod(low.b, m))
        return {EqOutcome::not_equal, round + 1, m, 0.0, params};
    }
  }
  double retention = 1.0 - 1.0 / static_cast<double>(2 * l_eff);
  double error_bound = std::pow(retention, static_cast<double>(t));
  return {EqOutcome::equal, t, std::nullopt, error_bound, params};
}

CensusResult detection_census(const Circuit& s1, const Circuit& s2,
                              std::uint64_t max_bound_bits) {
  EvalOutcome v1 = eval_exact(s1), v2 = eval_exact(s2);
  if (!v1.defined() || !v2.defined())
    throw Error(Errc::undefined_value, "detection_census: undefined input value");
  if (v1.get() == v2.get())
    throw Error(Errc::invalid_argument, "detection_census: values are equal");
  LoweredPair low = lower_for_eq(s1, s2);
  std::uint64_t bound_bits = 2 * static_cast<std::uint64_t>(low.size);
  if (bound_bits > max_bound_bits)
    throw Error(Errc::budget_exceeded,
                "detection_census: B = 2^" + std::to_string(bound_bits) +
                    " exceeds the exhaustive budget 2^" + std::to_string(max_bound_bits));
  std::uint64_t total = 1ull << bound_bits;
  std::uint64_t detections = 0;
  for (std::uint64_t m = 1; m <= total; ++m)
    if (eval_mod_u64(low.a, m) != eval_mod_u64(low.b, m)) ++detections;
  return {detections, total,
          Rat(BigInt(static_cast<unsigned long>(detections)),
              BigInt(static_cast<unsigned long>(total))),
          low.size};
}

}  // namespace acnum
