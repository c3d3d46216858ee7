#include "signcheck.hpp"

#include <algorithm>

#include "lowering.hpp"

namespace acnum {

namespace {

// floor(log2 m) for m >= 1
unsigned floor_log2(std::uint64_t m) {
  unsigned r = 0;
  while (m >>= 1) ++r;
  return r;
}

}  // namespace

PrimeBasis::PrimeBasis(std::vector<std::uint64_t> primes, PrimeMode mode, std::uint64_t value_bits)
    : primes_(std::move(primes)), mode_(mode), value_bits_(value_bits) {
  if (primes_.empty()) throw Error(Errc::invalid_argument, "prime basis must be non-empty");
  for (std::size_t i = 0; i < primes_.size(); ++i) {
    if (primes_[i] < 3 || primes_[i] % 2 == 0)
      throw Error(Errc::invalid_argument, "prime basis entries must be odd primes >= 3");
    if (i > 0 && primes_[i] <= primes_[i - 1])
      throw Error(Errc::invalid_argument, "prime basis entries must be strictly ascending");
  }
  product_ = 1;
  for (std::uint64_t p : primes_) product_ *= static_cast<unsigned long>(p);
  // h = floor(log2 m) + 3 makes m/2^h < 1/4 strict for every m
  h_ = floor_log2(primes_.size()) + 3;
  // streaming product of the other primes modulo p_i, then one inversion
  inv_mi_.resize(primes_.size());
  for (std::size_t i = 0; i < primes_.size(); ++i) {
    std::uint64_t p = primes_[i];
    std::uint64_t prod = 1;
    for (std::size_t j = 0; j < primes_.size(); ++j)
      if (j != i) prod = mulmod_u64(prod, primes_[j] % p, p);
    inv_mi_[i] = invmod_u64(prod, p);
  }
  std::size_t bits = bit_length(product_);
  // M is an odd product > 1, never a power of two
  ceil_log2_m_ = bits;
}

PrimeBasis PrimeBasis::build(std::uint64_t l, PrimeMode mode) {
  if (l < 1) throw Error(Errc::invalid_argument, "circuit size budget must be >= 1");
  if (mode == PrimeMode::tight) {
    if (l > 40) throw Error(Errc::budget_exceeded, "tight basis for 2^l value bits: l too large");
    return for_value_bits(1ull << l);
  }
  // paper mode: all odd primes up to 2^(2l)
  if (2 * l >= 27)
    throw Error(Errc::budget_exceeded,
                "paper-mode sieve budget exceeded at l = " + std::to_string(l) +
                    " (use tight mode)");
  auto ps = primes::odd_up_to(1ull << (2 * l));
  BigInt product = 1;
  for (std::uint64_t p : ps) product *= static_cast<unsigned long>(p);
  BigInt needed = pow2(static_cast<unsigned long>((1ull << l) + 2));
  std::size_t want = ps.size();
  while (product <= needed) {  // only reachable at l = 1
    auto more = primes::first_odd(++want);
    ps.push_back(more.back());
    product *= static_cast<unsigned long>(more.back());
  }
  return PrimeBasis(std::move(ps), PrimeMode::paper, 1ull << l);
}

PrimeBasis PrimeBasis::for_value_bits(std::uint64_t value_bits) {
  auto ps = primes::odd_prefix_with_product_over(value_bits + 2);
  return PrimeBasis(std::move(ps), PrimeMode::tight, value_bits);
}

PrimeBasis PrimeBasis::from_primes(std::vector<std::uint64_t> primes) {
  BigInt product = 1;
  for (std::uint64_t p : primes) product *= static_cast<unsigned long>(p);
  std::size_t bits = bit_length(product);
  // covers |x| < M/4, i.e. value_bits = log2(M) - 2 rounded down
  std::uint64_t value_bits = bits >= 3 ? bits - 3 : 0;
  return PrimeBasis(std::move(primes), PrimeMode::tight, value_bits);
}

ResidueState residues_of(const Circuit& c, const PrimeBasis& basis) {
  if (c.has_opcode(OpCode::div))
    throw Error(Errc::invalid_argument, "residues_of: circuit must be division-free");
  ResidueState state;
  state.units.reserve(basis.count());
  for (std::size_t i = 0; i < basis.count(); ++i) {
    std::uint64_t p = basis.primes()[i];
    std::uint64_t x = eval_mod_u64(c, p);
    state.units.push_back(mulmod_u64(x, basis.unit_inverses()[i], p));
  }
  return state;
}

ResidueState residues_of_int(const BigInt& x, const PrimeBasis& basis) {
  ResidueState state;
  state.units.reserve(basis.count());
  for (std::size_t i = 0; i < basis.count(); ++i) {
    std::uint64_t p = basis.primes()[i];
    BigInt r;
    mpz_mod_ui(r.get_mpz_t(), x.get_mpz_t(), static_cast<unsigned long>(p));
    state.units.push_back(mulmod_u64(r.get_ui(), basis.unit_inverses()[i], p));
  }
  return state;
}

RankEstimate rank_estimate(const ResidueState& state, const PrimeBasis& basis) {
  unsigned h = basis.frac_bits();
  std::uint64_t sum = 0;
  for (std::size_t i = 0; i < basis.count(); ++i)
    sum += (state.units[i] << h) / basis.primes()[i];
  return {sum, h};
}

std::uint64_t rank_exact(const ResidueState& state, const PrimeBasis& basis) {
  BigInt sum = 0;
  for (std::size_t i = 0; i < basis.count(); ++i) {
    BigInt mi = basis.product() / static_cast<unsigned long>(basis.primes()[i]);
    sum += mi * static_cast<unsigned long>(state.units[i]);
  }
  BigInt rank = sum / basis.product();
  return rank.get_ui();
}

std::uint64_t min_guarded_shift(ResidueState& state, const PrimeBasis& basis) {
  std::uint64_t cap = basis.ceil_log2_product() + 2;
  for (std::uint64_t k = 0; k <= cap; ++k) {
    if (rank_estimate(state, basis).frac_within_guard()) return k;
    for (std::size_t i = 0; i < basis.count(); ++i)
      state.units[i] = addmod_u64(state.units[i], state.units[i], basis.primes()[i]);
    ++state.shift;
  }
  throw Error(Errc::internal_error, "reliable-shift search exceeded its cap (invariant breach)");
}

int parity_of_reduced(const ResidueState& state, const PrimeBasis& basis) {
  RankEstimate est = rank_estimate(state, basis);
  if (!est.frac_within_guard())
    throw Error(Errc::invalid_argument, "parity_of_reduced: rank-estimate guard does not hold");
  std::uint64_t sum = 0;
  for (std::uint64_t u : state.units) sum += u;
  // sum(u_i) = rank + [x]_M (mod 2)
  return static_cast<int>((sum - est.floor()) & 1);
}

SignVerdict sign_nonneg(const Circuit& c, const PrimeBasis& basis) {
  ResidueState state = residues_of(c, basis);
  std::uint64_t shift = min_guarded_shift(state, basis);
  if (shift == 0) {
    int a1 = static_cast<int>(eval_mod_u64(c, 2));
    int a2 = parity_of_reduced(state, basis);
    // positive values keep their parity under reduction mod odd M;
    // negative ones flip it
    return {a1 == a2, 0, SignBranch::parity, a1, a2};
  }
  int b = parity_of_reduced(state, basis);
  return {b == 0, shift, SignBranch::shifted, -1, b};
}

SignVerdict sign_nonneg(const Circuit& c, PrimeMode mode) {
  if (mode == PrimeMode::paper) {
    PrimeBasis basis = PrimeBasis::build(std::max<std::uint64_t>(c.size(), 1), PrimeMode::paper);
    return sign_nonneg(c, basis);
  }
  PrimeBasis basis = PrimeBasis::for_value_bits(value_bits_bound(c));
  return sign_nonneg(c, basis);
}

CmpResult compare(const Circuit& s1, const Circuit& s2, PrimeMode mode, CmpTrace* trace) {
  if (!value_defined(s1) || !value_defined(s2))
    throw Error(Errc::undefined_value, "compare: undefined input value (promise violation)");
  if (minimal_basis(s1.gates()) == BasisId::plus_hsq ||
      minimal_basis(s2.gates()) == BasisId::plus_hsq)
    throw Error(Errc::unsupported, "compare: no reduction leaves the plus-hsq basis");
  Circuit merged = merge_to_sign(s1, s2);
  Circuit d = merged.has_opcode(OpCode::div)
                  ? drop_division(merged)
                  : Circuit(BasisId::division_free,
                            {merged.gates().begin(), merged.gates().end()});
  PrimeBasis basis = mode == PrimeMode::paper
                         ? PrimeBasis::build(std::max<std::uint64_t>(d.size(), 1), PrimeMode::paper)
                         : PrimeBasis::for_value_bits(value_bits_bound(d));
  if (trace) {
    ResidueState st = residues_of(d, basis);
    RankEstimate est = rank_estimate(st, basis);
    *trace = {basis.primes(), st.units, est.units, est.frac_bits};
  }
  SignVerdict verdict = sign_nonneg(d, basis);
  return {verdict.nonneg ? CmpOutcome::geq : CmpOutcome::lt, verdict, d.size(), basis.count(),
          basis.ceil_log2_product()};
}

}  // namespace acnum
