#pragma once

// Deterministic sign/comparison of circuit values in residue arithmetic:
// CRT rank recovery through a fixed-point estimate, the doubling criterion
// selecting a reliable shift, and the parity-based >= 0 decision.

#include <vector>

#include "circuit.hpp"

namespace acnum {

enum class PrimeMode { paper, tight };

// Odd primes p1 < ... < pm with product M large enough that every value the
// basis is used on satisfies |x| < M/4. h fractional bits are carried so
// that m/2^h < 1/4 holds structurally.
class PrimeBasis {
 public:
  // Spec-level construction from a circuit size budget:
  //   tight: minimal prime prefix with M > 2^(2^l + 2)
  //   paper: all odd primes <= 2^(2l), extended if that product is too
  //          small (only happens at l = 1)
  static PrimeBasis build(std::uint64_t l, PrimeMode mode);

  // Minimal prime prefix with M > 2^(value_bits + 2); covers |x| < 2^value_bits.
  static PrimeBasis for_value_bits(std::uint64_t value_bits);

  // Explicit prime list (ascending odd primes); value_bits derived from M.
  static PrimeBasis from_primes(std::vector<std::uint64_t> primes);

  const std::vector<std::uint64_t>& primes() const { return primes_; }
  std::size_t count() const { return primes_.size(); }
  const std::vector<std::uint64_t>& unit_inverses() const { return inv_mi_; }
  const BigInt& product() const { return product_; }  // M
  unsigned frac_bits() const { return h_; }
  PrimeMode mode() const { return mode_; }
  std::uint64_t value_bits() const { return value_bits_; }
  std::uint64_t ceil_log2_product() const { return ceil_log2_m_; }

 private:
  PrimeBasis(std::vector<std::uint64_t> primes, PrimeMode mode, std::uint64_t value_bits);

  std::vector<std::uint64_t> primes_;
  std::vector<std::uint64_t> inv_mi_;  // (M/p_i)^-1 mod p_i
  BigInt product_;
  unsigned h_;
  PrimeMode mode_;
  std::uint64_t value_bits_;
  std::uint64_t ceil_log2_m_;
};

// Unit residues u_i = [x * (M/p_i)^-1] mod p_i of the represented value,
// together with the doubling shift applied so far (the state stands for
// 2^shift * x).
struct ResidueState {
  std::vector<std::uint64_t> units;
  std::uint64_t shift = 0;
};

ResidueState residues_of(const Circuit& c, const PrimeBasis& basis);
ResidueState residues_of_int(const BigInt& x, const PrimeBasis& basis);

// Fixed-point estimate of sum(u_i / p_i) in units of 2^-h. Its floor equals
// the CRT rank whenever the fractional part is at most 3/4.
struct RankEstimate {
  std::uint64_t units;
  unsigned frac_bits;

  std::uint64_t floor() const { return units >> frac_bits; }
  std::uint64_t frac_units() const { return units & ((1ull << frac_bits) - 1); }
  // {sigma} <= 3/4, evaluated exactly in fixed point
  bool frac_within_guard() const { return 4 * frac_units() <= 3ull << frac_bits; }
};

RankEstimate rank_estimate(const ResidueState& state, const PrimeBasis& basis);

// Exact rank floor(sum(M_i * u_i) / M); test support for the CRT identity.
std::uint64_t rank_exact(const ResidueState& state, const PrimeBasis& basis);

// Advances the state by doubling until the rank-estimate guard holds and
// returns the number of doublings (0 when the guard already holds).
// Bounded by ceil(log2 M); exceeding the internal cap is an invariant
// breach, not an input condition.
std::uint64_t min_guarded_shift(ResidueState& state, const PrimeBasis& basis);

// Parity of [2^shift * x] mod M, from sum(u_i) - rank mod 2. Requires the
// rank-estimate guard to hold on the state.
int parity_of_reduced(const ResidueState& state, const PrimeBasis& basis);

enum class SignBranch { parity, shifted };

struct SignVerdict {
  bool nonneg;  // v >= 0 (zero reports nonneg)
  std::uint64_t shift_used;
  SignBranch branch;
  int value_parity;    // parity branch: [v]_2
  int reduced_parity;  // parity branch: [[v]_M]_2; shifted branch: the bit b
};

// Sign decision for a division-free circuit. The basis must cover the
// value: |v(c)| < M/4.
SignVerdict sign_nonneg(const Circuit& c, const PrimeBasis& basis);
// Convenience: builds the basis (tight: sized by the structural value-bit
// bound; paper: by circuit size).
SignVerdict sign_nonneg(const Circuit& c, PrimeMode mode = PrimeMode::tight);

enum class CmpOutcome { geq, lt };

// Residue-level audit data for the initial (unshifted) state.
struct CmpTrace {
  std::vector<std::uint64_t> primes;
  std::vector<std::uint64_t> units;
  std::uint64_t estimate_units;
  unsigned frac_bits;
};

struct CmpResult {
  CmpOutcome outcome;
  SignVerdict verdict;
  std::size_t lowered_size;
  std::size_t basis_primes;
  std::uint64_t basis_log2_m;
};

// v(s1) >= v(s2) via the sign of one division-free difference circuit.
CmpResult compare(const Circuit& s1, const Circuit& s2, PrimeMode mode = PrimeMode::tight,
                  CmpTrace* trace = nullptr);

}  // namespace acnum
