#pragma once

// One-sided randomized equality test for circuit values: t independent
// rounds compare residues modulo a random m in [1, B], B = 2^(2l) for the
// lowered monotone comparison pair. NOT_EQUAL is always correct; EQUAL is
// wrong with probability at most (1 - 1/(2l))^t.

#include <optional>

#include "circuit.hpp"

namespace acnum {

struct EqOptions {
  std::uint64_t seed = 0;
  double target_error = 1e-9;            // ignored when rounds is set
  std::optional<std::uint64_t> rounds;   // explicit round count
};

// Parameters as actually resolved against the lowered pair.
struct EqParams {
  BigInt bound;              // B = 2^(2 * lowered_size)
  std::uint64_t rounds;      // t >= 1
  std::uint64_t seed;
  std::size_t lowered_size;  // max size of the monotone pair
};

enum class EqOutcome { equal, not_equal };

struct EqVerdict {
  EqOutcome outcome;
  std::uint64_t rounds_run;
  std::optional<BigInt> witness;  // modulus separating the values; not_equal only
  double error_bound;             // one-sided, applies to equal only (0 otherwise)
  EqParams params;
};

EqVerdict eq_test(const Circuit& s1, const Circuit& s2, const EqOptions& options = {});

// Minimal t with (1 - 1/(2l))^t <= target_error; t = 1 when target >= 1.
std::uint64_t rounds_for_error(std::uint64_t l, double target_error);

// Exhaustive single-round detection probability over every m in [1, B];
// requires unequal values and B <= 2^max_bound_bits.
struct CensusResult {
  std::uint64_t detections;
  std::uint64_t total;  // B
  Rat fraction;
  std::size_t lowered_size;
};

CensusResult detection_census(const Circuit& s1, const Circuit& s2,
                              std::uint64_t max_bound_bits = 24);

}  // namespace acnum
