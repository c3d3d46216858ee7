#pragma once

// Seeded random circuit generation for fuzzing and benchmarks. Generation
// is deterministic given the seed; candidates whose value is undefined or
// whose num/den exceed the bit budget are resampled up to the retry cap.

#include <map>

#include "circuit.hpp"

namespace acnum {

struct GenSpec {
  BasisId basis = BasisId::arithmetic;
  std::uint32_t size = 0;
  std::uint64_t seed = 0;
  std::map<OpCode, double> weights;     // empty = uniform over admissible opcodes
  std::uint64_t max_value_bits = 4096;  // reject |num| or den at/above 2^bits
  std::uint32_t max_retries = 256;
};

Circuit generate(const GenSpec& spec);

}  // namespace acnum
