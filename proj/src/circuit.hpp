#pragma once

// Straight-line circuits over a declared basis: representation, text/JSON
// (de)serialization, exact evaluation (the ground-truth oracle) and modular
// evaluation. Circuits are immutable after construction and safe to share
// across threads.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "numeric.hpp"

namespace acnum {

// hsq is the unary map x -> x^2/2.
enum class OpCode : std::uint8_t { add, sub, mul, div, hsq };

enum class BasisId : std::uint8_t { arithmetic, division_free, monotone, plus_hsq };

bool opcode_admissible(BasisId basis, OpCode op);
bool opcode_is_unary(OpCode op);

std::string_view to_string(BasisId basis);
std::string_view to_string(OpCode op);
std::optional<BasisId> basis_from_string(std::string_view name);
std::optional<OpCode> opcode_from_string(std::string_view name);

struct Gate {
  OpCode op;
  std::uint32_t lhs;
  std::uint32_t rhs;  // unused when op == hsq

  bool operator==(const Gate& o) const {
    return op == o.op && lhs == o.lhs && (op == OpCode::hsq || rhs == o.rhs);
  }
};

// Node 0 is the implicit constant 1; the gate at list position i (1-based)
// defines node i. Topological: every operand index is strictly smaller than
// the gate's own node index.
class Circuit {
 public:
  Circuit() : basis_(BasisId::monotone) {}  // empty circuit, value 1
  Circuit(BasisId basis, std::vector<Gate> gates);

  BasisId basis() const { return basis_; }
  std::size_t size() const { return gates_.size(); }
  bool empty() const { return gates_.empty(); }
  std::span<const Gate> gates() const { return gates_; }
  const Gate& gate(std::size_t node) const { return gates_[node - 1]; }  // node >= 1

  bool has_opcode(OpCode op) const;

  bool operator==(const Circuit& o) const { return basis_ == o.basis_ && gates_ == o.gates_; }

 private:
  BasisId basis_;
  std::vector<Gate> gates_;
};

// Smallest basis admitting every opcode that actually occurs. Throws when
// hsq is mixed with sub/mul/div (no declared basis admits that).
BasisId minimal_basis(std::span<const Gate> gates);

enum class WireFormat { text, json };

// Text grammar (one item per line, '#' starts a comment):
//   basis (arithmetic|division-free|monotone|plus-hsq)   -- optional header
//   v<i> = (add|sub|mul|div) v<j> v<k>                    -- j,k < i, i from 1
//   v<i> = hsq v<j>
// Without a header the smallest admitting basis is inferred.
Circuit parse_circuit(std::string_view text, WireFormat format);
std::string serialize_circuit(const Circuit& c, WireFormat format);

// Exact value or "undefined at gate k" (first division by exact zero).
// Undefined is an outcome, not a failure.
class EvalOutcome {
 public:
  static EvalOutcome value(Rat v) { return EvalOutcome(std::move(v), 0, true); }
  static EvalOutcome undefined(std::uint32_t gate) { return EvalOutcome(Rat(), gate, false); }

  bool defined() const { return defined_; }
  const Rat& get() const;
  std::uint32_t undefined_gate() const;

 private:
  EvalOutcome(Rat v, std::uint32_t g, bool d) : value_(std::move(v)), gate_(g), defined_(d) {}
  Rat value_;
  std::uint32_t gate_;
  bool defined_;
};

// Gate-by-gate evaluation over exact rationals, canonicalizing at each step.
EvalOutcome eval_exact(const Circuit& c);

// Least non-negative residue of the (integer) circuit value. Requires an
// integer-valued gate set: div and hsq gates are rejected. modulus >= 1.
BigInt eval_mod(const Circuit& c, const BigInt& modulus);
std::uint64_t eval_mod_u64(const Circuit& c, std::uint64_t modulus);

// True iff the circuit's value is defined (cheap when no div gate occurs).
bool value_defined(const Circuit& c);

// max(|num|, den) < 2^(2^l). Throws on undefined values.
bool value_bound_check(const Circuit& c);

// Structural bound B with |v(c)| < 2^B, from the per-gate height recurrence
// (add/sub: Lj+Lk+1, mul/div: Lj+Lk, hsq: 2Lj+1). Saturates at 2^40.
std::uint64_t value_bits_bound(const Circuit& c);

// FNV-1a over the canonical text serialization.
std::uint64_t circuit_hash(const Circuit& c);

// The size-l repeated-squaring circuit (value 2^(2^(l-1)) for l >= 1).
Circuit repeated_squaring(std::uint32_t l);

}  // namespace acnum
