#include "gen.hpp"

#include <algorithm>

namespace acnum {

namespace {

std::vector<OpCode> admissible_ops(BasisId basis) {
  std::vector<OpCode> ops;
  for (OpCode op : {OpCode::add, OpCode::sub, OpCode::mul, OpCode::div, OpCode::hsq})
    if (opcode_admissible(basis, op)) ops.push_back(op);
  return ops;
}

}  // namespace

Circuit generate(const GenSpec& spec) {
  auto ops = admissible_ops(spec.basis);
  std::vector<double> weights;
  for (OpCode op : ops) {
    auto it = spec.weights.find(op);
    double w = it == spec.weights.end() ? (spec.weights.empty() ? 1.0 : 0.0) : it->second;
    if (w < 0) throw Error(Errc::invalid_argument, "opcode weights must be non-negative");
    weights.push_back(w);
  }
  double total = 0;
  for (double w : weights) total += w;
  if (total <= 0) throw Error(Errc::invalid_argument, "no opcode has positive weight");

  SplitMix64 rng(spec.seed);
  auto pick_op = [&]() {
    // weighted pick on a 53-bit uniform fraction
    double u = static_cast<double>(rng.next() >> 11) / 9007199254740992.0 * total;
    for (std::size_t i = 0; i < ops.size(); ++i) {
      if (u < weights[i] || i + 1 == ops.size()) return ops[i];
      u -= weights[i];
    }
    return ops.back();
  };

  for (std::uint32_t attempt = 0; attempt <= spec.max_retries; ++attempt) {
    std::vector<Gate> gates;
    gates.reserve(spec.size);
    for (std::uint32_t i = 1; i <= spec.size; ++i) {
      Gate g{pick_op(), 0, 0};
      g.lhs = static_cast<std::uint32_t>(rng.below(i));
      if (!opcode_is_unary(g.op)) g.rhs = static_cast<std::uint32_t>(rng.below(i));
      gates.push_back(g);
    }
    Circuit candidate(spec.basis, std::move(gates));
    EvalOutcome out = eval_exact(candidate);
    if (!out.defined()) continue;
    std::size_t bits = std::max(bit_length(out.get().num()), bit_length(out.get().den()));
    if (bits >= spec.max_value_bits) continue;
    return candidate;
  }
  throw Error(Errc::budget_exceeded,
              "generate: retry cap exhausted (" + std::to_string(spec.max_retries) + " attempts)");
}

}  // namespace acnum
