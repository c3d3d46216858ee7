#include <doctest.h>

#include "gen.hpp"

using namespace acnum;

TEST_CASE("generate: size 0 gives the empty circuit") {
  GenSpec spec;
  spec.size = 0;
  spec.seed = 1;
  CHECK(generate(spec) == Circuit(BasisId::arithmetic, {}));
}

TEST_CASE("generate: deterministic per seed") {
  GenSpec spec;
  spec.basis = BasisId::arithmetic;
  spec.size = 12;
  spec.seed = 987;
  Circuit a = generate(spec);
  Circuit b = generate(spec);
  CHECK(a == b);
  spec.seed = 988;
  CHECK_FALSE(generate(spec) == a);
}

TEST_CASE("generate: 1000 arithmetic circuits parse, are defined, and obey the value bound") {
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    GenSpec spec;
    spec.basis = BasisId::arithmetic;
    spec.size = 8;
    spec.seed = derive_seed(81, seed);
    Circuit c = generate(spec);
    CHECK(c.size() == 8);
    CHECK(parse_circuit(serialize_circuit(c, WireFormat::text), WireFormat::text) == c);
    CHECK(value_defined(c));
    CHECK(value_bound_check(c));
  }
}

TEST_CASE("generate: weights restrict the opcode mix") {
  GenSpec spec;
  spec.basis = BasisId::arithmetic;
  spec.size = 30;
  spec.seed = 4;
  spec.weights = {{OpCode::add, 1.0}};
  Circuit c = generate(spec);
  for (const Gate& g : c.gates()) CHECK(g.op == OpCode::add);
  spec.weights = {{OpCode::div, 1.0}};
  // div-only circuits always evaluate to 1, so the guard accepts them
  Circuit d = generate(spec);
  for (const Gate& g : d.gates()) CHECK(g.op == OpCode::div);
  spec.weights = {{OpCode::add, -1.0}};
  CHECK_THROWS_AS(generate(spec), Error);
}

TEST_CASE("generate: basis restricts admissible opcodes") {
  GenSpec spec;
  spec.basis = BasisId::plus_hsq;
  spec.size = 20;
  spec.seed = 11;
  spec.max_value_bits = 1u << 22;
  Circuit c = generate(spec);
  for (const Gate& g : c.gates()) CHECK((g.op == OpCode::add || g.op == OpCode::hsq));
}

TEST_CASE("generate: impossible budgets exhaust the retry cap") {
  GenSpec spec;
  spec.basis = BasisId::monotone;
  spec.size = 24;
  spec.seed = 3;
  spec.weights = {{OpCode::mul, 1.0}};
  spec.max_value_bits = 2;  // repeated products of 1 stay at 1... mul-only keeps value 1
  // value is always 1 (bit length 1 < 2): actually satisfiable
  CHECK(generate(spec).size() == 24);
  spec.weights = {{OpCode::add, 1.0}};
  // add-only value grows without bound, budget 2 bits forces failure at size 24
  CHECK_THROWS_AS(generate(spec), Error);
}
