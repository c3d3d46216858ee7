#include <doctest.h>

#include <sstream>

#include "circuit.hpp"
#include "gen.hpp"

using namespace acnum;

namespace {

Circuit from_text(const std::string& text) { return parse_circuit(text, WireFormat::text); }

}  // namespace

TEST_CASE("parse: single add gate infers the monotone basis") {
  Circuit c = from_text("v1 = add v0 v0\n");
  CHECK(c.basis() == BasisId::monotone);
  REQUIRE(c.size() == 1);
  CHECK(c.gate(1).op == OpCode::add);
  CHECK(c.gate(1).lhs == 0);
  CHECK(c.gate(1).rhs == 0);
}

TEST_CASE("parse: repeated-squaring text reproduces the doubling tower") {
  std::ostringstream text;
  text << "v1 = add v0 v0\n";
  for (int i = 2; i <= 6; ++i) text << "v" << i << " = mul v" << i - 1 << " v" << i - 1 << "\n";
  Circuit c = from_text(text.str());
  CHECK(c == repeated_squaring(6));
  EvalOutcome v = eval_exact(c);
  REQUIRE(v.defined());
  BigInt expected;
  mpz_ui_pow_ui(expected.get_mpz_t(), 2, 32);  // 2^(2^(6-1))
  CHECK(v.get() == Rat(expected));
}

TEST_CASE("parse: opcode outside the declared basis is rejected") {
  CHECK_THROWS_WITH_AS(from_text("basis monotone\nv1 = hsq v0\n"),
                       doctest::Contains("not in declared basis"), Error);
}

TEST_CASE("parse: diagnostics carry line and column") {
  try {
    from_text("v1 = add v0 v0\nv2 = frob v1 v1\n");
    FAIL("expected parse error");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::parse_error);
    CHECK(std::string(e.what()).find("line 2") != std::string::npos);
    CHECK(std::string(e.what()).find("column 6") != std::string::npos);
  }
}

TEST_CASE("parse: forward and self references are rejected") {
  CHECK_THROWS_AS(from_text("v1 = add v1 v0\n"), Error);
  CHECK_THROWS_AS(from_text("v1 = add v0 v2\n"), Error);
  CHECK_THROWS_AS(from_text("v2 = add v0 v0\n"), Error);  // indices start at 1
  CHECK_THROWS_AS(from_text("v1 = add v0 v0\nv3 = add v1 v1\n"), Error);  // gap
}

TEST_CASE("parse: comments, blank lines, and headers") {
  Circuit c = from_text("# a comment\n\nbasis division-free\nv1 = sub v0 v0  # zero\n");
  CHECK(c.basis() == BasisId::division_free);
  CHECK(c.size() == 1);
  CHECK_THROWS_AS(from_text("v1 = add v0 v0\nbasis monotone\n"), Error);  // header after gates
  CHECK_THROWS_AS(from_text("basis monotone\nbasis monotone\n"), Error);
}

TEST_CASE("serialize: canonical text form") {
  Circuit c(BasisId::monotone, {{OpCode::add, 0, 0}});
  CHECK(serialize_circuit(c, WireFormat::text) == "basis monotone\nv1 = add v0 v0\n");
}

TEST_CASE("serialize: json form of the one-gate circuit") {
  Circuit c(BasisId::monotone, {{OpCode::add, 0, 0}});
  std::string json = serialize_circuit(c, WireFormat::json);
  Circuit back = parse_circuit(json, WireFormat::json);
  CHECK(back == c);
  CHECK(json.find("\"basis\":\"monotone\"") != std::string::npos);
  CHECK(json.find("\"op\":\"add\"") != std::string::npos);
  CHECK(json.find("\"lhs\":0") != std::string::npos);
  CHECK(json.find("\"rhs\":0") != std::string::npos);
}

TEST_CASE("round-trip: parse(serialize) is the identity on random circuits") {
  const BasisId bases[] = {BasisId::arithmetic, BasisId::division_free, BasisId::monotone,
                           BasisId::plus_hsq};
  int done = 0;
  for (std::uint64_t seed = 0; done < 1000; ++seed) {
    GenSpec spec;
    spec.basis = bases[seed % 4];
    spec.size = static_cast<std::uint32_t>(seed % 65);
    spec.seed = derive_seed(42, seed);
    spec.max_value_bits = 1u << 20;  // round-trip cares about structure only
    Circuit c;
    try {
      c = generate(spec);
    } catch (const Error&) {
      continue;  // retry-cap exhaustion at large sizes is fine here
    }
    ++done;
    for (WireFormat f : {WireFormat::text, WireFormat::json})
      CHECK(parse_circuit(serialize_circuit(c, f), f) == c);
  }
}

TEST_CASE("eval: empty circuit has value 1") {
  EvalOutcome v = eval_exact(Circuit{});
  REQUIRE(v.defined());
  CHECK(v.get() == Rat(1));
}

TEST_CASE("eval: division yields 3/2") {
  // 2, 3, then 3/2
  Circuit c(BasisId::arithmetic,
            {{OpCode::add, 0, 0}, {OpCode::add, 1, 0}, {OpCode::div, 2, 1}});
  EvalOutcome v = eval_exact(c);
  REQUIRE(v.defined());
  CHECK(v.get() == Rat(BigInt(3), BigInt(2)));
  CHECK(v.get().str() == "3/2");
}

TEST_CASE("eval: division by zero is undefined at the offending gate") {
  Circuit c(BasisId::arithmetic, {{OpCode::sub, 0, 0}, {OpCode::div, 0, 1}});
  EvalOutcome v = eval_exact(c);
  REQUIRE_FALSE(v.defined());
  CHECK(v.undefined_gate() == 2);
  CHECK_THROWS_AS(v.get(), Error);
}

TEST_CASE("eval: hsq computes x^2/2") {
  Circuit c(BasisId::plus_hsq, {{OpCode::hsq, 0, 0}});
  CHECK(eval_exact(c).get() == Rat(BigInt(1), BigInt(2)));
}

TEST_CASE("eval_mod: repeated squaring of size 4 mod 7") {
  Circuit c = repeated_squaring(4);
  REQUIRE(eval_exact(c).get() == Rat(BigInt(256)));
  BigInt expected = BigInt(256) % 7;  // independent route
  CHECK(eval_mod(c, BigInt(7)) == expected);
  CHECK(eval_mod_u64(c, 7) == 4);
}

TEST_CASE("eval_mod: modulus 1 sends everything to 0") {
  CHECK(eval_mod(repeated_squaring(3), BigInt(1)) == 0);
  CHECK(eval_mod_u64(Circuit{}, 1) == 0);
}

TEST_CASE("eval_mod: negative values reduce to least non-negative residues") {
  // 2, then 1 - 2 = -1
  Circuit c(BasisId::division_free, {{OpCode::add, 0, 0}, {OpCode::sub, 0, 1}});
  REQUIRE(eval_exact(c).get() == Rat(-1));
  CHECK(eval_mod(c, BigInt(5)) == 4);
  CHECK(eval_mod_u64(c, 5) == 4);
}

TEST_CASE("eval_mod: div and hsq gates are rejected") {
  Circuit with_div(BasisId::arithmetic, {{OpCode::div, 0, 0}});
  CHECK_THROWS_AS(eval_mod(with_div, BigInt(5)), Error);
  Circuit with_hsq(BasisId::plus_hsq, {{OpCode::hsq, 0, 0}});
  CHECK_THROWS_AS(eval_mod(with_hsq, BigInt(5)), Error);
  CHECK_THROWS_AS(eval_mod(Circuit{}, BigInt(0)), Error);
}

TEST_CASE("eval_mod: agrees with the exact value on division-free circuits") {
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    GenSpec spec;
    spec.basis = BasisId::division_free;
    spec.size = 1 + static_cast<std::uint32_t>(seed % 10);
    spec.seed = derive_seed(7, seed);
    Circuit c = generate(spec);
    Rat v = eval_exact(c).get();
    REQUIRE(v.is_integer());
    SplitMix64 rng(seed);
    BigInt m(static_cast<unsigned long>(1 + rng.below(1u << 20)));
    BigInt expected;
    mpz_mod(expected.get_mpz_t(), v.num().get_mpz_t(), m.get_mpz_t());
    CHECK(eval_mod(c, m) == expected);
    CHECK(eval_mod_u64(c, m.get_ui()) == expected.get_ui());
  }
}

TEST_CASE("value bound: repeated-squaring family stays under 2^(2^l)") {
  for (std::uint32_t l = 1; l <= 10; ++l) CHECK(value_bound_check(repeated_squaring(l)));
  CHECK(value_bound_check(Circuit{}));
}

TEST_CASE("value bound: 10000 random arithmetic circuits up to size 12") {
  int checked = 0;
  for (std::uint64_t seed = 0; checked < 10000; ++seed) {
    GenSpec spec;
    spec.basis = BasisId::arithmetic;
    spec.size = static_cast<std::uint32_t>(seed % 13);
    spec.seed = derive_seed(100, seed);
    spec.max_value_bits = 1ull << 13;  // generous: the bound itself is 2^12 bits
    Circuit c;
    try {
      c = generate(spec);
    } catch (const Error&) {
      continue;
    }
    ++checked;
    CHECK(value_bound_check(c));
    // the structural bound is an upper bound on the actual value
    Rat v = eval_exact(c).get();
    CHECK(bit_length(v.num()) <= value_bits_bound(c));
  }
}

TEST_CASE("value bound: undefined values are an error") {
  Circuit c(BasisId::arithmetic, {{OpCode::sub, 0, 0}, {OpCode::div, 0, 1}});
  CHECK_THROWS_AS(value_bound_check(c), Error);
}

TEST_CASE("circuit hash is stable and structure-sensitive") {
  Circuit a(BasisId::monotone, {{OpCode::add, 0, 0}});
  Circuit b(BasisId::monotone, {{OpCode::mul, 0, 0}});
  CHECK(circuit_hash(a) == circuit_hash(a));
  CHECK(circuit_hash(a) != circuit_hash(b));
}
