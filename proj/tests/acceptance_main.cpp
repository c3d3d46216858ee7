// Acceptance suite: one pass/fail line per criterion, non-zero exit on any
// failure. Oracle throughout is exact rational evaluation.

#include <acnum/acnum.h>

#include <chrono>
#include <cstdio>
#include <string>
#include <vector>

#include "circuit.hpp"
#include "eqcheck.hpp"
#include "gen.hpp"
#include "lowering.hpp"
#include "sdpgen.hpp"
#include "signcheck.hpp"

using namespace acnum;

namespace {

int g_failures = 0;

class Timer {
 public:
  Timer() : start_(std::chrono::steady_clock::now()) {}
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

void report(int criterion, bool ok, const std::string& what, double elapsed) {
  std::printf("criterion %d [%s] %s (%.1fs)\n", criterion, ok ? "PASS" : "FAIL", what.c_str(),
              elapsed);
  std::fflush(stdout);
  if (!ok) ++g_failures;
}

Rat value_of(const Circuit& c) { return eval_exact(c).get(); }

Rat pair_difference(const PairCircuit& p) {
  std::vector<Rat> values;
  values.reserve(p.program.size() + 1);
  values.emplace_back(1);
  for (const Gate& g : p.program.gates()) {
    switch (g.op) {
      case OpCode::add:
        values.push_back(values[g.lhs] + values[g.rhs]);
        break;
      case OpCode::mul:
        values.push_back(values[g.lhs] * values[g.rhs]);
        break;
      case OpCode::hsq:
        values.push_back(values[g.lhs] * values[g.lhs] * Rat(BigInt(1), BigInt(2)));
        break;
      default:
        throw Error(Errc::internal_error, "unexpected opcode in pair program");
    }
  }
  return values[p.pos_out] - values[p.neg_out];
}

Circuit random_circuit(BasisId basis, std::uint32_t size, std::uint64_t seed) {
  GenSpec spec;
  spec.basis = basis;
  spec.size = size;
  spec.seed = seed;
  return generate(spec);
}

// All division-free circuits with at most max_size gates, by opcode and
// wire enumeration.
std::vector<Circuit> enumerate_division_free(std::uint32_t max_size) {
  const OpCode ops[] = {OpCode::add, OpCode::sub, OpCode::mul};
  std::vector<Circuit> result;
  std::vector<Gate> gates;
  auto recurse = [&](auto&& self, std::uint32_t remaining) -> void {
    result.emplace_back(BasisId::division_free, gates);
    if (remaining == 0) return;
    std::uint32_t node = static_cast<std::uint32_t>(gates.size() + 1);
    for (OpCode op : ops)
      for (std::uint32_t l = 0; l < node; ++l)
        for (std::uint32_t r = 0; r < node; ++r) {
          gates.push_back({op, l, r});
          self(self, remaining - 1);
          gates.pop_back();
        }
  };
  recurse(recurse, max_size);
  return result;
}

// --- criterion 1 + 8 -----------------------------------------------------

struct SignStats {
  std::uint64_t mismatches = 0;
  std::uint64_t shift_violations = 0;
  std::uint64_t compares = 0;
  std::vector<Circuit> corpus;  // input circuits, reused by criterion 6
};

SignStats run_sign_equivalence() {
  SignStats stats;

  // (a) exhaustive over all division-free pairs with size <= 3
  std::vector<Circuit> all = enumerate_division_free(3);
  std::vector<Rat> values;
  values.reserve(all.size());
  for (const Circuit& c : all) values.push_back(value_of(c));
  for (std::size_t i = 0; i < all.size(); ++i) {
    for (std::size_t j = 0; j < all.size(); ++j) {
      CmpResult r = compare(all[i], all[j]);
      ++stats.compares;
      if ((r.outcome == CmpOutcome::geq) != (values[i] >= values[j])) ++stats.mismatches;
      if (r.verdict.shift_used > r.basis_log2_m) ++stats.shift_violations;
    }
  }
  stats.corpus = all;

  // (b) 1000 seeded random arithmetic pairs with size <= 8
  for (std::uint64_t pair = 0; pair < 1000; ++pair) {
    Circuit a = random_circuit(BasisId::arithmetic, 1 + pair % 8, derive_seed(1001, pair));
    Circuit b = random_circuit(BasisId::arithmetic, 1 + (pair / 2) % 8, derive_seed(1002, pair));
    CmpResult r = compare(a, b);
    ++stats.compares;
    if ((r.outcome == CmpOutcome::geq) != (value_of(a) >= value_of(b))) ++stats.mismatches;
    if (r.verdict.shift_used > r.basis_log2_m) ++stats.shift_violations;
    stats.corpus.push_back(a);
    stats.corpus.push_back(b);
  }
  return stats;
}

// --- criterion 2 ---------------------------------------------------------

bool run_worked_vectors() {
  PrimeBasis basis = PrimeBasis::from_primes({3, 5, 7});
  bool ok = basis.product() == 105 && basis.frac_bits() == 4;

  ResidueState seventeen = residues_of_int(BigInt(17), basis);
  ok = ok && seventeen.units == std::vector<std::uint64_t>{1, 2, 3};
  ok = ok && rank_exact(seventeen, basis) == 1;
  RankEstimate est = rank_estimate(seventeen, basis);
  ok = ok && est.units == 17 && est.frac_bits == 4;  // sigma = 17/16
  {
    ResidueState walk = seventeen;
    ok = ok && min_guarded_shift(walk, basis) == 0;
  }

  ResidueState one = residues_of_int(BigInt(1), basis);
  ok = ok && one.units == std::vector<std::uint64_t>{2, 1, 1};
  ok = ok && rank_exact(one, basis) == 1;
  {
    ResidueState walk = one;
    ok = ok && min_guarded_shift(walk, basis) == 3;
    ok = ok && parity_of_reduced(walk, basis) == 0;
  }
  return ok;
}

// --- criterion 3 ---------------------------------------------------------

// Structurally distinct, value-preserving variant: swap operands of every
// commutative gate and insert one dead gate before the output.
Circuit equal_variant(const Circuit& c, std::uint64_t seed) {
  SplitMix64 rng(seed);
  std::vector<Gate> gates(c.gates().begin(), c.gates().end());
  for (Gate& g : gates)
    if ((g.op == OpCode::add || g.op == OpCode::mul) && rng.below(2)) std::swap(g.lhs, g.rhs);
  // dead gate inserted at a random position strictly before the output
  std::uint32_t pos = gates.empty() ? 0 : static_cast<std::uint32_t>(rng.below(gates.size()));
  for (Gate& g : gates) {
    if (g.lhs > pos) ++g.lhs;
    if (g.rhs > pos) ++g.rhs;
  }
  std::uint32_t max_ref = pos;  // nodes 0..pos are valid operands at the insertion point
  Gate dead{OpCode::add, static_cast<std::uint32_t>(rng.below(max_ref + 1)),
            static_cast<std::uint32_t>(rng.below(max_ref + 1))};
  gates.insert(gates.begin() + pos, dead);
  return Circuit(c.basis(), std::move(gates));
}

std::uint64_t run_equal_soundness() {
  std::uint64_t false_rejections = 0;
  for (std::uint64_t i = 0; i < 200; ++i) {
    Circuit base = random_circuit(BasisId::monotone, 1 + i % 6, derive_seed(3001, i));
    Circuit variant = equal_variant(base, derive_seed(3002, i));
    if (value_of(base) != value_of(variant))
      throw Error(Errc::internal_error, "equal-pair construction broke value preservation");
    if (serialize_circuit(base, WireFormat::text) ==
        serialize_circuit(variant, WireFormat::text))
      throw Error(Errc::internal_error, "equal-pair construction is not structurally distinct");
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
      EqOptions options;
      options.seed = seed;
      options.target_error = 1e-6;
      if (eq_test(base, variant, options).outcome != EqOutcome::equal) ++false_rejections;
    }
  }
  return false_rejections;
}

// --- criterion 4 ---------------------------------------------------------

std::uint64_t run_census_bound() {
  std::uint64_t violations = 0;
  std::uint64_t made = 0;
  for (std::uint64_t i = 0; made < 50; ++i) {
    Circuit a = random_circuit(BasisId::monotone, 1 + i % 5, derive_seed(4001, i));
    Circuit b = random_circuit(BasisId::monotone, 1 + (i / 2) % 5, derive_seed(4002, i));
    if (value_of(a) == value_of(b)) continue;
    ++made;
    CensusResult census = detection_census(a, b);
    Rat bound(BigInt(1), BigInt(2 * static_cast<unsigned long>(census.lowered_size)));
    if (census.fraction < bound) ++violations;
  }
  return violations;
}

// --- criterion 5 ---------------------------------------------------------

struct LoweringStats {
  std::uint64_t violations = 0;
  std::vector<Circuit> corpus;
};

LoweringStats run_lowering_exactness() {
  LoweringStats stats;
  for (std::uint64_t i = 0; i < 1000; ++i) {
    Circuit c = random_circuit(BasisId::arithmetic, 1 + i % 10, derive_seed(5001, i));
    stats.corpus.push_back(c);
    Rat v = value_of(c);

    LoweringReport dd_report;
    Circuit dd = drop_division(c, &dd_report);
    Rat vd = value_of(dd);
    bool ok = vd.sign() == v.sign() && vd.is_zero() == v.is_zero();
    ok = ok && dd_report.output_size <= 5 * dd_report.input_size + 5;

    LoweringReport ds_report;
    PairCircuit mono = drop_subtraction(dd, &ds_report);
    ok = ok && pair_difference(mono) == vd;
    ok = ok && ds_report.output_size <= 7 * ds_report.input_size + 7;

    Circuit pos = extract_pos(mono);
    LoweringReport ph_report;
    PairCircuit hsq = to_plus_hsq(pos, &ph_report);
    ok = ok && pair_difference(hsq) == value_of(pos);
    ok = ok && ph_report.output_size <= 11 * ph_report.input_size + 11;

    if (!ok) ++stats.violations;
  }
  return stats;
}

// --- criterion 6 ---------------------------------------------------------

std::uint64_t run_value_bound(const std::vector<Circuit>& corpus) {
  std::uint64_t violations = 0;
  for (const Circuit& c : corpus)
    if (!value_bound_check(c)) ++violations;
  for (std::uint32_t l = 1; l <= 16; ++l) {
    BigInt expected;
    mpz_ui_pow_ui(expected.get_mpz_t(), 2, 1u << (l - 1));
    if (value_of(repeated_squaring(l)) != Rat(expected)) ++violations;
  }
  return violations;
}

// --- criterion 7 ---------------------------------------------------------

std::uint64_t run_sdp_faithfulness() {
  std::uint64_t violations = 0;
  for (std::uint64_t i = 0; i < 500; ++i) {
    Circuit c = random_circuit(BasisId::plus_hsq, 1 + i % 10, derive_seed(7001, i));
    SdpProgram value_program = emit_value_program(c);
    if (!canonical_certificate(c, value_program).all_psd) {
      ++violations;
      continue;
    }
    Rat v = value_of(c);
    Rat eps(BigInt(1), pow2(20));
    for (const Rat& q : {v - Rat(1), v, v + Rat(1), v - eps, v + eps}) {
      SdpProgram threshold = emit_threshold_feasibility(c, q);
      bool infeasible_cert = certify_infeasible(threshold, c, q);
      bool feasible_cert = canonical_certificate(c, threshold).all_psd;
      bool expected_feasible = v <= q;
      // the two certificates must decide, complementarily, and match the oracle
      if (feasible_cert == infeasible_cert || feasible_cert != expected_feasible) ++violations;
    }
  }
  return violations;
}

// --- criterion 9 ---------------------------------------------------------

bool run_determinism() {
  const char* a_text = "v1 = add v0 v0\nv2 = mul v1 v1\nv3 = add v2 v1\n";
  const char* b_text = "v1 = add v0 v0\nv2 = mul v1 v0\n";
  bool ok = true;
  for (int run = 0; run < 1; ++run) {
    acnum_circuit *a1 = nullptr, *b1 = nullptr, *a2 = nullptr, *b2 = nullptr;
    ok = ok && acnum_circuit_parse(a_text, ACNUM_FORMAT_TEXT, &a1) == ACNUM_OK;
    ok = ok && acnum_circuit_parse(b_text, ACNUM_FORMAT_TEXT, &b1) == ACNUM_OK;
    ok = ok && acnum_circuit_parse(a_text, ACNUM_FORMAT_TEXT, &a2) == ACNUM_OK;
    ok = ok && acnum_circuit_parse(b_text, ACNUM_FORMAT_TEXT, &b2) == ACNUM_OK;
    if (!ok) return false;
    for (unsigned long long seed : {0ull, 7ull, 123456789ull}) {
      int out = 0;
      char *r1 = nullptr, *r2 = nullptr, *c1 = nullptr, *c2 = nullptr;
      ok = ok && acnum_eq(a1, b1, 1e-9, seed, 0, 1, &out, &r1) == ACNUM_OK;
      ok = ok && acnum_eq(a2, b2, 1e-9, seed, 0, 1, &out, &r2) == ACNUM_OK;
      ok = ok && r1 && r2 && std::string(r1) == std::string(r2);
      ok = ok && acnum_cmp(a1, b1, ACNUM_MODE_TIGHT, 1, 1, seed, &out, &c1) == ACNUM_OK;
      ok = ok && acnum_cmp(a2, b2, ACNUM_MODE_TIGHT, 1, 1, seed, &out, &c2) == ACNUM_OK;
      ok = ok && c1 && c2 && std::string(c1) == std::string(c2);
      acnum_string_free(r1);
      acnum_string_free(r2);
      acnum_string_free(c1);
      acnum_string_free(c2);
    }
    acnum_circuit_free(a1);
    acnum_circuit_free(b1);
    acnum_circuit_free(a2);
    acnum_circuit_free(b2);
  }
  return ok;
}

}  // namespace

int main() {
  std::vector<Circuit> bound_corpus;

  try {
    {
      Timer t;
      SignStats stats = run_sign_equivalence();
      bound_corpus = stats.corpus;
      double elapsed = t.seconds();
      report(1, stats.mismatches == 0 && elapsed <= 300.0,
             "sign equivalence, exhaustive size<=3 and 1000 random arithmetic pairs (" +
                 std::to_string(stats.compares) + " compares, " +
                 std::to_string(stats.mismatches) + " mismatches)",
             elapsed);
      Timer t8;
      report(8, stats.shift_violations == 0,
             "k* <= ceil(log2 M) across the criterion-1 corpus (" +
                 std::to_string(stats.shift_violations) + " violations)",
             t8.seconds());
    }
    {
      Timer t;
      bool ok = run_worked_vectors();
      report(2, ok, "worked CRT vectors over {3,5,7}", t.seconds());
    }
    {
      Timer t;
      std::uint64_t bad = run_equal_soundness();
      report(3, bad == 0,
             "equality soundness on 200 equal pairs x 100 seeds (" + std::to_string(bad) +
                 " false rejections)",
             t.seconds());
    }
    {
      Timer t;
      std::uint64_t violations = run_census_bound();
      double elapsed = t.seconds();
      report(4, violations == 0 && elapsed <= 120.0,
             "census >= 1/(2l) on 50 unequal monotone pairs (" + std::to_string(violations) +
                 " violations)",
             elapsed);
    }
    {
      Timer t;
      LoweringStats stats = run_lowering_exactness();
      for (const Circuit& c : stats.corpus) bound_corpus.push_back(c);
      report(5, stats.violations == 0,
             "lowering exactness and size constants on 1000 arithmetic circuits (" +
                 std::to_string(stats.violations) + " violations)",
             t.seconds());
    }
    {
      Timer t;
      std::uint64_t violations = run_value_bound(bound_corpus);
      report(6, violations == 0,
             "value bound max(|num|,den) < 2^(2^l) on " + std::to_string(bound_corpus.size()) +
                 " circuits plus the repeated-squaring family l=1..16",
             t.seconds());
    }
    {
      Timer t;
      std::uint64_t violations = run_sdp_faithfulness();
      report(7, violations == 0,
             "SDP certificates and threshold verdicts on 500 plus-hsq circuits (" +
                 std::to_string(violations) + " violations)",
             t.seconds());
    }
    {
      Timer t;
      report(9, run_determinism(), "byte-identical JSON reports across runs", t.seconds());
    }
  } catch (const std::exception& e) {
    std::printf("acceptance suite aborted: %s\n", e.what());
    return 2;
  }

  if (g_failures == 0) {
    std::printf("acceptance: all criteria passed\n");
    return 0;
  }
  std::printf("acceptance: %d criterion(s) FAILED\n", g_failures);
  return 1;
}
