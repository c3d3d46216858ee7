#include "selftest.hpp"

#include "circuit.hpp"
#include "eqcheck.hpp"
#include "lowering.hpp"
#include "numeric.hpp"
#include "sdpgen.hpp"
#include "signcheck.hpp"

namespace acnum {

namespace {

// monotone circuit with value 17: 2, 4, 16, 17
Circuit circuit17() {
  return Circuit(BasisId::monotone, {{OpCode::add, 0, 0},
                                     {OpCode::mul, 1, 1},
                                     {OpCode::mul, 2, 2},
                                     {OpCode::add, 3, 0}});
}

// division-free circuit with value -17
Circuit circuit_neg17() {
  return Circuit(BasisId::division_free, {{OpCode::add, 0, 0},
                                          {OpCode::mul, 1, 1},
                                          {OpCode::mul, 2, 2},
                                          {OpCode::add, 3, 0},
                                          {OpCode::sub, 0, 0},
                                          {OpCode::sub, 5, 4}});
}

}  // namespace

SelftestResult run_selftest() {
  SelftestResult result{true, {}};
  auto check = [&](const std::string& label, bool ok) {
    result.checks.emplace_back(label, ok);
    result.passed = result.passed && ok;
  };

  PrimeBasis basis = PrimeBasis::from_primes({3, 5, 7});
  check("prime basis {3,5,7}: M = 105", basis.product() == 105);
  check("prime basis {3,5,7}: h = 4", basis.frac_bits() == 4);

  {
    ResidueState st = residues_of_int(BigInt(17), basis);
    check("unit residues of 17 = (1,2,3)",
          st.units == std::vector<std::uint64_t>{1, 2, 3});
    check("rank of 17 = 1", rank_exact(st, basis) == 1);
    RankEstimate est = rank_estimate(st, basis);
    check("estimate of 17 = 17/16", est.units == 17 && est.frac_bits == 4);
    ResidueState walk = st;
    check("shift for 17 = 0", min_guarded_shift(walk, basis) == 0);
    check("reduced parity of 17 = 1", parity_of_reduced(st, basis) == 1);
  }
  {
    ResidueState st = residues_of_int(BigInt(1), basis);
    check("unit residues of 1 = (2,1,1)",
          st.units == std::vector<std::uint64_t>{2, 1, 1});
    check("rank of 1 = 1", rank_exact(st, basis) == 1);
    ResidueState walk = st;
    check("shift for 1 = 3", min_guarded_shift(walk, basis) == 3);
    check("parity after shifting 1 to 8 = 0", parity_of_reduced(walk, basis) == 0);
  }
  {
    SignVerdict v = sign_nonneg(circuit17(), basis);
    check("sign(17) nonneg via parity branch",
          v.nonneg && v.branch == SignBranch::parity && v.value_parity == 1 &&
              v.reduced_parity == 1);
    SignVerdict n = sign_nonneg(circuit_neg17(), basis);
    check("sign(-17) negative (parities 1 vs 0)",
          !n.nonneg && n.value_parity == 1 && n.reduced_parity == 0);
    SignVerdict one = sign_nonneg(Circuit{}, basis);
    check("sign(1) nonneg via shifted branch, k = 3",
          one.nonneg && one.branch == SignBranch::shifted && one.shift_used == 3 &&
              one.reduced_parity == 0);
    Circuit zero(BasisId::division_free, {{OpCode::sub, 0, 0}});
    SignVerdict z = sign_nonneg(zero, basis);
    check("sign(0) nonneg with k = 0", z.nonneg && z.shift_used == 0);
  }
  {
    Circuit four(BasisId::monotone, {{OpCode::add, 0, 0}, {OpCode::mul, 1, 1}});
    Circuit two(BasisId::monotone, {{OpCode::add, 0, 0}, {OpCode::mul, 1, 0}});
    CensusResult census = detection_census(four, two);
    check("census 4 vs 2 = 14/16",
          census.detections == 14 && census.total == 16 &&
              census.fraction == Rat(BigInt(14), BigInt(16)));
  }
  {
    Circuit c(BasisId::plus_hsq, {{OpCode::add, 0, 0}, {OpCode::hsq, 1, 0}, {OpCode::hsq, 2, 0}});
    SdpProgram p = emit_value_program(c);
    PsdCertificate cert = canonical_certificate(c, p);
    bool tight_dets = cert.blocks.size() == 3 && cert.blocks[1].det.is_zero() &&
                      cert.blocks[2].det.is_zero();
    check("canonical certificate for add/hsq/hsq", cert.all_psd && tight_dets);
  }
  {
    EvalOutcome v = eval_exact(repeated_squaring(5));
    check("repeated squaring l=5 evaluates to 65536",
          v.defined() && v.get() == Rat(BigInt(65536)));
  }
  check("rounds for error 2^-20 at l=10 is 271",
        rounds_for_error(10, std::ldexp(1.0, -20)) == 271);

  return result;
}

}  // namespace acnum
