#pragma once

// Basis-reduction passes: arithmetic -> division-free -> monotone pair ->
// {+, x^2/2} pair, the merge trick reducing two-circuit comparison to the
// sign of one circuit, and the combined comparison-instance builder.
// All passes are pure functions on immutable inputs.

#include <optional>
#include <utility>
#include <vector>

#include "circuit.hpp"

namespace acnum {

// Two designated outputs inside one gate sequence; the represented value is
// v(pos_out) - v(neg_out).
struct PairCircuit {
  Circuit program;
  std::uint32_t pos_out;
  std::uint32_t neg_out;
};

struct LoweringReport {
  std::string pass_name;
  std::size_t input_size;
  std::size_t output_size;
  Rat expansion_factor;  // output/max(input,1)
};

LoweringReport make_report(std::string pass, std::size_t in, std::size_t out);

// One circuit computing v(s1) - v(s2); size l1 + l2 + 1. Inputs must embed
// into a basis with subtraction (anything except plus-hsq).
Circuit merge_to_sign(const Circuit& s1, const Circuit& s2);

// Sign- and zero-preserving removal of division: the result computes
// N*D where v(s) = N/D along separately tracked numerator/denominator
// chains. Circuits without div gates pass through unchanged (D = 1).
// The input value must be defined.
Circuit drop_division(const Circuit& s, LoweringReport* report = nullptr);

// Division-free -> monotone pair with v(s) = v(pos) - v(neg). The pair
// tracks for node 0 start at (2, 1): the monotone basis cannot generate 0,
// and only track differences matter.
PairCircuit drop_subtraction(const Circuit& s, LoweringReport* report = nullptr);

// Monotone -> {+, x^2/2} pair via the half-square product identity
// (A-B)(C-D) realized as sums of squares; exactly 10 gates per mul
// (4 add, 4 hsq, 2 add) and 2 per add.
PairCircuit to_plus_hsq(const Circuit& s, LoweringReport* report = nullptr);

// Standalone circuits for the two tracks. Valid because every pass above
// emits the pair outputs as the final two, mutually independent gates.
Circuit extract_pos(const PairCircuit& p);
Circuit extract_neg(const PairCircuit& p);

// (S', S'') over target_basis with v(s1) >= v(s2) iff v(S') >= v(S'') and
// v(s1) = v(s2) iff v(S') = v(S''). Composes the passes above as needed;
// appends one report per applied pass.
std::pair<Circuit, Circuit> comparison_instance(const Circuit& s1, const Circuit& s2,
                                                BasisId target,
                                                std::vector<LoweringReport>* reports = nullptr);

// Unreferenced-gate elimination (outputs and their cones are kept).
Circuit remove_dead_gates(const Circuit& c);
PairCircuit remove_dead_gates(const PairCircuit& p);

// CLI-facing single-input lowering: a plain circuit for targets reachable
// by embedding or division removal, a pair for monotone/plus-hsq targets.
struct LowerResult {
  std::optional<Circuit> circuit;
  std::optional<PairCircuit> pair;
  std::vector<LoweringReport> reports;
};

LowerResult lower_to(const Circuit& s, BasisId target, bool cleanup);

namespace detail {

// Pass outputs with the full per-node track maps (node 0..l of the input),
// for composing pair-level reductions.
struct PairTracks {
  Circuit program;
  std::vector<std::uint32_t> pos;
  std::vector<std::uint32_t> neg;
};

PairTracks drop_subtraction_tracks(const Circuit& s);
PairTracks to_plus_hsq_tracks(const Circuit& s);

}  // namespace detail

}  // namespace acnum
