#pragma once

// Semidefinite programs encoding circuit values: for a {+, x^2/2} circuit
// the emitted pencil Q_0 + sum x_i Q_i >= 0 has feasible last-variable
// values exactly [v(c), inf), so minimizing x_l recovers v(c). Threshold
// instances add one 1x1 block [q - x_l] (feasible iff v(c) <= q).
// Certification is exact rational arithmetic throughout.

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "circuit.hpp"

namespace acnum {

// Affine form c0 + sum coef_i * x_i with rational coefficients. Variables
// are labeled by gate index; terms are kept sorted by label.
struct AffineForm {
  Rat constant;
  std::vector<std::pair<std::uint32_t, Rat>> terms;

  void add_term(std::uint32_t var, const Rat& coef);
  Rat eval(const std::vector<Rat>& values_by_label) const;
  bool operator==(const AffineForm& o) const;
};

// Symmetric block of dimension 1 or 2; entries[0] = a11, entries[1] = a12,
// entries[2] = a22 (unused for dim 1).
struct SdpBlock {
  int dim;
  std::array<AffineForm, 3> entries;

  bool operator==(const SdpBlock& o) const;
};

enum class EncodingMode { subst_x0, keep_x0 };

struct SdpProgram {
  EncodingMode mode;
  // variable labels in column order: 1..l, or 0..l in keep_x0 mode
  std::vector<std::uint32_t> var_labels;
  std::vector<SdpBlock> blocks;
  std::vector<Rat> objective;  // per variable; all-zero for feasibility
  std::optional<Rat> threshold;
  std::uint64_t source_hash;

  std::size_t n_vars() const { return var_labels.size(); }
  bool operator==(const SdpProgram& o) const;
};

// One block per gate: add(j,k) -> [x_i - x_j - x_k]; hsq(j) ->
// [[2x_i, x_j], [x_j, 1]]. x_0 is substituted as 1 by default; keep_x0
// makes it an explicit variable pinned by the two-sided 2x2 block
// [[x_0 - 1, 0], [0, 1 - x_0]]. Objective minimizes x_l.
SdpProgram emit_value_program(const Circuit& c, EncodingMode mode = EncodingMode::subst_x0);

// Value program plus the block [q - x_l], zero objective.
SdpProgram emit_threshold_feasibility(const Circuit& c, const Rat& q,
                                      EncodingMode mode = EncodingMode::subst_x0);

struct BlockCheck {
  int dim;
  Rat a11, a12, a22;
  Rat det;  // dim 2 only
  bool psd;
};

struct PsdCertificate {
  std::vector<Rat> assignment;  // by variable column order
  std::vector<BlockCheck> blocks;
  bool all_psd;
};

// Substitutes x_i = v(s_i) and checks every block PSD exactly. For value
// programs a failure is an emission bug; for threshold programs the
// certificate passes iff v(c) <= q.
PsdCertificate canonical_certificate(const Circuit& c, const SdpProgram& program);

// Exact monotone lower-bound propagation: returns true iff the propagated
// bound on x_l exceeds q, which proves the threshold instance infeasible.
bool certify_infeasible(const SdpProgram& program, const Circuit& c, const Rat& q);

// SDPA sparse format (.dat-s): m, nblocks, block sizes, objective, then
// "matno blkno i j value" entries (1-indexed, upper triangle), with
// F_0 = -Q_0 and F_i = Q_i per the format's X = sum x_i F_i - F_0
// convention. Rounds to `precision` significant digits and notes lossy
// rounding in a header comment.
std::string write_sdpa(const SdpProgram& program, int precision = 30);

// Exact interchange form with numerator/denominator pairs; round-trips
// through read_exact_json.
std::string write_exact_json(const SdpProgram& program);
SdpProgram read_exact_json(std::string_view text);

// Structural reader for .dat-s (entries as doubles).
struct SdpaEntry {
  int matno, blkno, row, col;
  double value;
};
struct SdpaData {
  int n_vars, n_blocks;
  std::vector<int> block_sizes;
  std::vector<double> objective;
  std::vector<SdpaEntry> entries;
};
SdpaData read_sdpa(std::string_view text);

}  // namespace acnum
