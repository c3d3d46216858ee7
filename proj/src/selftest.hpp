#pragma once

// Built-in regression vectors: the M = 105 residue chain, the exhaustive
// detection census for 4 vs 2, canonical SDP certificates and the
// repeated-squaring value, all checked exactly.

#include <string>
#include <vector>

namespace acnum {

struct SelftestResult {
  bool passed;
  std::vector<std::pair<std::string, bool>> checks;  // (label, ok)
};

SelftestResult run_selftest();

}  // namespace acnum
