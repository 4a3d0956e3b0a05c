#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "topofuse/topology.hpp"

namespace topofuse {

struct CutProfileOptions {
  bool stop_at_r = false;       // halt after the first non-empty size level
  uint64_t budget = 100000000;  // max subset tests before SizeLimit
  bool parallel = true;         // OpenMP kernel; false = serial reference
};

// Per-size census of malicious cut sets (column hitting sets) of a
// sub-network matrix. counts[i] is the number of size-i column subsets whose
// element-wise OR covers every row; r is the smallest such size.
struct CutProfile {
  std::vector<uint64_t> counts;  // index 0..cols; counts[0] = 1 iff no rows
  std::optional<int> r;          // nullopt: no covering set exists (empty row)
  uint64_t count_at_r = 0;
  int cols = 0;
};

// 1 iff the element-wise OR of the chosen columns hits every row.
bool covers(const std::vector<int>& cols, const BoolMatrix& sub);

// Full per-size census (or just the first non-empty level with stop_at_r).
// Rows that duplicate or contain another row are dropped first; a greedy
// disjoint-row packing bounds r from below so smaller levels are not
// enumerated. Throws SizeLimit when the remaining levels exceed the budget.
CutProfile cut_profile(const BoolMatrix& sub, const CutProfileOptions& opts = {});

// Maximum number of vertex-disjoint source-sink paths of the union graph
// formed by chaining each row between a virtual source and sink, computed by
// max-flow after capacity-1 node splitting. Reported alongside r in
// diagnostics; coincides with r when the union graph's s-t paths are exactly
// the given rows.
int max_disjoint_flow(const std::vector<std::vector<int>>& ordered_rows);

// Same, with each row visited in ascending column order.
int min_cut_lower_bound(const BoolMatrix& sub);

// Pr[an iid-p column subset hits every row]  ==  sum_i counts[i] p^i q^(m-i).
// Evaluated by whichever of subset enumeration / inclusion-exclusion over
// reduced rows fits the budget.
double cover_probability(const BoolMatrix& sub, double p, uint64_t budget = 100000000);

// Same value by signed inclusion-exclusion over (reduced) rows; the second
// algebraic route used when the per-size census does not fit the budget.
double cover_probability_ie(const BoolMatrix& sub, double p, uint64_t budget = 100000000);

struct LikelihoodPair {
  double given_one = 0.0;      // Pr(observed message vector | m0 = 1)
  double given_zero = 0.0;
  double log_given_one = 0.0;  // -inf when the side is impossible
  double log_given_zero = 0.0;
};

// Conditional probabilities of the observed conflicting message vector under
// each source hypothesis:
//   given_one  = q^(n-n0) * sum_i a_i p^i q^(n0-i),  a_i from b0
//   given_zero = q^(n-n1) * sum_i b_i p^i q^(n1-i),  b_i from b1
// with q = 1-p, and 0 when the respective side has no feasible malicious set.
LikelihoodPair conditional_likelihoods(const Partition& part, double p,
                                       uint64_t budget = 100000000);

// Independent test oracle: sums p^|S| q^(n-|S|) over all 2^n malicious
// subsets S consistent with the observation (every path's content differs
// from m0 exactly when the path meets S). Throws TooLarge above max_n.
double brute_force_conditional(const PathSystem& ps, double p, int m0, int max_n = 20);

}  // namespace topofuse
