#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "topofuse/cutset.hpp"
#include "topofuse/rng.hpp"
#include "topofuse/topology.hpp"

namespace topofuse {

// Bayes decision costs u_dj of declaring d when the source message is j.
// Defaults make cost minimization equal to maximizing the probability of a
// correct decision.
struct CostMatrix {
  double u00 = 0.0, u01 = 1.0, u10 = 1.0, u11 = 0.0;
};

enum class Rule { Optimum, Heuristic, Majority, WvMmse, WvHop };

constexpr const char* kRuleNames[] = {"optimum", "heuristic", "majority", "wv_mmse", "wv_hop"};
inline const char* rule_name(Rule r) { return kRuleNames[static_cast<int>(r)]; }
std::optional<Rule> rule_from_name(const std::string& name);
inline constexpr Rule kAllRules[] = {Rule::Optimum, Rule::Heuristic, Rule::Majority,
                                     Rule::WvMmse, Rule::WvHop};

struct Verdict {
  int d = 0;
  Rule rule = Rule::Majority;
  bool tie = false;        // resolved by a fair coin
  bool unanimous = false;  // decided by unanimity / direct evidence
  // rule-specific diagnostics
  double log_ratio = 0.0;          // optimum: log(given_one) - log(given_zero)
  std::optional<int> r0, r1;       // heuristic: minimal cut sizes (nullopt = impossible side)
  uint64_t a_r0 = 0, b_r1 = 0;     // heuristic: counts at the minimal size
  int flow0 = -1, flow1 = -1;      // union-graph disjoint-path values, for comparison with r
  std::vector<double> weights;     // weighted votes
};

// Likelihood-ratio test against P0(u10-u00)/(P1(u01-u11)); unanimous and
// relay-free evidence is followed directly.
Verdict decide_optimum(const PathSystem& ps, double p, double p1, const CostMatrix& cost,
                       Rng& rng, uint64_t budget = 100000000);

// Minimal-malicious-cut comparison (r0 vs r1, then counts); needs no p.
Verdict decide_heuristic(const PathSystem& ps, Rng& rng, uint64_t budget = 100000000);

Verdict decide_majority(const PathSystem& ps, Rng& rng);

// Weighted vote, w = C^-1 1 / (1^T C^-1 1), C_ij = Pr(paths i and j both
// compromised). Singular C falls back to ridge regularization.
Verdict decide_wv_mmse(const PathSystem& ps, double p, Rng& rng);

// Weighted vote with hop discount w_i proportional to alpha^(h_i - 1).
Verdict decide_wv_hop(const PathSystem& ps, double alpha, Rng& rng);

struct RatioPoint {
  double p = 0.0;
  double f1 = 0.0;     // cover probability of the content-0 side (b0)
  double f2 = 0.0;     // cover probability of the content-1 side (b1)
  double ratio = 0.0;  // given_one / given_zero
};

std::vector<RatioPoint> likelihood_ratio_curve(const Partition& part,
                                               const std::vector<double>& p_grid);

// Root of ratio(p) = 1 inside [lo, hi], if the log-ratio changes sign there.
std::optional<double> ratio_unity_root(const Partition& part, double lo, double hi);

}  // namespace topofuse
