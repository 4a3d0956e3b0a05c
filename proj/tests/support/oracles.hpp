// Test-only oracles, kept independent of the library's counting and
// likelihood code paths: plain subset enumeration over the raw matrices.
#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "topofuse/decision.hpp"
#include "topofuse/experiment.hpp"
#include "topofuse/rng.hpp"
#include "topofuse/topology.hpp"

namespace topofuse::testing {

// Naive per-size census of covering column subsets: tests all 2^m subsets.
inline std::vector<uint64_t> naive_cut_counts(const BoolMatrix& sub) {
  const int m = sub.cols();
  std::vector<uint64_t> counts(m + 1, 0);
  for (uint64_t s = 0; s < (1ULL << m); ++s) {
    bool ok = true;
    for (int r = 0; r < sub.rows() && ok; ++r) {
      bool hit = false;
      for (int c = 0; c < m && !hit; ++c)
        if (((s >> c) & 1ULL) && sub.at(r, c)) hit = true;
      if (!hit) ok = false;
    }
    if (ok) ++counts[__builtin_popcountll(s)];
  }
  return counts;
}

inline std::optional<int> naive_r(const std::vector<uint64_t>& counts) {
  for (size_t i = 1; i < counts.size(); ++i)
    if (counts[i]) return static_cast<int>(i);
  return std::nullopt;
}

// Random conflicting instance: k paths over vehicle ids 1..n.
inline std::vector<MessageCopy> random_instance(Rng& rng, int max_k, int max_n) {
  while (true) {
    const int k = 2 + static_cast<int>(rng.next_u64() % (max_k - 1));
    const int n = 2 + static_cast<int>(rng.next_u64() % (max_n - 1));
    std::vector<MessageCopy> copies;
    std::map<std::vector<VehicleId>, int> seen;
    bool bad = false;
    for (int i = 0; i < k; ++i) {
      const int len = 1 + static_cast<int>(rng.next_u64() % n);
      std::vector<VehicleId> ids;
      for (int v = 1; v <= n; ++v) ids.push_back(v);
      for (int j = 0; j < len; ++j)
        std::swap(ids[j], ids[j + rng.next_u64() % (ids.size() - j)]);
      ids.resize(len);
      const int content = rng.coin();
      auto it = seen.find(ids);
      if (it != seen.end() && it->second != content) {
        bad = true;
        break;
      }
      seen.emplace(ids, content);
      copies.push_back({content, ids});
    }
    if (bad) continue;
    int k1 = 0;
    for (const auto& c : copies) k1 += c.content;
    if (k1 == 0 || k1 == static_cast<int>(copies.size())) continue;
    return copies;
  }
}

// Exact P_succ of each rule on a fixed set of relay paths, enumerated over
// all 2^n malicious subsets and both source messages. Ties score 1/2.
struct ExactResult {
  std::map<Rule, double> psucc;
  bool optimum_flip_improvable = false;  // over conflicting observations
  double worst_flip_gain = 0.0;
};

inline ExactResult exact_psucc(const std::vector<std::vector<VehicleId>>& paths, double p,
                               double p1, const AlgoParams& params,
                               const std::vector<Rule>& rules) {
  int n = 0;
  for (const auto& pa : paths)
    for (VehicleId v : pa) n = std::max(n, v);
  const int k = static_cast<int>(paths.size());

  std::map<std::vector<int>, std::array<double, 2>> joint;  // contents -> P(obs, m0)
  const double prior[2] = {1.0 - p1, p1};
  for (uint64_t s = 0; s < (1ULL << n); ++s) {
    double ps_prob = 1.0;
    for (int v = 1; v <= n; ++v) ps_prob *= ((s >> (v - 1)) & 1ULL) ? p : (1.0 - p);
    std::vector<int> hit(k, 0);
    for (int i = 0; i < k; ++i)
      for (VehicleId v : paths[i])
        if ((s >> (v - 1)) & 1ULL) {
          hit[i] = 1;
          break;
        }
    for (int m0 = 0; m0 < 2; ++m0) {
      std::vector<int> contents(k);
      for (int i = 0; i < k; ++i) contents[i] = m0 ^ hit[i];
      joint[contents][m0] += prior[m0] * ps_prob;
    }
  }

  ExactResult res;
  Rng rng(1234);  // ties are scored 1/2, so draws never matter
  for (Rule rule : rules) res.psucc[rule] = 0.0;
  for (const auto& [contents, pr] : joint) {
    std::vector<MessageCopy> copies;
    for (int i = 0; i < k; ++i) copies.push_back({contents[i], paths[i]});
    PathSystem ps = build_path_system(copies);
    for (Rule rule : rules) {
      Verdict v;
      switch (rule) {
        case Rule::Optimum: v = decide_optimum(ps, p, p1, params.cost, rng); break;
        case Rule::Heuristic: v = decide_heuristic(ps, rng); break;
        case Rule::Majority: v = decide_majority(ps, rng); break;
        case Rule::WvMmse: v = decide_wv_mmse(ps, p, rng); break;
        case Rule::WvHop: v = decide_wv_hop(ps, params.alpha, rng); break;
      }
      if (v.tie)
        res.psucc[rule] += 0.5 * (pr[0] + pr[1]);
      else
        res.psucc[rule] += pr[v.d];
      if (rule == Rule::Optimum && ps.conflicting() && !v.tie) {
        const double gain = pr[1 - v.d] - pr[v.d];
        if (gain > res.worst_flip_gain) res.worst_flip_gain = gain;
        if (gain > 1e-12 * (pr[0] + pr[1]) + 1e-300) res.optimum_flip_improvable = true;
      }
    }
  }
  return res;
}

}  // namespace topofuse::testing
