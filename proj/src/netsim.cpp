#include "topofuse/netsim.hpp"

#include <algorithm>
#include <cmath>
#include <queue>

#include "topofuse/errors.hpp"

namespace topofuse {

void ScenarioConfig::validate() const {
  if (!(rho > 0.0)) throw Error(Errc::BadConfig, "rho must be positive");
  if (!(range > 0.0)) throw Error(Errc::BadConfig, "range must be positive");
  if (!(beta > 0.0)) throw Error(Errc::BadConfig, "beta must be positive");
  if (!(dist > 0.0)) throw Error(Errc::BadConfig, "dist must be positive");
  if (wait < 0.0) throw Error(Errc::BadConfig, "wait must be non-negative");
  if (!(p >= 0.0 && p <= 1.0)) throw Error(Errc::BadConfig, "p must be in [0,1]");
  if (!(p1 > 0.0 && p1 < 1.0)) throw Error(Errc::BadConfig, "p1 must be in (0,1)");
  if (max_paths < 1) throw Error(Errc::BadConfig, "max_paths must be at least 1");
  if (retry_cap < 1) throw Error(Errc::BadConfig, "retry_cap must be at least 1");
}

Road generate_road(const ScenarioConfig& cfg, Rng& rng) {
  Road road;
  road.length = cfg.dist;
  road.range = cfg.range;
  double x = rng.exponential(cfg.rho);
  while (x < cfg.dist) {
    road.relay_pos.push_back(x);
    x += rng.exponential(cfg.rho);
  }
  return road;
}

bool connected(const Road& road) {
  double prev = 0.0;
  for (double x : road.relay_pos) {
    if (x - prev > road.range) return false;
    prev = x;
  }
  return road.length - prev <= road.range;
}

namespace {

// exact-hop-count DFS in lexicographic relay order; forward progress only
struct Harvester {
  const Road& road;
  int max_paths;
  std::vector<HarvestedPath> out;
  std::vector<VehicleId> cur;

  // relays reachable from coordinate x, strictly ahead
  // first relay index (0-based) strictly beyond coordinate x
  int first_ahead(double x, int from) const {
    int i = from;
    while (i < road.relays() && road.relay_pos[i] <= x) ++i;
    return i;
  }

  bool reaches_dest(double x) const { return road.length - x <= road.range; }

  void dfs(double x, int from_idx, int hops_left) {
    if (static_cast<int>(out.size()) >= max_paths) return;
    if (hops_left == 1) {
      if (reaches_dest(x))
        out.push_back({cur, static_cast<int>(cur.size()) + 1});
      return;
    }
    for (int i = first_ahead(x, from_idx); i < road.relays(); ++i) {
      double xi = road.relay_pos[i];
      if (xi - x > road.range) break;  // positions ascend; later ones only farther
      // prune: destination must stay reachable with the remaining hops
      if (road.length - xi > (hops_left - 1) * road.range) continue;
      cur.push_back(i + 1);
      dfs(xi, i + 1, hops_left - 1);
      cur.pop_back();
      if (static_cast<int>(out.size()) >= max_paths) return;
    }
  }
};

int min_hops(const Road& road) {
  // greedy farthest-reach on a line gives the minimum hop count
  double x = 0.0;
  int hops = 0;
  int i = 0;
  const int n = road.relays();
  while (true) {
    ++hops;
    if (road.length - x <= road.range) return hops;
    // farthest relay within range of x and ahead of it
    int best = -1;
    while (i < n && road.relay_pos[i] - x <= road.range) {
      if (road.relay_pos[i] > x) best = i;
      ++i;
    }
    if (best < 0) return -1;
    x = road.relay_pos[best];
    i = best + 1;
  }
}

}  // namespace

std::vector<HarvestedPath> harvest_paths(const Road& road, const ScenarioConfig& cfg) {
  const int h0 = min_hops(road);
  if (h0 < 0) throw Error(Errc::NoRoute, "no source-destination path");

  const int extra = static_cast<int>(std::floor(cfg.wait / cfg.beta + 1e-9));
  // a forward path visits each relay at most once
  const int hmax = std::min(h0 + extra, road.relays() + 1);

  Harvester hv{road, cfg.max_paths, {}, {}};
  for (int h = h0; h <= hmax; ++h) {
    if (static_cast<int>(hv.out.size()) >= cfg.max_paths) break;
    if (h == 1) {
      if (road.length <= road.range) hv.out.push_back({{}, 1});
      continue;
    }
    hv.dfs(0.0, 0, h);
  }
  return hv.out;
}

std::vector<VehicleId> draw_malicious(const Road& road, double p, Rng& rng) {
  std::vector<VehicleId> out;
  for (int i = 0; i < road.relays(); ++i)
    if (rng.bernoulli(p)) out.push_back(i + 1);
  return out;
}

std::vector<MessageCopy> make_copies(const std::vector<HarvestedPath>& paths,
                                     const std::vector<VehicleId>& malicious, int m0) {
  std::vector<MessageCopy> copies;
  copies.reserve(paths.size());
  for (const auto& hp : paths) {
    bool hit = false;
    for (VehicleId v : hp.relays)
      if (std::binary_search(malicious.begin(), malicious.end(), v)) {
        hit = true;
        break;
      }
    copies.push_back({hit ? 1 - m0 : m0, hp.relays});
  }
  return copies;
}

TrialOutcome run_trial(const ScenarioConfig& cfg, Rng& rng) {
  cfg.validate();
  TrialOutcome t;
  t.m0 = rng.bernoulli(cfg.p1) ? 1 : 0;
  for (int attempt = 0; attempt < cfg.retry_cap; ++attempt) {
    Road road = generate_road(cfg, rng);
    if (!connected(road)) {
      ++t.resamples;
      continue;
    }
    auto paths = harvest_paths(road, cfg);
    t.malicious = draw_malicious(road, cfg.p, rng);
    t.copies = make_copies(paths, t.malicious, t.m0);
    t.positions = road.relay_pos;
    return t;
  }
  throw Error(Errc::NoRoute, "retry cap exhausted without a connected road");
}

}  // namespace topofuse
