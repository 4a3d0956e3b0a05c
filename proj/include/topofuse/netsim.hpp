#pragma once

#include <cstdint>
#include <vector>

#include "topofuse/rng.hpp"
#include "topofuse/topology.hpp"

namespace topofuse {

struct ScenarioConfig {
  double rho = 0.01;    // vehicle density, vehicles/m
  double range = 250.0; // transmission range, m (unit disk)
  double beta = 0.004;  // per-hop delay, s
  double dist = 2000.0; // source-destination distance L, m
  double wait = 0.1;    // waiting window T, s
  double p = 0.1;       // malicious fraction
  double p1 = 0.001;    // prior Pr(m0 = 1)
  int max_paths = 64;   // harvest cap, smallest-hop-first
  uint64_t seed = 1;
  int retry_cap = 100;  // NoRoute resamples per trial

  void validate() const;
};

// 1-D road: source at 0, destination at dist, relays in between. Relay ids
// are 1..n in ascending coordinate order; two nodes are linked iff their
// distance is within range.
struct Road {
  std::vector<double> relay_pos;  // ascending; relay id i sits at relay_pos[i-1]
  double length = 0.0;
  double range = 0.0;

  double pos(VehicleId id) const { return relay_pos[id - 1]; }
  int relays() const { return static_cast<int>(relay_pos.size()); }
};

struct HarvestedPath {
  std::vector<VehicleId> relays;  // ordered by coordinate; empty = direct S-D
  int hops = 0;
};

struct TrialOutcome {
  int m0 = 0;
  std::vector<VehicleId> malicious;  // sorted relay ids
  std::vector<MessageCopy> copies;
  std::vector<double> positions;  // relay id i at positions[i-1]
  int resamples = 0;              // disconnected roads discarded before this one
};

// Poisson relay placement with density rho on (0, L).
Road generate_road(const ScenarioConfig& cfg, Rng& rng);

bool connected(const Road& road);

// All loop-free forward-progress S->D paths whose arrival time h*beta falls
// within (min hops)*beta + wait, ordered by hop count then lexicographically
// by relay index, truncated to max_paths. Throws NoRoute when disconnected.
std::vector<HarvestedPath> harvest_paths(const Road& road, const ScenarioConfig& cfg);

std::vector<VehicleId> draw_malicious(const Road& road, double p, Rng& rng);

// Copies delivered over the harvested paths: content = m0 flipped iff the
// path meets the malicious set.
std::vector<MessageCopy> make_copies(const std::vector<HarvestedPath>& paths,
                                     const std::vector<VehicleId>& malicious, int m0);

// One full dissemination: sample m0 ~ Bernoulli(p1), resample disconnected
// roads up to retry_cap (counting discards), tamper and deliver.
TrialOutcome run_trial(const ScenarioConfig& cfg, Rng& rng);

}  // namespace topofuse
