#include <doctest.h>

#include <algorithm>
#include <set>

#include "topofuse/netsim.hpp"

using namespace topofuse;

namespace {

Road fixed_road(std::vector<double> pos, double length, double range = 250.0) {
  Road r;
  r.relay_pos = std::move(pos);
  r.length = length;
  r.range = range;
  return r;
}

ScenarioConfig base_cfg() {
  ScenarioConfig cfg;
  cfg.rho = 0.01;
  cfg.dist = 1000.0;
  cfg.wait = 0.1;
  cfg.p = 0.1;
  return cfg;
}

}  // namespace

TEST_CASE("chain road is connected and yields exactly one path at T = 0") {
  Road road = fixed_road({200, 450, 700, 900}, 1000.0);
  CHECK(connected(road));
  ScenarioConfig cfg = base_cfg();
  cfg.wait = 0.0;
  auto paths = harvest_paths(road, cfg);
  REQUIRE(paths.size() == 1);
  CHECK(paths[0].relays == std::vector<VehicleId>{1, 2, 3, 4});
  CHECK(paths[0].hops == 5);
}

TEST_CASE("gap beyond range disconnects") {
  Road road = fixed_road({}, 600.0);
  CHECK_FALSE(connected(road));
  ScenarioConfig cfg = base_cfg();
  cfg.dist = 600.0;
  CHECK_THROWS_AS(harvest_paths(road, cfg), Error);
}

TEST_CASE("direct source-destination edge when L <= range") {
  Road road = fixed_road({}, 200.0);
  CHECK(connected(road));
  ScenarioConfig cfg = base_cfg();
  cfg.dist = 200.0;
  auto paths = harvest_paths(road, cfg);
  REQUIRE(paths.size() == 1);
  CHECK(paths[0].relays.empty());
  CHECK(paths[0].hops == 1);
}

TEST_CASE("two relays in range of everything: three forward paths") {
  Road road = fixed_road({100, 200}, 300.0);
  ScenarioConfig cfg = base_cfg();
  cfg.dist = 300.0;
  cfg.wait = 0.004;  // admits min-hops + 1
  auto paths = harvest_paths(road, cfg);
  REQUIRE(paths.size() == 3);
  // hop count then lexicographic order
  CHECK(paths[0].relays == std::vector<VehicleId>{1});
  CHECK(paths[1].relays == std::vector<VehicleId>{2});
  CHECK(paths[2].relays == std::vector<VehicleId>{1, 2});

  cfg.wait = 0.0;  // only the two-hop paths
  auto minimal = harvest_paths(road, cfg);
  CHECK(minimal.size() == 2);
}

TEST_CASE("harvest grows monotonically with the window") {
  Rng rng(1001);
  ScenarioConfig cfg = base_cfg();
  for (int iter = 0; iter < 40; ++iter) {
    Road road = generate_road(cfg, rng);
    if (!connected(road)) continue;
    std::vector<std::vector<VehicleId>> prev;
    for (double T : {0.0, 0.02, 0.05, 0.1}) {
      ScenarioConfig c2 = cfg;
      c2.wait = T;
      c2.max_paths = 1 << 20;  // no truncation: check the pure window filter
      auto paths = harvest_paths(road, c2);
      std::vector<std::vector<VehicleId>> cur;
      for (const auto& hp : paths) cur.push_back(hp.relays);
      for (const auto& old : prev)
        CHECK(std::find(cur.begin(), cur.end(), old) != cur.end());
      prev = std::move(cur);
    }
  }
}

TEST_CASE("max_paths truncation keeps the smallest-hop prefix") {
  Road road = fixed_road({50, 100, 150, 200, 250, 300, 350, 400}, 500.0);
  ScenarioConfig cfg = base_cfg();
  cfg.dist = 500.0;
  cfg.wait = 1.0;
  cfg.max_paths = 5;
  auto paths = harvest_paths(road, cfg);
  CHECK(paths.size() == 5);
  for (size_t i = 1; i < paths.size(); ++i) CHECK(paths[i - 1].hops <= paths[i].hops);

  ScenarioConfig all = cfg;
  all.max_paths = 1 << 20;
  auto full = harvest_paths(road, all);
  for (size_t i = 0; i < paths.size(); ++i) CHECK(paths[i].relays == full[i].relays);
}

TEST_CASE("copies flip exactly on paths meeting the malicious set") {
  std::vector<HarvestedPath> paths = {
      {{1, 4, 8}, 4}, {{2, 5, 8}, 4}, {{2, 6, 9}, 4}, {{3, 7, 9}, 4}};
  auto copies = make_copies(paths, {2}, 1);
  std::vector<int> contents;
  for (const auto& c : copies) contents.push_back(c.content);
  CHECK(contents == std::vector<int>{1, 0, 0, 1});  // two copies tampered

  auto none = make_copies(paths, {}, 1);
  for (const auto& c : none) CHECK(c.content == 1);
  auto all = make_copies(paths, {1, 2, 3, 4, 5, 6, 7, 8, 9}, 1);
  for (const auto& c : all) CHECK(c.content == 0);
}

TEST_CASE("run_trial: flip invariant and reproducibility") {
  ScenarioConfig cfg = base_cfg();
  cfg.seed = 77;
  for (uint64_t s = 1; s <= 20; ++s) {
    Rng rng(s);
    TrialOutcome t = run_trial(cfg, rng);
    std::set<VehicleId> mal(t.malicious.begin(), t.malicious.end());
    for (const auto& c : t.copies) {
      bool hit = false;
      for (VehicleId v : c.path) hit = hit || mal.count(v);
      CHECK(c.content == (t.m0 ^ (hit ? 1 : 0)));
    }
  }
  Rng a(5), b(5);
  TrialOutcome ta = run_trial(cfg, a);
  TrialOutcome tb = run_trial(cfg, b);
  CHECK(ta.m0 == tb.m0);
  CHECK(ta.malicious == tb.malicious);
  CHECK(ta.positions == tb.positions);
  REQUIRE(ta.copies.size() == tb.copies.size());
  for (size_t i = 0; i < ta.copies.size(); ++i) {
    CHECK(ta.copies[i].content == tb.copies[i].content);
    CHECK(ta.copies[i].path == tb.copies[i].path);
  }
}

TEST_CASE("poisson placement: relay count mean within 2% over 10000 draws") {
  ScenarioConfig cfg = base_cfg();
  cfg.rho = 0.01;
  cfg.dist = 2000.0;
  Rng rng(2024);
  double total = 0.0;
  const int draws = 10000;
  for (int i = 0; i < draws; ++i) total += generate_road(cfg, rng).relays();
  const double mean = total / draws;
  const double expect = cfg.rho * cfg.dist;
  CHECK(std::abs(mean - expect) / expect < 0.02);
}
