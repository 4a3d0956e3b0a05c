// Benchmark comparing the serial reference kernels against the OpenMP ones:
// cut-set census levels and the Monte Carlo trial loop.
#include <omp.h>

#include <chrono>
#include <cstdio>
#include <vector>

#include "topofuse/experiment.hpp"

using namespace topofuse;

namespace {

double ms_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
      .count();
}

// random side matrix shaped like a partitioned path system: rows are
// coordinate-increasing relay subsets
BoolMatrix random_side(Rng& rng, int rows, int cols, double density) {
  BoolMatrix m(rows, cols);
  for (int r = 0; r < rows; ++r) {
    int ones = 0;
    for (int c = 0; c < cols; ++c)
      if (rng.bernoulli(density)) {
        m.set(r, c);
        ++ones;
      }
    if (!ones) m.set(r, static_cast<int>(rng.next_u64() % cols));
  }
  return m;
}

void bench_cut_profile() {
  std::printf("cut_profile full census (serial reference vs OpenMP)\n");
  std::printf("%8s %6s %6s %12s %12s %8s %8s\n", "cols", "rows", "r", "serial_ms", "omp_ms",
              "speedup", "equal");
  Rng rng(7);
  for (int cols : {18, 22, 24, 26}) {
    BoolMatrix side = random_side(rng, 6, cols, 0.25);
    CutProfileOptions serial;
    serial.parallel = false;
    CutProfileOptions par;
    par.parallel = true;

    auto t0 = std::chrono::steady_clock::now();
    CutProfile a = cut_profile(side, serial);
    const double t_serial = ms_since(t0);
    t0 = std::chrono::steady_clock::now();
    CutProfile b = cut_profile(side, par);
    const double t_par = ms_since(t0);

    std::printf("%8d %6d %6d %12.2f %12.2f %8.2fx %8s\n", cols, side.rows(),
                a.r ? *a.r : -1, t_serial, t_par, t_serial / t_par,
                a.counts == b.counts ? "yes" : "NO");
  }
}

void bench_trials() {
  std::printf("\nestimate_psucc, 2000 stratified trials, all rules\n");
  std::printf("%8s %12s %12s %8s %8s\n", "p", "serial_ms", "omp_ms", "speedup", "equal");
  ScenarioConfig cfg;
  cfg.rho = 0.01;
  cfg.dist = 2000.0;
  cfg.wait = 0.1;
  const std::vector<Rule> rules{kAllRules, kAllRules + 5};
  for (double p : {0.05, 0.1}) {
    cfg.p = p;
    EstimateOptions ser;
    ser.parallel = false;
    EstimateOptions par;
    par.parallel = true;

    auto t0 = std::chrono::steady_clock::now();
    EstimateBlock a = estimate_psucc(cfg, rules, 2000, 99, {}, ser);
    const double t_serial = ms_since(t0);
    t0 = std::chrono::steady_clock::now();
    EstimateBlock b = estimate_psucc(cfg, rules, 2000, 99, {}, par);
    const double t_par = ms_since(t0);

    bool equal = true;
    for (size_t i = 0; i < rules.size(); ++i)
      equal = equal && a.per_rule[i].psucc == b.per_rule[i].psucc;
    std::printf("%8.2f %12.2f %12.2f %8.2fx %8s\n", p, t_serial, t_par, t_serial / t_par,
                equal ? "yes" : "NO");
  }
}

}  // namespace

int main() {
  std::printf("threads: %d\n\n", omp_get_max_threads());
  bench_cut_profile();
  bench_trials();
  return 0;
}
