#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "topofuse/decision.hpp"
#include "topofuse/netsim.hpp"

namespace topofuse {

struct AlgoParams {
  double alpha = 0.9;          // hop-discount weight base
  CostMatrix cost;             // optimum decision costs
  uint64_t budget = 100000000; // cut enumeration budget
};

// One verdict per requested rule, all derived from one seed so a recorded
// (scenario, seed) pair replays identically.
struct DecisionSet {
  std::vector<Rule> rules;
  std::vector<Verdict> verdicts;
};

DecisionSet decide_all(const PathSystem& ps, const std::vector<Rule>& rules, double p,
                       double p1, const AlgoParams& params, uint64_t seed);

enum class Mode { Stratified, PriorSampled };

struct PsuccEstimate {
  Rule rule = Rule::Majority;
  double psucc = 0.0;
  double ci95 = 0.0;  // Wilson 95% half-width
  uint64_t errors = 0;
};

struct EstimateBlock {
  std::vector<PsuccEstimate> per_rule;
  double discard_rate = 0.0;  // disconnected road draws / all road draws
  double mean_k = 0.0;
  double mean_n = 0.0;
  int trials_requested = 0;
  int trials_valid = 0;
};

// Record of one simulated trial, exported for replay through the decide path.
struct TrialRecord {
  int grid_index = 0;  // which sweep grid value produced it
  int trial = 0;
  int m0 = 0;
  uint64_t decide_seed = 0;
  double p = 0.0, p1 = 0.0;
  std::vector<MessageCopy> copies;
  DecisionSet decisions;
};

struct EstimateOptions {
  Mode mode = Mode::Stratified;
  bool parallel = true;
  int dump_limit = 0;  // record the first N trials
};

// Monte Carlo estimate of Pr(d = m0) per rule over shared trial streams.
// Stratified mode decides both m0 hypotheses per sampled topology and
// combines them with the (P0, P1) prior weights. Per-trial decision failures
// are counted and scored as incorrect.
EstimateBlock estimate_psucc(const ScenarioConfig& cfg, const std::vector<Rule>& rules,
                             int trials, uint64_t master_seed, const AlgoParams& params,
                             const EstimateOptions& opts,
                             std::vector<TrialRecord>* dump = nullptr);

struct SweepSpec {
  ScenarioConfig base;
  std::string vary = "p";  // p | wait | rho
  std::vector<double> grid;
  int trials = 5000;
  std::vector<Rule> algorithms{kAllRules, kAllRules + 5};
  AlgoParams params;
  EstimateOptions opts;
  uint64_t seed = 1;
};

struct SweepRow {
  std::string vary;
  double value = 0.0;
  Rule rule = Rule::Majority;
  double psucc = 0.0, ci95 = 0.0, discard_rate = 0.0, mean_k = 0.0, mean_n = 0.0;
  int trials = 0;
  uint64_t seed = 0;
};

struct SweepResult {
  std::vector<SweepRow> rows;
  std::vector<EstimateBlock> blocks;  // one per grid value
};

SweepResult sweep(const SweepSpec& spec, std::vector<TrialRecord>* dump = nullptr);

// CSV schema: vary,value,algorithm,psucc,ci95,discard_rate,mean_k,mean_n,trials,seed
void write_csv(const SweepResult& result, std::ostream& os);

double wilson_halfwidth(double phat, uint64_t n);

}  // namespace topofuse
