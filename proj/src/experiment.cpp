#include "topofuse/experiment.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

namespace topofuse {
namespace {

constexpr uint64_t kTrialSalt = 0x747269616cULL;   // per-trial stream
constexpr uint64_t kDecideSalt = 0x646563696465ULL; // per-rule tie stream

Verdict run_rule(const PathSystem& ps, Rule rule, double p, double p1,
                 const AlgoParams& params, Rng& rng) {
  switch (rule) {
    case Rule::Optimum: return decide_optimum(ps, p, p1, params.cost, rng, params.budget);
    case Rule::Heuristic: return decide_heuristic(ps, rng, params.budget);
    case Rule::Majority: return decide_majority(ps, rng);
    case Rule::WvMmse: return decide_wv_mmse(ps, p, rng);
    case Rule::WvHop: return decide_wv_hop(ps, params.alpha, rng);
  }
  throw Error(Errc::BadConfig, "unknown rule");
}

}  // namespace

DecisionSet decide_all(const PathSystem& ps, const std::vector<Rule>& rules, double p,
                       double p1, const AlgoParams& params, uint64_t seed) {
  DecisionSet ds;
  ds.rules = rules;
  ds.verdicts.reserve(rules.size());
  for (size_t i = 0; i < rules.size(); ++i) {
    Rng rng(derive_seed(seed, kDecideSalt + static_cast<uint64_t>(rules[i])));
    ds.verdicts.push_back(run_rule(ps, rules[i], p, p1, params, rng));
  }
  return ds;
}

double wilson_halfwidth(double phat, uint64_t n) {
  if (n == 0) return 1.0;
  const double z = 1.959963984540054;
  const double z2 = z * z;
  const double nn = static_cast<double>(n);
  return (z / (1.0 + z2 / nn)) * std::sqrt(phat * (1.0 - phat) / nn + z2 / (4.0 * nn * nn));
}

EstimateBlock estimate_psucc(const ScenarioConfig& cfg, const std::vector<Rule>& rules,
                             int trials, uint64_t master_seed, const AlgoParams& params,
                             const EstimateOptions& opts, std::vector<TrialRecord>* dump) {
  cfg.validate();
  if (trials < 1) throw Error(Errc::BadConfig, "trials must be at least 1");
  const int nr = static_cast<int>(rules.size());
  const bool strat = opts.mode == Mode::Stratified;

  // order-independent integer accumulators: [rule][stratum]
  std::vector<uint64_t> succ(static_cast<size_t>(nr) * 2, 0);
  std::vector<uint64_t> errors(nr, 0);
  uint64_t sum_k = 0, sum_n = 0, discards = 0, valid = 0;
  uint64_t stratum_trials[2] = {0, 0};
  std::vector<TrialRecord> records;

#pragma omp parallel if (opts.parallel)
  {
    std::vector<uint64_t> l_succ(static_cast<size_t>(nr) * 2, 0);
    std::vector<uint64_t> l_errors(nr, 0);
    uint64_t l_sum_k = 0, l_sum_n = 0, l_discards = 0, l_valid = 0;
    uint64_t l_stratum[2] = {0, 0};
    std::vector<TrialRecord> l_records;

#pragma omp for schedule(dynamic, 16)
    for (int t = 0; t < trials; ++t) {
      const uint64_t trial_seed = derive_seed(master_seed, kTrialSalt + static_cast<uint64_t>(t));
      Rng trial_rng(trial_seed);
      TrialOutcome outcome;
      try {
        outcome = run_trial(cfg, trial_rng);
      } catch (const Error&) {
        l_discards += cfg.retry_cap;  // retry cap exhausted, no decision possible
        continue;
      }
      l_discards += outcome.resamples;
      ++l_valid;

      const int strata_lo = strat ? 0 : outcome.m0;
      const int strata_hi = strat ? 1 : outcome.m0;
      bool counted_kn = false;
      for (int mm = strata_lo; mm <= strata_hi; ++mm) {
        // re-derive this stratum's contents from the recorded flips
        std::vector<MessageCopy> copies = outcome.copies;
        for (auto& c : copies) c.content = mm ^ (c.content ^ outcome.m0);
        PathSystem ps;
        try {
          ps = build_path_system(copies);
        } catch (const Error&) {
          for (int a = 0; a < nr; ++a) ++l_errors[a];
          continue;
        }
        if (!counted_kn) {
          l_sum_k += ps.k;
          l_sum_n += ps.n;
          counted_kn = true;
        }
        ++l_stratum[mm];
        const uint64_t decide_seed = derive_seed(trial_seed, static_cast<uint64_t>(mm));
        TrialRecord rec;
        const bool want_dump = dump && t < opts.dump_limit;
        for (int a = 0; a < nr; ++a) {
          Rng rng(derive_seed(decide_seed, kDecideSalt + static_cast<uint64_t>(rules[a])));
          try {
            Verdict v = run_rule(ps, rules[a], cfg.p, cfg.p1, params, rng);
            if (v.d == mm) ++l_succ[static_cast<size_t>(a) * 2 + mm];
            if (want_dump) {
              rec.decisions.rules.push_back(rules[a]);
              rec.decisions.verdicts.push_back(v);
            }
          } catch (const Error&) {
            ++l_errors[a];  // counted, scored as incorrect
          }
        }
        if (want_dump) {
          rec.trial = t;
          rec.m0 = mm;
          rec.decide_seed = decide_seed;
          rec.p = cfg.p;
          rec.p1 = cfg.p1;
          rec.copies = copies;
          l_records.push_back(std::move(rec));
        }
      }
    }

#pragma omp critical
    {
      for (size_t i = 0; i < succ.size(); ++i) succ[i] += l_succ[i];
      for (int a = 0; a < nr; ++a) errors[a] += l_errors[a];
      sum_k += l_sum_k;
      sum_n += l_sum_n;
      discards += l_discards;
      valid += l_valid;
      stratum_trials[0] += l_stratum[0];
      stratum_trials[1] += l_stratum[1];
      for (auto& r : l_records) records.push_back(std::move(r));
    }
  }

  EstimateBlock blk;
  blk.trials_requested = trials;
  blk.trials_valid = static_cast<int>(valid);
  blk.discard_rate =
      (discards + valid) ? static_cast<double>(discards) / static_cast<double>(discards + valid)
                         : 0.0;
  blk.mean_k = valid ? static_cast<double>(sum_k) / static_cast<double>(valid) : 0.0;
  blk.mean_n = valid ? static_cast<double>(sum_n) / static_cast<double>(valid) : 0.0;
  for (int a = 0; a < nr; ++a) {
    PsuccEstimate e;
    e.rule = rules[a];
    e.errors = errors[a];
    if (strat) {
      const double s0 = stratum_trials[0]
                            ? static_cast<double>(succ[static_cast<size_t>(a) * 2]) /
                                  static_cast<double>(stratum_trials[0])
                            : 0.0;
      const double s1 = stratum_trials[1]
                            ? static_cast<double>(succ[static_cast<size_t>(a) * 2 + 1]) /
                                  static_cast<double>(stratum_trials[1])
                            : 0.0;
      e.psucc = (1.0 - cfg.p1) * s0 + cfg.p1 * s1;
    } else {
      const uint64_t s = succ[static_cast<size_t>(a) * 2] + succ[static_cast<size_t>(a) * 2 + 1];
      e.psucc = valid ? static_cast<double>(s) / static_cast<double>(valid) : 0.0;
    }
    e.ci95 = wilson_halfwidth(e.psucc, valid);
    blk.per_rule.push_back(e);
  }
  if (dump) {
    std::sort(records.begin(), records.end(), [](const TrialRecord& a, const TrialRecord& b) {
      return a.trial != b.trial ? a.trial < b.trial : a.m0 < b.m0;
    });
    *dump = std::move(records);
  }
  return blk;
}

SweepResult sweep(const SweepSpec& spec, std::vector<TrialRecord>* dump) {
  if (spec.grid.empty()) throw Error(Errc::BadConfig, "sweep grid is empty");
  if (spec.vary != "p" && spec.vary != "wait" && spec.vary != "rho")
    throw Error(Errc::BadConfig, "vary must be one of p, wait, rho");

  SweepResult result;
  for (size_t gi = 0; gi < spec.grid.size(); ++gi) {
    const double value = spec.grid[gi];
    ScenarioConfig cfg = spec.base;
    if (spec.vary == "p")
      cfg.p = value;
    else if (spec.vary == "wait")
      cfg.wait = value;
    else
      cfg.rho = value;

    std::vector<TrialRecord> local_dump;
    EstimateBlock blk =
        estimate_psucc(cfg, spec.algorithms, spec.trials, spec.seed, spec.params, spec.opts,
                       dump && spec.opts.dump_limit > 0 ? &local_dump : nullptr);
    if (dump)
      for (auto& r : local_dump) {
        r.grid_index = static_cast<int>(gi);
        dump->push_back(std::move(r));
      }

    for (const auto& e : blk.per_rule) {
      SweepRow row;
      row.vary = spec.vary;
      row.value = value;
      row.rule = e.rule;
      row.psucc = e.psucc;
      row.ci95 = e.ci95;
      row.discard_rate = blk.discard_rate;
      row.mean_k = blk.mean_k;
      row.mean_n = blk.mean_n;
      row.trials = spec.trials;
      row.seed = spec.seed;
      result.rows.push_back(row);
    }
    result.blocks.push_back(std::move(blk));
  }
  return result;
}

void write_csv(const SweepResult& result, std::ostream& os) {
  os << "vary,value,algorithm,psucc,ci95,discard_rate,mean_k,mean_n,trials,seed\n";
  char buf[256];
  for (const auto& r : result.rows) {
    std::snprintf(buf, sizeof(buf), "%s,%.6g,%s,%.6f,%.6f,%.6f,%.4f,%.4f,%d,%llu\n",
                  r.vary.c_str(), r.value, rule_name(r.rule), r.psucc, r.ci95, r.discard_rate,
                  r.mean_k, r.mean_n, r.trials, static_cast<unsigned long long>(r.seed));
    os << buf;
  }
}

}  // namespace topofuse
