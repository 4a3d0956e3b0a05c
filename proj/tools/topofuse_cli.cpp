// Command-line front end: single-scenario decisions, formula-vs-oracle
// verification, Monte Carlo sweeps, and likelihood-ratio curve extraction.
#include <CLI11.hpp>
#include <json.hpp>

#include <cinttypes>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include "topofuse/experiment.hpp"

using json = nlohmann::json;
using namespace topofuse;

namespace {

constexpr int kExitMismatch = 1;
constexpr int kExitBadInput = 2;
constexpr int kExitInconsistent = 3;

struct Scenario {
  std::vector<MessageCopy> copies;
  std::optional<double> p, p1;
};

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::BadConfig, "cannot open " + path);
  json j = json::parse(in);
  Scenario sc;
  if (!j.contains("copies") || !j["copies"].is_array() || j["copies"].empty())
    throw Error(Errc::BadConfig, "scenario needs a non-empty copies array");
  for (const auto& c : j["copies"]) {
    MessageCopy mc;
    mc.content = c.at("content").get<int>();
    for (const auto& v : c.at("path")) mc.path.push_back(v.get<VehicleId>());
    sc.copies.push_back(std::move(mc));
  }
  if (j.contains("p")) sc.p = j["p"].get<double>();
  if (j.contains("p1")) sc.p1 = j["p1"].get<double>();
  return sc;
}

ScenarioConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::BadConfig, "cannot open " + path);
  json j = json::parse(in);
  ScenarioConfig cfg;
  if (j.contains("rho")) cfg.rho = j["rho"].get<double>();
  if (j.contains("range")) cfg.range = j["range"].get<double>();
  if (j.contains("beta")) cfg.beta = j["beta"].get<double>();
  if (j.contains("dist")) cfg.dist = j["dist"].get<double>();
  if (j.contains("wait")) cfg.wait = j["wait"].get<double>();
  if (j.contains("p")) cfg.p = j["p"].get<double>();
  if (j.contains("p1")) cfg.p1 = j["p1"].get<double>();
  if (j.contains("max_paths")) cfg.max_paths = j["max_paths"].get<int>();
  if (j.contains("seed")) cfg.seed = j["seed"].get<uint64_t>();
  if (j.contains("retry_cap")) cfg.retry_cap = j["retry_cap"].get<int>();
  cfg.validate();
  return cfg;
}

uint64_t pick_seed(std::optional<uint64_t> flag) {
  if (flag) return *flag;
  std::random_device rd;
  return (static_cast<uint64_t>(rd()) << 32) ^ rd();
}

std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", x);
  return buf;
}

void print_verdict(const Verdict& v, bool pretty) {
  std::ostringstream os;
  if (pretty) {
    os << rule_name(v.rule) << ": d=" << v.d << (v.tie ? " (tie, coin)" : "")
       << (v.unanimous ? " (unanimous)" : "");
  } else {
    os << "algo=" << rule_name(v.rule) << " d=" << v.d << " tie=" << (v.tie ? 1 : 0)
       << " unanimous=" << (v.unanimous ? 1 : 0);
  }
  switch (v.rule) {
    case Rule::Optimum:
      if (!v.unanimous) os << " log_ratio=" << fmt(v.log_ratio);
      break;
    case Rule::Heuristic:
      if (!v.unanimous) {
        os << " r0=" << (v.r0 ? std::to_string(*v.r0) : std::string("none"));
        os << " r1=" << (v.r1 ? std::to_string(*v.r1) : std::string("none"));
        os << " a_r0=" << v.a_r0 << " b_r1=" << v.b_r1;
        os << " flow0=" << v.flow0 << " flow1=" << v.flow1;
      }
      break;
    case Rule::WvMmse:
    case Rule::WvHop:
      if (!v.unanimous && !v.weights.empty()) {
        os << " weights=";
        for (size_t i = 0; i < v.weights.size(); ++i) {
          if (i) os << "|";
          os << fmt(v.weights[i]);
        }
      }
      break;
    case Rule::Majority:
      break;
  }
  std::cout << os.str() << "\n";
}

int cmd_decide(const std::string& file, std::optional<double> p_flag,
               std::optional<double> p1_flag, double alpha, std::optional<uint64_t> seed_flag,
               const std::string& algo, bool pretty) {
  Scenario sc = load_scenario(file);
  const double p = p_flag.value_or(sc.p.value_or(0.1));
  const double p1 = p1_flag.value_or(sc.p1.value_or(0.001));
  const uint64_t seed = pick_seed(seed_flag);

  std::vector<Rule> rules;
  if (algo == "all") {
    rules.assign(kAllRules, kAllRules + 5);
  } else if (auto r = rule_from_name(algo)) {
    rules.push_back(*r);
  } else {
    std::cerr << "unknown algorithm: " << algo << "\n";
    return kExitBadInput;
  }

  PathSystem ps = build_path_system(sc.copies);
  AlgoParams params;
  params.alpha = alpha;
  DecisionSet ds = decide_all(ps, rules, p, p1, params, seed);
  for (const auto& v : ds.verdicts) print_verdict(v, pretty);
  std::cout << "k=" << ps.k << " n=" << ps.n << " p=" << fmt(p) << " p1=" << fmt(p1)
            << " seed=" << seed << " status=ok\n";
  return 0;
}

int cmd_oracle(int cases, int max_n, std::optional<uint64_t> seed_flag, uint64_t budget) {
  const uint64_t seed = pick_seed(seed_flag);
  Rng rng(seed);
  const double ps_grid[] = {0.05, 0.1, 0.3};
  double worst = 0.0;
  int done = 0;
  while (done < cases) {
    // random conflicting instance, k <= 6 paths over n <= max_n relays
    const int k = 2 + static_cast<int>(rng.next_u64() % 5);
    const int n = 2 + static_cast<int>(rng.next_u64() % (max_n - 1));
    std::vector<MessageCopy> copies;
    for (int i = 0; i < k; ++i) {
      std::vector<VehicleId> ids;
      for (int v = 1; v <= n; ++v) ids.push_back(v);
      const int len = 1 + static_cast<int>(rng.next_u64() % n);
      for (int j = 0; j < len; ++j)
        std::swap(ids[j], ids[j + rng.next_u64() % (ids.size() - j)]);
      ids.resize(len);
      copies.push_back({rng.coin(), ids});
    }
    PathSystem ps;
    try {
      ps = build_path_system(copies);
    } catch (const Error&) {
      continue;  // duplicate path with both contents; redraw
    }
    if (!ps.conflicting()) continue;
    ++done;
    Partition pt = make_partition(ps);
    for (double p : ps_grid) {
      LikelihoodPair lp;
      try {
        lp = conditional_likelihoods(pt, p, budget);
      } catch (const Error& e) {
        std::cout << "case=" << done << " p=" << fmt(p) << " error=" << e.what() << "\n";
        std::cout << "status=fail\n";
        return kExitMismatch;
      }
      const double b1 = brute_force_conditional(ps, p, 1);
      const double b0 = brute_force_conditional(ps, p, 0);
      for (auto [got, want, tag] :
           {std::tuple{lp.given_one, b1, "given_one"}, {lp.given_zero, b0, "given_zero"}}) {
        const double rel =
            want == 0.0 ? (got == 0.0 ? 0.0 : 1.0) : std::fabs(got - want) / want;
        worst = std::max(worst, rel);
        if (rel > 1e-12) {
          std::cout << "mismatch case=" << done << " side=" << tag << " p=" << fmt(p)
                    << " formula=" << fmt(got) << " oracle=" << fmt(want)
                    << " rel=" << fmt(rel) << "\n";
          std::cout << "instance:";
          for (int r = 0; r < ps.k; ++r) {
            std::cout << " [" << ps.contents[r] << ":";
            for (size_t j = 0; j < ps.paths[r].size(); ++j)
              std::cout << (j ? "," : "") << ps.paths[r][j];
            std::cout << "]";
          }
          std::cout << "\nstatus=fail\n";
          return kExitMismatch;
        }
      }
    }
  }
  std::cout << "cases=" << done << " max_rel_err=" << fmt(worst) << " seed=" << seed
            << " status=ok\n";
  return 0;
}

int cmd_sweep(const std::string& file, const std::string& vary, const std::string& grid_csv,
              int trials, std::optional<uint64_t> seed_flag, const std::string& out,
              const std::string& mode, const std::string& algos_csv, double alpha, bool serial,
              const std::string& dump_dir, int dump_limit) {
  SweepSpec spec;
  spec.base = load_config(file);
  spec.vary = vary;
  spec.trials = trials;
  spec.seed = seed_flag.value_or(spec.base.seed);
  spec.params.alpha = alpha;
  spec.opts.parallel = !serial;
  if (mode == "stratified")
    spec.opts.mode = Mode::Stratified;
  else if (mode == "prior")
    spec.opts.mode = Mode::PriorSampled;
  else
    throw Error(Errc::BadConfig, "mode must be stratified or prior");

  std::stringstream gs(grid_csv);
  std::string tok;
  while (std::getline(gs, tok, ',')) spec.grid.push_back(std::stod(tok));
  if (spec.grid.empty()) throw Error(Errc::BadConfig, "empty grid");

  if (!algos_csv.empty() && algos_csv != "all") {
    spec.algorithms.clear();
    std::stringstream as(algos_csv);
    while (std::getline(as, tok, ',')) {
      auto r = rule_from_name(tok);
      if (!r) throw Error(Errc::BadConfig, "unknown algorithm " + tok);
      spec.algorithms.push_back(*r);
    }
  }

  std::vector<TrialRecord> records;
  std::vector<TrialRecord>* rec_ptr = nullptr;
  if (!dump_dir.empty()) {
    spec.opts.dump_limit = dump_limit;
    rec_ptr = &records;
    std::filesystem::create_directories(dump_dir);
  }

  SweepResult res = sweep(spec, rec_ptr);
  std::ofstream os(out, std::ios::binary);
  if (!os) throw Error(Errc::BadConfig, "cannot write " + out);
  write_csv(res, os);

  for (const auto& rec : records) {
    json j;
    j["p"] = vary == "p" ? spec.grid[rec.grid_index] : spec.base.p;
    j["p1"] = spec.base.p1;
    j["alpha"] = alpha;
    j["seed"] = rec.decide_seed;
    j["m0"] = rec.m0;
    json arr = json::array();
    for (const auto& c : rec.copies) arr.push_back({{"content", c.content}, {"path", c.path}});
    j["copies"] = arr;
    json exp = json::object();
    for (size_t i = 0; i < rec.decisions.rules.size(); ++i)
      exp[rule_name(rec.decisions.rules[i])] = {{"d", rec.decisions.verdicts[i].d},
                                                {"tie", rec.decisions.verdicts[i].tie}};
    j["expected"] = exp;
    char name[128];
    std::snprintf(name, sizeof(name), "trial_g%02d_t%05d_m%d.json", rec.grid_index, rec.trial,
                  rec.m0);
    std::ofstream df(std::filesystem::path(dump_dir) / name);
    df << j.dump(2) << "\n";
  }

  std::cout << "rows=" << res.rows.size() << " out=" << out << " seed=" << spec.seed
            << " status=ok\n";
  return 0;
}

int cmd_ratio(const std::string& file, double p_min, double p_max, int steps,
              const std::string& out) {
  Scenario sc = load_scenario(file);
  PathSystem ps = build_path_system(sc.copies);
  if (!ps.conflicting()) {
    std::cerr << "scenario has no conflicting contents; ratio curve undefined\n";
    return kExitInconsistent;
  }
  Partition pt = make_partition(ps);
  std::vector<double> grid;
  for (int i = 0; i <= steps; ++i)
    grid.push_back(p_min + (p_max - p_min) * static_cast<double>(i) / steps);
  auto curve = likelihood_ratio_curve(pt, grid);

  std::ofstream os(out, std::ios::binary);
  if (!os) throw Error(Errc::BadConfig, "cannot write " + out);
  os << "p,f1,f2,ratio\n";
  char buf[256];
  for (const auto& row : curve) {
    std::snprintf(buf, sizeof(buf), "%.6f,%.12g,%.12g,%.12g\n", row.p, row.f1, row.f2,
                  row.ratio);
    os << buf;
  }
  auto root = ratio_unity_root(pt, p_min, p_max);
  if (root)
    std::cout << "p_th=" << fmt(*root);
  else
    std::cout << "p_th=none";
  std::cout << " out=" << out << " status=ok\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"topology-aware decision fusion for multipath message dissemination"};
  app.require_subcommand(1);

  std::string scenario_file, config_file, out_file = "sweep.csv", algo = "all";
  std::string vary = "p", grid_csv, mode = "stratified", algos_csv = "all", dump_dir;
  std::optional<double> p_flag, p1_flag;
  double alpha = 0.9, p_min = 0.01, p_max = 0.5;
  std::optional<uint64_t> seed_flag;
  int trials = 5000, cases = 200, max_n = 12, steps = 100, dump_limit = 10;
  uint64_t budget = 100000000ULL;
  bool pretty = false, serial = false;

  auto* decide = app.add_subcommand("decide", "decide a scenario's message content");
  decide->add_option("scenario", scenario_file, "scenario JSON file")->required();
  decide->add_option("--p", p_flag, "malicious fraction (overrides the file)");
  decide->add_option("--p1", p1_flag, "prior Pr(m0=1) (overrides the file)");
  decide->add_option("--alpha", alpha, "hop-discount weight base");
  decide->add_option("--seed", seed_flag, "tie-break seed");
  decide->add_option("--algo", algo, "all or one of optimum|heuristic|majority|wv_mmse|wv_hop");
  decide->add_flag("--pretty", pretty, "human-readable output");

  auto* oracle = app.add_subcommand("oracle", "verify closed forms against brute force");
  oracle->add_option("--cases", cases, "number of random instances");
  oracle->add_option("--max-n", max_n, "max relay count per instance")
      ->check(CLI::Range(2, 20));
  oracle->add_option("--seed", seed_flag, "instance generator seed");
  oracle->add_option("--budget", budget, "cut enumeration budget");

  auto* sweep_cmd = app.add_subcommand("sweep", "Monte Carlo parameter sweep to CSV");
  sweep_cmd->add_option("config", config_file, "scenario config JSON")->required();
  sweep_cmd->add_option("--vary", vary, "p | wait | rho")->required();
  sweep_cmd->add_option("--grid", grid_csv, "comma-separated values")->required();
  sweep_cmd->add_option("--trials", trials, "trials per grid value");
  sweep_cmd->add_option("--seed", seed_flag, "master seed (overrides config)");
  sweep_cmd->add_option("--out", out_file, "output CSV path");
  sweep_cmd->add_option("--mode", mode, "stratified | prior");
  sweep_cmd->add_option("--algos", algos_csv, "comma-separated rule names or all");
  sweep_cmd->add_option("--alpha", alpha, "hop-discount weight base");
  sweep_cmd->add_flag("--serial", serial, "single-threaded reference run");
  sweep_cmd->add_option("--dump-trials", dump_dir, "directory for replayable trial dumps");
  sweep_cmd->add_option("--dump-limit", dump_limit, "trials to dump per grid value");

  auto* ratio = app.add_subcommand("ratio", "likelihood-ratio curve for a scenario");
  ratio->add_option("scenario", scenario_file, "scenario JSON file")->required();
  ratio->add_option("--p-min", p_min, "grid start");
  ratio->add_option("--p-max", p_max, "grid end");
  ratio->add_option("--steps", steps, "grid steps")->check(CLI::PositiveNumber);
  ratio->add_option("--out", out_file, "output CSV path");

  CLI11_PARSE(app, argc, argv);

  try {
    if (decide->parsed())
      return cmd_decide(scenario_file, p_flag, p1_flag, alpha, seed_flag, algo, pretty);
    if (oracle->parsed()) return cmd_oracle(cases, max_n, seed_flag, budget);
    if (sweep_cmd->parsed())
      return cmd_sweep(config_file, vary, grid_csv, trials, seed_flag, out_file, mode,
                       algos_csv, alpha, serial, dump_dir, dump_limit);
    if (ratio->parsed()) return cmd_ratio(scenario_file, p_min, p_max, steps, out_file);
  } catch (const Error& e) {
    std::cerr << e.what() << "\n";
    return e.code() == Errc::InconsistentObservation ? kExitInconsistent : kExitBadInput;
  } catch (const json::exception& e) {
    std::cerr << "bad input: " << e.what() << "\n";
    return kExitBadInput;
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return kExitBadInput;
  }
  return 0;
}
