#include "topofuse/decision.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

namespace topofuse {
namespace {

constexpr double kTieTol = 1e-12;
constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Unanimity and relay-free copies decide every rule the same way.
std::optional<Verdict> shortcut(const PathSystem& ps, Rule rule) {
  Verdict v;
  v.rule = rule;
  v.unanimous = true;
  if (ps.direct_content) {  // source is honest, a relay-free copy is ground truth
    v.d = *ps.direct_content;
    return v;
  }
  const int k1 = ps.k1();
  if (k1 == 0 || k1 == ps.k) {
    v.d = k1 ? 1 : 0;
    return v;
  }
  return std::nullopt;
}

int coin_break(Rng& rng, Verdict& v) {
  v.tie = true;
  return rng.coin();
}

}  // namespace

std::optional<Rule> rule_from_name(const std::string& name) {
  for (Rule r : kAllRules)
    if (name == rule_name(r)) return r;
  return std::nullopt;
}

Verdict decide_optimum(const PathSystem& ps, double p, double p1, const CostMatrix& cost,
                       Rng& rng, uint64_t budget) {
  if (auto v = shortcut(ps, Rule::Optimum)) return *v;
  // p and p1 only enter the ratio test, so they are checked past the shortcut
  if (!(p > 0.0 && p < 1.0) || !(p1 > 0.0 && p1 < 1.0))
    throw Error(Errc::BadConfig, "p and p1 must be in (0,1)");
  if (!(cost.u01 > cost.u11) || !(cost.u10 > cost.u00))
    throw Error(Errc::BadConfig, "incorrect decisions must cost more than correct ones");

  Partition part = make_partition(ps);
  LikelihoodPair lp = conditional_likelihoods(part, p, budget);
  Verdict v;
  v.rule = Rule::Optimum;
  if (std::isinf(lp.log_given_one) && std::isinf(lp.log_given_zero))
    throw Error(Errc::InconsistentObservation,
                "observation impossible under both hypotheses");

  const double log_threshold =
      std::log((1.0 - p1) * (cost.u10 - cost.u00)) - std::log(p1 * (cost.u01 - cost.u11));
  v.log_ratio = lp.log_given_one - lp.log_given_zero;  // +-inf when one side is 0

  if (std::isinf(lp.log_given_zero)) {
    v.d = 1;
  } else if (std::isinf(lp.log_given_one)) {
    v.d = 0;
  } else if (v.log_ratio > log_threshold + kTieTol) {
    v.d = 1;
  } else if (v.log_ratio < log_threshold - kTieTol) {
    v.d = 0;
  } else {
    v.d = coin_break(rng, v);
  }
  return v;
}

Verdict decide_heuristic(const PathSystem& ps, Rng& rng, uint64_t budget) {
  if (auto v = shortcut(ps, Rule::Heuristic)) return *v;

  Partition part = make_partition(ps);
  Verdict v;
  v.rule = Rule::Heuristic;
  if (part.n0 == 0) {  // content-0 paths inexplicable under m0 = 1
    v.d = 0;
    return v;
  }
  if (part.n1 == 0) {
    v.d = 1;
    return v;
  }

  CutProfileOptions opts;
  opts.stop_at_r = true;
  opts.budget = budget;
  CutProfile c0 = cut_profile(part.b0, opts);
  CutProfile c1 = cut_profile(part.b1, opts);
  v.r0 = c0.r;
  v.r1 = c1.r;
  v.a_r0 = c0.count_at_r;
  v.b_r1 = c1.count_at_r;
  v.flow0 = max_disjoint_flow(part.b0_rows_ordered);
  v.flow1 = max_disjoint_flow(part.b1_rows_ordered);

  // nullopt means no malicious set can explain that side; treat as r = +inf
  const long ir0 = c0.r ? *c0.r : std::numeric_limits<long>::max();
  const long ir1 = c1.r ? *c1.r : std::numeric_limits<long>::max();
  if (ir0 < ir1) {
    v.d = 1;
  } else if (ir0 > ir1) {
    v.d = 0;
  } else if (c0.count_at_r > c1.count_at_r) {
    v.d = 1;
  } else if (c0.count_at_r < c1.count_at_r) {
    v.d = 0;
  } else {
    v.d = coin_break(rng, v);
  }
  return v;
}

Verdict decide_majority(const PathSystem& ps, Rng& rng) {
  if (auto v = shortcut(ps, Rule::Majority)) return *v;
  Verdict v;
  v.rule = Rule::Majority;
  const int k1 = ps.k1();
  if (2 * k1 > ps.k)
    v.d = 1;
  else if (2 * k1 < ps.k)
    v.d = 0;
  else
    v.d = coin_break(rng, v);
  return v;
}

namespace {

// Solve C x = 1 by Gaussian elimination with partial pivoting; nullopt on a
// numerically singular pivot.
std::optional<std::vector<double>> solve_ones(std::vector<std::vector<double>> a) {
  const int n = static_cast<int>(a.size());
  std::vector<double> b(n, 1.0);
  double scale = 0.0;
  for (const auto& row : a)
    for (double x : row) scale = std::max(scale, std::fabs(x));
  if (scale == 0.0) return std::nullopt;
  for (int col = 0; col < n; ++col) {
    int piv = col;
    for (int r = col + 1; r < n; ++r)
      if (std::fabs(a[r][col]) > std::fabs(a[piv][col])) piv = r;
    if (std::fabs(a[piv][col]) < 1e-12 * scale) return std::nullopt;
    std::swap(a[piv], a[col]);
    std::swap(b[piv], b[col]);
    for (int r = col + 1; r < n; ++r) {
      double f = a[r][col] / a[col][col];
      if (f == 0.0) continue;
      for (int c = col; c < n; ++c) a[r][c] -= f * a[col][c];
      b[r] -= f * b[col];
    }
  }
  std::vector<double> x(n);
  for (int r = n - 1; r >= 0; --r) {
    double s = b[r];
    for (int c = r + 1; c < n; ++c) s -= a[r][c] * x[c];
    x[r] = s / a[r][r];
  }
  return x;
}

Verdict weighted_vote(const PathSystem& ps, const std::vector<double>& weights, Rule rule,
                      Rng& rng) {
  Verdict v;
  v.rule = rule;
  v.weights = weights;
  double total = 0.0, ones = 0.0, mag = 0.0;
  for (int r = 0; r < ps.k; ++r) {
    total += weights[r];
    mag += std::fabs(weights[r]);
    if (ps.contents[r] == 1) ones += weights[r];
  }
  const double margin = ones - 0.5 * total;
  if (margin > kTieTol * std::max(1.0, mag))
    v.d = 1;
  else if (margin < -kTieTol * std::max(1.0, mag))
    v.d = 0;
  else
    v.d = coin_break(rng, v);
  return v;
}

}  // namespace

Verdict decide_wv_mmse(const PathSystem& ps, double p, Rng& rng) {
  if (auto v = shortcut(ps, Rule::WvMmse)) return *v;
  if (!(p > 0.0 && p < 1.0)) throw Error(Errc::BadConfig, "p must be in (0,1)");

  const int k = ps.k;
  std::vector<std::set<VehicleId>> sets(k);
  for (int r = 0; r < k; ++r) sets[r] = {ps.paths[r].begin(), ps.paths[r].end()};

  // C_ij = Pr(path i and path j both compromised)
  //      = 1 - q^|Li| - q^|Lj| + q^|Li u Lj|
  const double q = 1.0 - p;
  std::vector<std::vector<double>> c(k, std::vector<double>(k));
  for (int i = 0; i < k; ++i) {
    for (int j = i; j < k; ++j) {
      std::set<VehicleId> uni = sets[i];
      uni.insert(sets[j].begin(), sets[j].end());
      double v = 1.0 - std::pow(q, sets[i].size()) - std::pow(q, sets[j].size()) +
                 std::pow(q, uni.size());
      c[i][j] = c[j][i] = v;
    }
  }
  auto x = solve_ones(c);
  if (!x) {
    double tr = 0.0;
    for (int i = 0; i < k; ++i) tr += c[i][i];
    const double eps = 1e-9 * tr / k;
    for (int i = 0; i < k; ++i) c[i][i] += eps;
    x = solve_ones(c);
    if (!x) throw Error(Errc::SingularCovariance, "covariance singular even after ridge");
  }
  double s = 0.0;
  for (double w : *x) s += w;
  std::vector<double> weights(k);
  for (int i = 0; i < k; ++i) weights[i] = (*x)[i] / s;
  return weighted_vote(ps, weights, Rule::WvMmse, rng);
}

Verdict decide_wv_hop(const PathSystem& ps, double alpha, Rng& rng) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw Error(Errc::BadConfig, "alpha must be in (0,1)");
  if (auto v = shortcut(ps, Rule::WvHop)) return *v;
  std::vector<double> w(ps.k);
  double s = 0.0;
  for (int r = 0; r < ps.k; ++r) {
    w[r] = std::pow(alpha, ps.hops[r] - 1);
    s += w[r];
  }
  for (double& x : w) x /= s;
  return weighted_vote(ps, w, Rule::WvHop, rng);
}

std::vector<RatioPoint> likelihood_ratio_curve(const Partition& part,
                                               const std::vector<double>& p_grid) {
  std::vector<RatioPoint> out;
  out.reserve(p_grid.size());
  for (double p : p_grid) {
    LikelihoodPair lp = conditional_likelihoods(part, p);
    RatioPoint pt;
    pt.p = p;
    pt.f1 = cover_probability(part.b0, p);
    pt.f2 = cover_probability(part.b1, p);
    double lr = lp.log_given_one - lp.log_given_zero;
    pt.ratio = std::exp(lr);
    out.push_back(pt);
  }
  return out;
}

std::optional<double> ratio_unity_root(const Partition& part, double lo, double hi) {
  auto log_ratio = [&part](double p) {
    LikelihoodPair lp = conditional_likelihoods(part, p);
    return lp.log_given_one - lp.log_given_zero;
  };
  double flo = log_ratio(lo), fhi = log_ratio(hi);
  if (std::isnan(flo) || std::isnan(fhi)) return std::nullopt;
  if (!((flo < 0.0 && fhi > 0.0) || (flo > 0.0 && fhi < 0.0)))
    return std::nullopt;  // a root needs a strict sign change
  for (int it = 0; it < 200; ++it) {
    double mid = 0.5 * (lo + hi);
    double fm = log_ratio(mid);
    if (fm == 0.0) return mid;
    if ((fm < 0.0) == (flo < 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
    if (hi - lo < 1e-12) break;
  }
  return 0.5 * (lo + hi);
}

}  // namespace topofuse
