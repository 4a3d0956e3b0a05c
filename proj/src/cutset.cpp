#include "topofuse/cutset.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <limits>

namespace topofuse {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Column masks over (reduced) rows. Rows come from path systems capped at 64
// received copies, so a single word is the normal case; wider instances fall
// back to multi-word masks.
struct ColMasks {
  int rows = 0, cols = 0;
  int words = 0;
  std::vector<uint64_t> bits;  // cols * words, column-major

  const uint64_t* col(int c) const { return &bits[static_cast<size_t>(c) * words]; }
};

// Drop duplicate rows and rows whose support contains another row's support:
// hitting a subset row implies hitting its supersets, so the census over the
// kept rows is identical.
std::vector<std::vector<int>> reduce_rows(const BoolMatrix& sub) {
  std::vector<std::vector<int>> rows;
  rows.reserve(sub.rows());
  for (int r = 0; r < sub.rows(); ++r) rows.push_back(sub.row_support(r));
  std::sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) {
    return a.size() < b.size();
  });
  std::vector<std::vector<int>> kept;
  for (const auto& row : rows) {
    bool redundant = false;
    for (const auto& small : kept) {
      if (std::includes(row.begin(), row.end(), small.begin(), small.end())) {
        redundant = true;
        break;
      }
    }
    if (!redundant) kept.push_back(row);
  }
  return kept;
}

ColMasks build_col_masks(const std::vector<std::vector<int>>& rows, int cols) {
  ColMasks cm;
  cm.rows = static_cast<int>(rows.size());
  cm.cols = cols;
  cm.words = std::max(1, (cm.rows + 63) / 64);
  cm.bits.assign(static_cast<size_t>(cols) * cm.words, 0);
  for (int r = 0; r < cm.rows; ++r)
    for (int c : rows[r]) cm.bits[static_cast<size_t>(c) * cm.words + r / 64] |= 1ULL << (r % 64);
  return cm;
}

// Greedy packing of pairwise-disjoint rows; any hitting set needs one column
// per packed row, so the result lower-bounds r.
int greedy_packing(const std::vector<std::vector<int>>& rows) {
  std::vector<int> used;
  int packed = 0;
  for (const auto& row : rows) {  // rows are sorted by size already
    bool disjoint = true;
    for (int c : row)
      if (std::binary_search(used.begin(), used.end(), c)) {
        disjoint = false;
        break;
      }
    if (disjoint) {
      ++packed;
      used.insert(used.end(), row.begin(), row.end());
      std::sort(used.begin(), used.end());
    }
  }
  return packed;
}

uint64_t binom(int n, int k) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  uint64_t res = 1;
  for (int i = 1; i <= k; ++i) res = res * static_cast<uint64_t>(n - k + i) / i;
  return res;
}

// --- size-level counting kernels -----------------------------------------

template <int W>
struct MaskOps {
  static bool full(const uint64_t* acc, const uint64_t* want) {
    for (int w = 0; w < W; ++w)
      if ((acc[w] & want[w]) != want[w]) return false;
    return true;
  }
  static void unite(uint64_t* out, const uint64_t* a, const uint64_t* b) {
    for (int w = 0; w < W; ++w) out[w] = a[w] | b[w];
  }
};

template <int W>
uint64_t count_from(const ColMasks& cm, const uint64_t* full_mask,
                    const std::vector<uint64_t>& suffix_or, int start, int remaining,
                    const uint64_t* acc) {
  if (MaskOps<W>::full(acc, full_mask))
    return binom(cm.cols - start, remaining);  // any completion covers
  if (remaining == 0) return 0;
  uint64_t joined[W];
  MaskOps<W>::unite(joined, acc, &suffix_or[static_cast<size_t>(start) * cm.words]);
  if (!MaskOps<W>::full(joined, full_mask)) return 0;  // cannot cover anymore
  uint64_t total = 0;
  uint64_t next[W];
  for (int c = start; c + remaining <= cm.cols; ++c) {
    MaskOps<W>::unite(next, acc, cm.col(c));
    total += count_from<W>(cm, full_mask, suffix_or, c + 1, remaining - 1, next);
  }
  return total;
}

template <int W>
uint64_t count_level(const ColMasks& cm, const uint64_t* full_mask,
                     const std::vector<uint64_t>& suffix_or, int size, bool parallel) {
  uint64_t total = 0;
  if (parallel) {
#pragma omp parallel for schedule(dynamic) reduction(+ : total)
    for (int c = 0; c <= cm.cols - size; ++c) {
      total += count_from<W>(cm, full_mask, suffix_or, c + 1, size - 1, cm.col(c));
    }
  } else {
    for (int c = 0; c <= cm.cols - size; ++c)
      total += count_from<W>(cm, full_mask, suffix_or, c + 1, size - 1, cm.col(c));
  }
  return total;
}

uint64_t count_level_any(const ColMasks& cm, const std::vector<uint64_t>& full_mask,
                         const std::vector<uint64_t>& suffix_or, int size, bool parallel) {
  switch (cm.words) {
    case 1: return count_level<1>(cm, full_mask.data(), suffix_or, size, parallel);
    case 2: return count_level<2>(cm, full_mask.data(), suffix_or, size, parallel);
    case 3: return count_level<3>(cm, full_mask.data(), suffix_or, size, parallel);
    case 4: return count_level<4>(cm, full_mask.data(), suffix_or, size, parallel);
    default:
      throw Error(Errc::SizeLimit, "more than 256 distinct rows in a sub-network");
  }
}

struct Prepared {
  std::vector<std::vector<int>> rows;  // reduced
  ColMasks cm;
  std::vector<uint64_t> full_mask;
  std::vector<uint64_t> suffix_or;  // (cols+1) * words
  bool has_empty_row = false;
  int packing = 0;
};

Prepared prepare(const BoolMatrix& sub) {
  Prepared pp;
  pp.rows = reduce_rows(sub);
  for (const auto& row : pp.rows)
    if (row.empty()) pp.has_empty_row = true;
  pp.cm = build_col_masks(pp.rows, sub.cols());
  pp.full_mask.assign(pp.cm.words, 0);
  for (int r = 0; r < pp.cm.rows; ++r) pp.full_mask[r / 64] |= 1ULL << (r % 64);
  pp.suffix_or.assign(static_cast<size_t>(pp.cm.cols + 1) * pp.cm.words, 0);
  for (int c = pp.cm.cols - 1; c >= 0; --c)
    for (int w = 0; w < pp.cm.words; ++w)
      pp.suffix_or[static_cast<size_t>(c) * pp.cm.words + w] =
          pp.suffix_or[static_cast<size_t>(c + 1) * pp.cm.words + w] | pp.cm.col(c)[w];
  pp.packing = greedy_packing(pp.rows);
  return pp;
}

}  // namespace

bool covers(const std::vector<int>& cols, const BoolMatrix& sub) {
  std::vector<bool> hit(sub.rows(), false);
  for (int c : cols)
    for (int r = 0; r < sub.rows(); ++r)
      if (sub.at(r, c)) hit[r] = true;
  for (bool h : hit)
    if (!h) return false;
  return true;
}

CutProfile cut_profile(const BoolMatrix& sub, const CutProfileOptions& opts) {
  const int m = sub.cols();
  CutProfile cp;
  cp.cols = m;
  cp.counts.assign(static_cast<size_t>(m) + 1, 0);

  Prepared pp = prepare(sub);
  if (pp.has_empty_row) return cp;  // nothing can cover an empty row
  if (pp.rows.empty()) {            // vacuous: every subset covers
    cp.r = 0;
    cp.count_at_r = 1;
    for (int i = 0; i <= m; ++i) cp.counts[i] = binom(m, i);
    return cp;
  }

  uint64_t work = 0;
  for (int size = std::max(1, pp.packing); size <= m; ++size) {
    work += binom(m, size);
    if (work > opts.budget)
      throw Error(Errc::SizeLimit, "cut-set enumeration over work budget at size " +
                                       std::to_string(size));
    uint64_t cnt = count_level_any(pp.cm, pp.full_mask, pp.suffix_or, size, opts.parallel);
    cp.counts[size] = cnt;
    if (cnt > 0 && !cp.r) {
      cp.r = size;
      cp.count_at_r = cnt;
      if (opts.stop_at_r) break;
    }
  }
  return cp;
}

namespace {

double cover_from_census(const BoolMatrix& sub, double p, uint64_t budget) {
  CutProfileOptions o;
  o.budget = budget;
  CutProfile cp = cut_profile(sub, o);
  const int m = sub.cols();
  const double q = 1.0 - p;
  double s = 0.0;
  for (int i = 0; i <= m; ++i)
    if (cp.counts[i]) s += static_cast<double>(cp.counts[i]) * std::pow(p, i) * std::pow(q, m - i);
  return s;
}

}  // namespace

double cover_probability_ie(const BoolMatrix& sub, double p, uint64_t budget) {
  Prepared pp = prepare(sub);
  if (pp.has_empty_row) return 0.0;
  if (pp.rows.empty()) return 1.0;
  const int m = sub.cols();

  // sum over row subsets R of (-1)^|R| q^|union support(R)|
  const int rr = static_cast<int>(pp.rows.size());
  if (rr > 60 || (1ULL << rr) > budget)
    throw Error(Errc::SizeLimit, "too many incomparable rows for inclusion-exclusion");
  std::vector<double> qpow(m + 1);
  qpow[0] = 1.0;
  for (int i = 1; i <= m; ++i) qpow[i] = qpow[i - 1] * (1.0 - p);
  struct Rec {
    const std::vector<std::vector<int>>& rows;
    const std::vector<double>& qpow;
    double run(int idx, std::vector<int>& uni, int sign) const {
      if (idx == static_cast<int>(rows.size())) return sign * qpow[uni.size()];
      double excl = run(idx + 1, uni, sign);
      std::vector<int> nu;
      std::set_union(uni.begin(), uni.end(), rows[idx].begin(), rows[idx].end(),
                     std::back_inserter(nu));
      double incl = run(idx + 1, nu, -sign);
      return excl + incl;
    }
  };
  std::vector<int> empty;
  return Rec{pp.rows, qpow}.run(0, empty, +1);
}

double cover_probability(const BoolMatrix& sub, double p, uint64_t budget) {
  Prepared pp = prepare(sub);
  if (pp.has_empty_row) return 0.0;
  if (pp.rows.empty()) return 1.0;
  const int m = sub.cols();

  uint64_t census_work = 0;
  bool census_fits = true;
  for (int size = std::max(1, pp.packing); size <= m; ++size) {
    census_work += binom(m, size);
    if (census_work > budget) {
      census_fits = false;
      break;
    }
  }
  const int rr = static_cast<int>(pp.rows.size());
  const bool ie_fits = rr <= 60 && (1ULL << rr) <= budget;
  if (census_fits) return cover_from_census(sub, p, budget);
  if (ie_fits) return cover_probability_ie(sub, p, budget);
  throw Error(Errc::SizeLimit, "side too large for both census and inclusion-exclusion");
}

namespace {

double side_log_likelihood(const BoolMatrix& side, int exponent_prefix, double p,
                           uint64_t budget) {
  // log of q^prefix * Pr[iid-p subset covers all rows of side]
  double cover = cover_probability(side, p, budget);
  if (cover <= 0.0) return kNegInf;
  return exponent_prefix * std::log1p(-p) + std::log(cover);
}

}  // namespace

LikelihoodPair conditional_likelihoods(const Partition& part, double p, uint64_t budget) {
  const int k = part.k1 + part.b0.rows();
  if (part.k1 <= 0 || part.k1 >= k)
    throw Error(Errc::NotConflicting, "likelihoods need a conflicting observation");
  if (!(p > 0.0 && p < 1.0)) throw Error(Errc::BadConfig, "p must be in (0,1)");

  LikelihoodPair lp;
  // m0 = 1: type-1/type-2 vehicles normal, malicious among type-0 must cover b0
  if (part.n0 == 0) {
    lp.log_given_one = kNegInf;
  } else {
    lp.log_given_one = side_log_likelihood(part.b0, part.n - part.n0, p, budget);
  }
  // m0 = 0: symmetric with b1
  if (part.n1 == 0) {
    lp.log_given_zero = kNegInf;
  } else {
    lp.log_given_zero = side_log_likelihood(part.b1, part.n - part.n1, p, budget);
  }
  lp.given_one = std::isinf(lp.log_given_one) ? 0.0 : std::exp(lp.log_given_one);
  lp.given_zero = std::isinf(lp.log_given_zero) ? 0.0 : std::exp(lp.log_given_zero);
  return lp;
}

double brute_force_conditional(const PathSystem& ps, double p, int m0, int max_n) {
  if (ps.n > max_n)
    throw Error(Errc::TooLarge, "brute force limited to " + std::to_string(max_n) + " relays");
  if (ps.direct_content && *ps.direct_content != m0) return 0.0;  // source is honest

  std::vector<uint64_t> rowmask(ps.k, 0);
  std::vector<int> flip(ps.k, 0);
  for (int r = 0; r < ps.k; ++r) {
    for (int c = 0; c < ps.n; ++c)
      if (ps.matrix.at(r, c)) rowmask[r] |= 1ULL << c;
    flip[r] = (ps.contents[r] != m0) ? 1 : 0;
  }
  std::vector<double> pw(ps.n + 1), qw(ps.n + 1);
  pw[0] = qw[0] = 1.0;
  for (int i = 1; i <= ps.n; ++i) {
    pw[i] = pw[i - 1] * p;
    qw[i] = qw[i - 1] * (1.0 - p);
  }
  double total = 0.0;
  const uint64_t lim = 1ULL << ps.n;
  for (uint64_t s = 0; s < lim; ++s) {
    bool ok = true;
    for (int r = 0; r < ps.k; ++r) {
      if (((rowmask[r] & s) != 0) != (flip[r] != 0)) {
        ok = false;
        break;
      }
    }
    if (ok) {
      int pop = __builtin_popcountll(s);
      total += pw[pop] * qw[ps.n - pop];
    }
  }
  return total;
}

}  // namespace topofuse
