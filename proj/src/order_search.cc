#include "tcamsplit/order_search.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "tcamsplit/bit_matcher.h"
#include "tcamsplit/segmented_coloring.h"

namespace tcamsplit {

namespace {

std::size_t n_of_runs(unsigned width, const std::vector<LeafRun>& runs) {
  return color_segments_fast(LeafColoring{width, runs}).count;
}

void check_order(const Partition& p, const std::vector<int>& order) {
  std::vector<int> s = order;
  std::sort(s.begin(), s.end());
  bool ok = s.size() == p.k();
  for (std::size_t i = 0; ok && i < s.size(); ++i) ok = s[i] == static_cast<int>(i + 1);
  if (!ok) throw Error(ErrorCode::BadTargetIds, "order is not a permutation of 1..k");
}

}  // namespace

std::uint64_t distinct_orderings(const Partition& p) {
  std::map<Weight, std::size_t> mult;
  for (const auto& w : p.weights) ++mult[w];
  long double lg = std::lgamma(static_cast<long double>(p.k()) + 1);
  for (const auto& [w, m] : mult) lg -= std::lgamma(static_cast<long double>(m) + 1);
  if (lg > 43.6) return std::uint64_t{1} << 63;
  return static_cast<std::uint64_t>(std::llround(std::exp(lg)));
}

OrderSearchReport exhaustive_best_order(const Partition& p, bool with_table,
                                        std::uint64_t max_orderings) {
  if (distinct_orderings(p) > max_orderings)
    throw Error(ErrorCode::TooManyPermutations,
                std::to_string(distinct_orderings(p)) + " orderings");
  OrderSearchReport rep;
  rep.lambda = lambda(p);

  // Ids per value, ascending, so each value sequence maps to its smallest order.
  std::map<Weight, std::vector<int>> ids;
  for (std::size_t i = 0; i < p.k(); ++i) ids[p.weights[i]].push_back(static_cast<int>(i + 1));
  auto order_of = [&](auto first, auto last) {
    std::map<Weight, std::size_t> used;
    std::vector<int> o;
    for (auto it = first; it != last; ++it) o.push_back(ids[*it][used[*it]++]);
    return o;
  };

  WeightVector seq = p.weights;
  std::sort(seq.begin(), seq.end());
  std::vector<LeafRun> runs(seq.size());
  bool first = true;
  do {
    if (std::lexicographical_compare(seq.rbegin(), seq.rend(), seq.begin(), seq.end())) continue;
    std::vector<int> o = std::min(order_of(seq.begin(), seq.end()), order_of(seq.rbegin(), seq.rend()));
    for (std::size_t i = 0; i < seq.size(); ++i) runs[i] = {o[i], p.weights[o[i] - 1]};
    std::size_t n = n_of_runs(p.width, runs);
    ++rep.evaluated;
    if (with_table) rep.table.push_back({o, n});
    if (first || n < rep.best_n || (n == rep.best_n && o < rep.best_order)) {
      rep.best_n = n;
      rep.best_order = o;
      first = false;
    }
  } while (std::next_permutation(seq.begin(), seq.end()));
  rep.gap = rep.best_n - rep.lambda;
  return rep;
}

std::vector<int> derandomized_order(const Partition& p) {
  const int k = static_cast<int>(p.k());
  std::vector<std::pair<int, int>> pairs;
  for (const auto& t : bit_matcher_sequence(p))
    if (t.receiver != 0) pairs.push_back({t.sender, t.receiver});

  std::vector<int> pos(k + 1, 0);  // 0 = not placed
  std::vector<int> order;
  for (int t = 1; t <= k; ++t) {
    std::vector<long long> free_pos;
    for (int x = t + 1; x <= k; ++x) free_pos.push_back(x);
    const long long f = static_cast<long long>(free_pos.size());
    const long long scale = f >= 2 ? f * (f - 1) : 1;
    long long pair_sum = 0;  // sum of |x-y| over ordered distinct free pairs
    for (long long x : free_pos)
      for (long long y : free_pos) pair_sum += std::llabs(x - y);

    int best = 0;
    long long best_cost = 0;
    for (int c = 1; c <= k; ++c) {
      if (pos[c]) continue;
      pos[c] = t;
      long long cost = 0;
      for (const auto& [a, b] : pairs) {
        if (pos[a] && pos[b]) {
          cost += (std::llabs(pos[a] - pos[b]) - 1) * scale;
        } else if (pos[a] || pos[b]) {
          long long x = pos[a] ? pos[a] : pos[b], s = 0;
          for (long long y : free_pos) s += std::llabs(x - y);
          cost += s * (scale / f) - scale;
        } else {
          cost += pair_sum - scale;
        }
      }
      pos[c] = 0;
      if (best == 0 || cost < best_cost) {
        best = c;
        best_cost = cost;
      }
    }
    pos[best] = t;
    order.push_back(best);
  }
  return order;
}

bool within_derandomized_bound(std::size_t n, std::size_t n_star, std::size_t k) {
  // 6n <= 2 n*(k+1) - (k-2)(k+1)
  long long lhs = 6 * static_cast<long long>(n);
  long long kk = static_cast<long long>(k);
  long long rhs = 2 * static_cast<long long>(n_star) * (kk + 1) - (kk - 2) * (kk + 1);
  return lhs <= rhs;
}

std::vector<int> greedy_order(const Partition& p, GreedyTieBreak tie) {
  const int k = static_cast<int>(p.k());
  const Weight total = pow2(p.width);
  std::vector<int> order;
  std::vector<bool> used(k + 1, false);
  std::vector<LeafRun> placed;
  Weight placed_sum = 0;
  for (int step = 0; step < k; ++step) {
    int best = 0;
    std::size_t best_n = 0;
    for (int c = 1; c <= k; ++c) {
      if (used[c]) continue;
      std::vector<LeafRun> runs = placed;
      runs.push_back({c, p.weights[c - 1]});
      Weight rest = total - placed_sum - p.weights[c - 1];
      if (rest > 0) runs.push_back({k + 1, rest});
      std::size_t n = n_of_runs(p.width, runs);
      bool better = best == 0 || n < best_n;
      if (!better && n == best_n) {
        const Weight& v = p.weights[c - 1];
        const Weight& bv = p.weights[best - 1];
        better = tie == GreedyTieBreak::SmallestValue ? v < bv : v > bv;
      }
      if (better) {
        best = c;
        best_n = n;
      }
    }
    used[best] = true;
    order.push_back(best);
    placed.push_back({best, p.weights[best - 1]});
    placed_sum += p.weights[best - 1];
  }
  return order;
}

TrieColoring shift_to_segments(const TrieColoring& c, const std::vector<int>& order) {
  check_coloring(c);
  const unsigned W = c.width;
  const Partition p = validate_partition(induced_partition(c, order.size()), W);
  check_order(p, order);
  const std::size_t lam = lambda(p);
  if (conflicts(c).count != lam)
    throw Error(ErrorCode::NotOptimalInput, "coloring has " + std::to_string(conflicts(c).count) +
                                                " conflicts, optimum is " + std::to_string(lam));
  const std::size_t k = p.k();

  // For each marked node, its nearest marked proper ancestor.
  std::map<Prefix, Prefix> up;
  for (const auto& [v, col] : c.marked) {
    if (v.len == 0) continue;
    Prefix a = v.parent();
    while (!c.marked.count(a)) a = a.parent();
    up[v] = a;
  }
  // counts[D][color-1] = nodes at depth D whose effective color is color.
  std::vector<WeightVector> counts(W + 1, WeightVector(k, Weight(0)));
  for (unsigned D = 0; D <= W; ++D) {
    for (const auto& [v, col] : c.marked) {
      if (v.len > D) continue;
      counts[D][col - 1] += pow2(D - v.len);
      if (v.len > 0) counts[D][c.marked.at(up[v]) - 1] -= pow2(D - v.len);
    }
  }

  // Sorted by order position, each depth is a sequence of color intervals.
  auto intervals = [&](unsigned D) {
    std::vector<std::pair<Weight, Weight>> iv(k + 1);
    Weight s = 0;
    for (int col : order) {
      iv[col] = {s, s + counts[D][col - 1]};
      s += counts[D][col - 1];
    }
    return iv;
  };

  TrieColoring out = make_root_coloring(W, c.marked.at(Prefix{0, 0}));
  std::size_t marks = 1;
  const std::size_t limit = std::max<std::size_t>(lam * k + k, 1) * 4;
  auto prev = intervals(0);
  for (unsigned D = 1; D <= W; ++D) {
    auto cur = intervals(D);
    for (int col : order) {
      const auto& [s, e] = cur[col];
      for (int pcol : order) {
        if (pcol == col) continue;
        Weight lo = std::max(s, Weight(prev[pcol].first * 2));
        Weight hi = std::min(e, Weight(prev[pcol].second * 2));
        for (Weight x = lo; x < hi; ++x) {
          if (++marks > limit)
            throw Error(ErrorCode::StateSpaceTooLarge, "shifted coloring exceeds conflict limit");
          out.marked[Prefix{x.convert_to<std::uint64_t>(), D}] = col;
        }
      }
    }
    prev = std::move(cur);
  }
  return out;
}

long long shift_bound(std::size_t lambda_value, std::size_t k) {
  long long kk = static_cast<long long>(k);
  return static_cast<long long>(lambda_value) * (kk - 1) - (kk - 2) * (kk + 1) / 2;
}

LowerBoundInstance lower_bound_instance(std::size_t k, unsigned width) {
  if (k < 3 || width < 2 || width > 4096 || Weight(k - 2) > pow2(width - 1))
    throw Error(ErrorCode::InvalidKW, "k=" + std::to_string(k) + " W=" + std::to_string(width));
  const Weight half = pow2(width - 1);
  Weight p1, p2;
  if (width % 2 == 1) {
    p1 = half / 3;
    p2 = 2 * p1 + 1;
  } else {
    p1 = (half + 2) / 3;
    p2 = 2 * p1 - 1;
  }
  // Split the other half into k-2 powers of two, halving the largest first.
  WeightVector rest{half};
  while (rest.size() < k - 2) {
    auto it = std::max_element(rest.begin(), rest.end());
    Weight h = *it / 2;
    *it = h;
    rest.push_back(h);
  }
  std::sort(rest.begin(), rest.end());
  WeightVector w{p1, p2};
  w.insert(w.end(), rest.begin(), rest.end());
  LowerBoundInstance inst{validate_partition(w, width), {}, {}};
  inst.bad.push_back(1);
  for (std::size_t i = 3; i <= k; ++i) inst.bad.push_back(static_cast<int>(i));
  inst.bad.push_back(2);
  for (std::size_t i = 1; i <= k; ++i) inst.good.push_back(static_cast<int>(i));
  return inst;
}

std::pair<std::size_t, std::size_t> lower_bound_ratio(std::size_t k, unsigned width) {
  const std::size_t lg = floor_log2(k);
  return {((width - lg) / 2) * (k - 1) + 1, width / 2 + (k - 1)};
}

}  // namespace tcamsplit
