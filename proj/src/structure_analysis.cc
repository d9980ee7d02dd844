#include "tcamsplit/structure_analysis.h"

#include <algorithm>
#include <map>

#include "tcamsplit/oracles.h"

namespace tcamsplit {

TransactionsGraph transactions_graph(const TransactionSequence& s, const Partition& source) {
  auto zero_count = std::count_if(s.begin(), s.end(), [](const Transaction& t) { return t.receiver == 0; });
  if (zero_count != 1)
    throw Error(ErrorCode::MultipleZeroTargets,
                std::to_string(zero_count) + " transactions send to target 0");
  if (!zeroes(source.weights, s))
    throw Error(ErrorCode::InsufficientWeight, "sequence does not zero its source partition");
  TransactionsGraph g;
  g.k = source.k();
  unsigned top = 0;
  for (const auto& t : s) top = std::max(top, t.exponent);
  for (int l = static_cast<int>(top); l >= 0; --l) {
    WeightVector w = source.weights;
    for (const auto& t : s) {
      if (static_cast<int>(t.exponent) > l) continue;
      w[t.sender - 1] -= t.size();
      if (t.receiver) w[t.receiver - 1] += t.size();
    }
    if (std::all_of(w.begin(), w.end(), [](const Weight& x) { return x > 0; })) {
      g.cutoff = l;
      break;
    }
  }
  for (const auto& t : s) {
    if (static_cast<int>(t.exponent) > g.cutoff) continue;
    g.contributing.push_back(t);
    if (t.receiver) g.edges.insert({std::min(t.sender, t.receiver), std::max(t.sender, t.receiver)});
  }
  return g;
}

FragmentationProfile fragmentation(const LeafColoring& input) {
  const LeafColoring lc = normalize(input);
  FragmentationProfile f;
  for (const auto& r : lc.runs) {
    if (f.segments.size() < static_cast<std::size_t>(r.color)) f.segments.resize(r.color, 0);
    ++f.segments[r.color - 1];
  }
  for (auto m : f.segments) f.max_segments = std::max(f.max_segments, m);
  return f;
}

FragmentationProfile fragmentation(const TrieColoring& c) {
  FragmentationProfile f = fragmentation(leaf_runs(c));
  f.segments.resize(std::max<std::size_t>(f.segments.size(), c.max_color()), 0);
  return f;
}

std::vector<PlannedTransaction> neighbor_ordered_plan(const TrieColoring& input) {
  const ConflictReport rep = conflicts(input);
  const unsigned W = input.width;
  if (W <= kDpMaxWidth) {
    LeafColoring lc = leaf_runs(input);
    std::size_t colors = 0;
    {
      std::vector<int> seen;
      for (const auto& r : lc.runs) seen.push_back(r.color);
      std::sort(seen.begin(), seen.end());
      colors = static_cast<std::size_t>(std::unique(seen.begin(), seen.end()) - seen.begin());
    }
    if (colors <= kDpMaxColors && dp_min_conflicts(lc) != rep.count)
      throw Error(ErrorCode::NotMinimalColoring, "coloring is not a minimum-conflict extension");
  }

  std::map<Prefix, int> color;
  for (const auto& n : rep.nodes) color[n.node] = n.color;
  std::map<Prefix, std::vector<Prefix>> children;
  for (const auto& n : rep.nodes) {
    if (n.node.len == 0) continue;
    Prefix a = n.node.parent();
    while (!color.count(a)) a = a.parent();
    children[a].push_back(n.node);
  }
  for (auto& [v, list] : children)
    std::sort(list.begin(), list.end(), [W](const Prefix& a, const Prefix& b) {
      return prefix_start(a, W) < prefix_start(b, W);
    });

  std::vector<PlannedTransaction> plan;
  auto recolor = [&](const Prefix& u, int receiver) {
    plan.push_back({Transaction{color[u], receiver, W - u.len}, u});
  };
  auto solve = [&](auto&& self, const Prefix& v) -> void {
    const auto& kids = children[v];
    for (const auto& u : kids) self(self, u);
    // Leftmost leaf still colored like v: the first gap between hanging subtrees.
    Weight cursor = prefix_start(v, W);
    const Weight end = cursor + prefix_span(v, W);
    std::size_t split = 0;
    for (; split < kids.size(); ++split) {
      Weight s = prefix_start(kids[split], W);
      if (s > cursor) break;
      cursor = s + prefix_span(kids[split], W);
    }
    if (split == kids.size() && cursor >= end)
      throw Error(ErrorCode::NotMinimalColoring, "no monochromatic path below " + format_prefix(v, W));
    for (std::size_t i = split; i-- > 0;) recolor(kids[i], color[v]);
    for (std::size_t i = split; i < kids.size(); ++i) recolor(kids[i], color[v]);
  };
  const Prefix root{0, 0};
  solve(solve, root);
  recolor(root, 0);
  return plan;
}

TransactionSequence neighbor_ordered_sequence(const TrieColoring& c) {
  TransactionSequence s;
  for (const auto& p : neighbor_ordered_plan(c)) s.push_back(p.transaction);
  return s;
}

bool neighbor_predicate_holds(const TrieColoring& c, const std::vector<PlannedTransaction>& plan) {
  std::vector<int> leaves = expand_leaves(leaf_runs(c));
  const unsigned W = c.width;
  const std::size_t n = leaves.size();
  for (std::size_t i = 0; i < plan.size(); ++i) {
    const auto& [t, node] = plan[i];
    if (node.len + t.exponent != W) return false;
    const std::size_t s = static_cast<std::size_t>(node.bits) << (W - node.len);
    const std::size_t e = s + (std::size_t{1} << t.exponent);
    for (std::size_t x = s; x < e; ++x)
      if (leaves[x] != t.sender) return false;
    if (t.receiver == 0) {
      if (i + 1 != plan.size() || node.len != 0) return false;
      continue;
    }
    bool adjacent = (s > 0 && leaves[s - 1] == t.receiver) || (e < n && leaves[e] == t.receiver);
    if (!adjacent) return false;
    std::fill(leaves.begin() + static_cast<std::ptrdiff_t>(s), leaves.begin() + static_cast<std::ptrdiff_t>(e),
              t.receiver);
  }
  return !plan.empty() && plan.back().transaction.receiver == 0;
}

}  // namespace tcamsplit
