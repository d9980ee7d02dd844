#ifndef TCAMSPLIT_STRUCTURE_ANALYSIS_H
#define TCAMSPLIT_STRUCTURE_ANALYSIS_H

#include <set>
#include <utility>

#include "tcamsplit/core_model.h"

namespace tcamsplit {

struct TransactionsGraph {
  std::size_t k = 0;
  int cutoff = -1;  // L; -1 when even the size-1 transactions zero a weight
  TransactionSequence contributing;  // A_L, in input order
  std::set<std::pair<int, int>> edges;  // (i, j) with i < j

  bool is_clique() const { return edges.size() == k * (k - 1) / 2; }
};

TransactionsGraph transactions_graph(const TransactionSequence& s, const Partition& source);

struct FragmentationProfile {
  std::vector<std::size_t> segments;  // m_i for targets 1..k
  std::size_t max_segments = 0;       // M
};

FragmentationProfile fragmentation(const TrieColoring& c);
FragmentationProfile fragmentation(const LeafColoring& lc);

struct PlannedTransaction {
  Transaction transaction;
  Prefix node;  // subtree recolored by the transaction
};

// Transactions of a minimum-conflict coloring, reordered so that each one
// recolors a region to the color of a leaf adjacent to it.
std::vector<PlannedTransaction> neighbor_ordered_plan(const TrieColoring& c);
TransactionSequence neighbor_ordered_sequence(const TrieColoring& c);

// Replays a plan on an explicit leaf array (W <= kExplicitWidthCap) and
// reports whether every step recolors a monochromatic sender region toward
// an adjacent receiver-colored leaf.
bool neighbor_predicate_holds(const TrieColoring& c, const std::vector<PlannedTransaction>& plan);

}  // namespace tcamsplit

#endif  // TCAMSPLIT_STRUCTURE_ANALYSIS_H
