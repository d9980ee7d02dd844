#ifndef TCAMSPLIT_SEGMENTED_COLORING_H
#define TCAMSPLIT_SEGMENTED_COLORING_H

#include "tcamsplit/core_model.h"

namespace tcamsplit {

// Explicit trie version; W <= kExplicitWidthCap.
TrieColoring color_segments_full(const LeafColoring& lc);

struct FastConflict {
  unsigned depth = 0;
  Weight position;  // node index within its depth
  int color = 0;
  int parent_color = 0;  // 0 for the root
  bool operator==(const FastConflict&) const = default;
};

struct FastColoring {
  std::size_t count = 0;
  std::vector<FastConflict> conflicts;
  std::size_t max_runs = 0;  // largest run count seen on any level
  // levels[D] holds the runs at depth D when tracing was requested.
  std::vector<std::vector<LeafRun>> levels;
};

// Run-length version; cost per level is linear in the number of runs.
FastColoring color_segments_fast(const LeafColoring& lc, bool trace = false);

// W <= kMaxColoringWidth.
TrieColoring coloring_from_fast(const FastColoring& f, unsigned width);
TransactionSequence sequence_from_fast(const FastColoring& f, unsigned width);

TrieColoring ortc(const LeafColoring& lc, bool segmented = false);

std::size_t n_of(const Partition& p, const std::vector<int>& order);

unsigned floor_log2(std::size_t k);
// (W - floor(lg k) + 1)(k - 1) + 1
std::size_t segmented_size_bound(unsigned width, std::size_t k);

}  // namespace tcamsplit

#endif  // TCAMSPLIT_SEGMENTED_COLORING_H
