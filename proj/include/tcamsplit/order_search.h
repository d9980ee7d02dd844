#ifndef TCAMSPLIT_ORDER_SEARCH_H
#define TCAMSPLIT_ORDER_SEARCH_H

#include <cstdint>
#include <utility>

#include "tcamsplit/core_model.h"

namespace tcamsplit {

struct OrderCost {
  std::vector<int> order;
  std::size_t n = 0;
};

struct OrderSearchReport {
  std::vector<int> best_order;
  std::size_t best_n = 0;
  std::size_t lambda = 0;
  std::size_t gap = 0;
  std::uint64_t evaluated = 0;
  std::vector<OrderCost> table;  // filled on request, one row per evaluated ordering
};

inline constexpr std::uint64_t kMaxOrderings = 10'000'000;

// Distinct orderings of the part multiset, each reversal pair once.
// Ties resolve to the lexicographically smallest order.
OrderSearchReport exhaustive_best_order(const Partition& p, bool with_table = false,
                                        std::uint64_t max_orderings = kMaxOrderings);

// Number of distinct orderings of the part multiset (saturates at 2^63).
std::uint64_t distinct_orderings(const Partition& p);

std::vector<int> derandomized_order(const Partition& p);
// n_star (k+1)/3 - (k-2)(k+1)/6, as an exact fraction over 6.
bool within_derandomized_bound(std::size_t n, std::size_t n_star, std::size_t k);

enum class GreedyTieBreak { SmallestValue, LargestValue };
std::vector<int> greedy_order(const Partition& p,
                              GreedyTieBreak tie = GreedyTieBreak::SmallestValue);

// Rearranges whole subtrees of an optimal coloring so the leaves form the
// segments of its partition in the given order.
TrieColoring shift_to_segments(const TrieColoring& c, const std::vector<int>& order);
// lambda (k-1) - (k-2)(k+1)/2
long long shift_bound(std::size_t lambda, std::size_t k);

struct LowerBoundInstance {
  Partition p;
  std::vector<int> bad;
  std::vector<int> good;
};

LowerBoundInstance lower_bound_instance(std::size_t k, unsigned width);
// (floor((W - floor(lg k))/2)(k-1) + 1) / (floor(W/2) + k - 1)
std::pair<std::size_t, std::size_t> lower_bound_ratio(std::size_t k, unsigned width);

}  // namespace tcamsplit

#endif  // TCAMSPLIT_ORDER_SEARCH_H
