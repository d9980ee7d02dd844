#ifndef TCAMSPLIT_ORACLES_H
#define TCAMSPLIT_ORACLES_H

#include <cstdint>

#include "tcamsplit/core_model.h"

namespace tcamsplit {

inline constexpr unsigned kDpMaxWidth = 12;
inline constexpr std::size_t kDpMaxColors = 16;
inline constexpr unsigned kBruteLambdaMaxSum = 512;
inline constexpr unsigned kEnumerateMaxSum = 128;
inline constexpr unsigned kLambdaTableMaxSum = 64;

// Best-first search over sorted weight multisets (zeros kept, k fixed).
std::size_t brute_lambda(const Partition& p, unsigned max_sum = kBruteLambdaMaxSum);

// Every shortest zeroing sequence, one per transaction multiset, each given
// as its lexicographically smallest valid ordering by (size, sender, receiver).
std::vector<TransactionSequence> enumerate_shortest_sequences(const Partition& p,
                                                              unsigned max_sum = kEnumerateMaxSum);

// Minimum conflicts over all extensions of a leaf coloring, by a per-node,
// per-color cost table.
std::size_t dp_min_conflicts(const LeafColoring& lc);

// Shortest zeroing distance of every weight multiset with sum <= max_sum,
// by breadth-first search from the empty multiset. Spare zero-weight
// targets are unlimited, so a distance here is a lower bound for any fixed k.
class LambdaTable {
 public:
  explicit LambdaTable(unsigned max_sum);

  unsigned max_sum() const { return max_sum_; }
  std::size_t states() const { return dist_.size(); }
  // Parts in any order; zeros are ignored.
  int distance(const std::vector<unsigned>& parts) const;

 private:
  struct Run {
    unsigned value, count;
  };
  std::uint64_t rank(const Run* runs, std::size_t n, unsigned total) const;
  std::size_t unrank(std::uint64_t index, Run* runs, unsigned& total) const;
  std::uint64_t partitions_at_most(unsigned n, unsigned m) const { return p_[n * stride_ + m]; }
  std::uint32_t run_rank(unsigned rem, unsigned value, unsigned count) const {
    return run_rank_[(static_cast<std::size_t>(rem) * stride_ + value) * stride_ + count];
  }

  unsigned max_sum_;
  unsigned stride_;
  std::vector<std::uint64_t> p_;        // partitions of n with parts <= m
  std::vector<std::uint64_t> offset_;   // first index of each total
  std::vector<std::uint32_t> run_rank_; // rank contribution of a run
  std::vector<std::uint8_t> dist_;
};

}  // namespace tcamsplit

#endif  // TCAMSPLIT_ORACLES_H
