#include "tcamsplit/bit_matcher.h"

#include <algorithm>
#include <numeric>

namespace tcamsplit {

namespace mp = boost::multiprecision;

TransactionSequence bit_matcher_sequence(const Partition& p) {
  WeightVector w = p.weights;
  const unsigned W = p.width;
  TransactionSequence s;
  std::vector<int> level;
  for (unsigned d = 0; d < W; ++d) {
    level.clear();
    for (std::size_t i = 0; i < w.size(); ++i)
      if (mp::bit_test(w[i], d)) level.push_back(static_cast<int>(i));
    // Bits below d are already clear, so the lowest differing bit decides.
    std::sort(level.begin(), level.end(), [&](int a, int b) {
      if (w[a] == w[b]) return a < b;
      return mp::bit_test(w[b], static_cast<unsigned>(mp::lsb(Weight(w[a] ^ w[b]))));
    });
    const std::size_t half = level.size() / 2;
    for (std::size_t i = 0; i < half; ++i) {
      Transaction t{level[i] + 1, level[half + i] + 1, d};
      w = apply_transaction(std::move(w), t);
      s.push_back(t);
    }
  }
  for (std::size_t i = 0; i < w.size(); ++i)
    if (w[i] != 0) s.push_back(Transaction{static_cast<int>(i) + 1, 0, W});
  return s;
}

std::size_t lambda(const Partition& p) { return bit_matcher_sequence(p).size(); }

TrieColoring realize_sequence(const TransactionSequence& s, unsigned width) {
  if (width > kMaxColoringWidth)
    throw Error(ErrorCode::WidthCapExceeded, "width " + std::to_string(width));
  if (s.empty()) throw Error(ErrorCode::UnrealizableSequence, "empty sequence");
  for (std::size_t i = 1; i < s.size(); ++i)
    if (s[i].exponent < s[i - 1].exponent)
      throw Error(ErrorCode::UnrealizableSequence, "sizes are not non-decreasing");
  auto zero_count = std::count_if(s.begin(), s.end(), [](const Transaction& t) { return t.receiver == 0; });
  if (zero_count != 1 || s.back().receiver != 0)
    throw Error(ErrorCode::UnrealizableSequence, "need exactly one receiver-0 transaction, last");
  if (s.back().exponent != width)
    throw Error(ErrorCode::WidthMismatch, "final transaction size differs from 2^W");
  WeightVector source = source_of(s);

  struct Block {
    Prefix node;
    bool marked;
  };
  std::vector<std::vector<Block>> blocks(source.size() + 1);
  TrieColoring c = make_root_coloring(width, s.back().sender);
  blocks[s.back().sender].push_back({Prefix{0, 0}, true});

  for (auto it = std::next(s.rbegin()); it != s.rend(); ++it) {
    const int a = it->sender, b = it->receiver;
    const unsigned target_len = width - it->exponent;
    auto& pool = blocks[b];
    std::size_t best = pool.size();
    std::uint64_t best_start = 0;
    for (std::size_t i = 0; i < pool.size(); ++i) {
      const auto& blk = pool[i];
      if (blk.node.len > target_len || (blk.node.len == target_len && blk.marked)) continue;
      std::uint64_t start = blk.node.bits << (width - blk.node.len);
      if (best == pool.size() || start < best_start) {
        best = i;
        best_start = start;
      }
    }
    if (best == pool.size())
      throw Error(ErrorCode::UnrealizableSequence, "no free aligned block for " + format_transaction(*it));
    Prefix node = pool[best].node;
    pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(best));
    while (node.len < target_len) {
      pool.push_back({node.child(1), false});
      node = node.child(0);
    }
    c.marked[node] = a;
    blocks[a].push_back({node, true});
  }

  if (conflicts(c).count != s.size() || induced_partition(c, source.size()) != source)
    throw Error(ErrorCode::UnrealizableSequence, "realized coloring does not reproduce the sequence");
  return c;
}

TcamTable synthesize_table(const Partition& p) {
  return table_from_coloring(realize_sequence(bit_matcher_sequence(p), p.width));
}

}  // namespace tcamsplit
