#include "tcamsplit/forced_constructions.h"

namespace tcamsplit {

Partition force_transaction(const Partition& p, int sender, int receiver, unsigned scale) {
  const int k = static_cast<int>(p.k());
  if (sender < 1 || sender > k || receiver < 1 || receiver > k || sender == receiver)
    throw Error(ErrorCode::BadTargetIds,
                "pair (" + std::to_string(sender) + "," + std::to_string(receiver) + ")");
  if (scale < 2 || (scale & (scale - 1)) != 0)
    throw Error(ErrorCode::OutOfRange, "scale " + std::to_string(scale));
  WeightVector q;
  for (const auto& w : p.weights) q.push_back(w * scale);
  q[receiver - 1] -= 1;
  q[sender - 1] += 1;
  return validate_partition(q, p.width + log2_exact(Weight(scale)));
}

Partition force_sequence(const Partition& p0, const std::vector<TargetPair>& pairs) {
  for (const auto& [s, r] : pairs)
    if (s < 1 || r < 1 || s == r || s > static_cast<int>(p0.k()) || r > static_cast<int>(p0.k()))
      throw Error(ErrorCode::BadTargetIds, "pair (" + std::to_string(s) + "," + std::to_string(r) + ")");
  Partition p = p0;
  for (auto it = pairs.rbegin(); it != pairs.rend(); ++it) p = force_transaction(p, it->first, it->second);
  return p;
}

std::vector<TargetPair> clique_pairs(std::size_t k) {
  std::vector<TargetPair> pairs;
  for (int i = 2; i <= static_cast<int>(k); ++i)
    for (int j = 1; j < i; ++j) pairs.push_back({i, j});
  return pairs;
}

Partition clique_partition(std::size_t k, const Partition& p0) {
  if (k < 2 || p0.k() != k)
    throw Error(ErrorCode::BadK, "k=" + std::to_string(k) + " with a base of " +
                                     std::to_string(p0.k()) + " parts");
  return force_sequence(p0, clique_pairs(k));
}

TransactionSequence forced_transactions(const std::vector<TargetPair>& pairs) {
  TransactionSequence s;
  for (std::size_t m = 0; m < pairs.size(); ++m)
    s.push_back(Transaction{pairs[m].first, pairs[m].second, static_cast<unsigned>(3 * m)});
  return s;
}

}  // namespace tcamsplit
