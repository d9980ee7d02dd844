#ifndef TCAMSPLIT_FORCED_CONSTRUCTIONS_H
#define TCAMSPLIT_FORCED_CONSTRUCTIONS_H

#include <utility>

#include "tcamsplit/core_model.h"

namespace tcamsplit {

using TargetPair = std::pair<int, int>;  // (sender, receiver)

// receiver -> scale*p - 1, sender -> scale*p + 1, others scale*p.
// scale must be a power of two >= 2; 8 gives the forcing construction,
// smaller factors exist to show why 8 is needed.
Partition force_transaction(const Partition& p, int sender, int receiver, unsigned scale = 8);

// The first pair ends up outermost (size 1), the last innermost.
Partition force_sequence(const Partition& p0, const std::vector<TargetPair>& pairs);

// All pairs (i, j) with j < i, ordered by (i, j).
std::vector<TargetPair> clique_pairs(std::size_t k);
Partition clique_partition(std::size_t k, const Partition& p0);

// The transactions force_sequence plants: pair m gets size 2^(3(m-1)).
TransactionSequence forced_transactions(const std::vector<TargetPair>& pairs);

}  // namespace tcamsplit

#endif  // TCAMSPLIT_FORCED_CONSTRUCTIONS_H
