#ifndef TCAMSPLIT_BIT_MATCHER_H
#define TCAMSPLIT_BIT_MATCHER_H

#include "tcamsplit/core_model.h"

namespace tcamsplit {

// Shortest zeroing sequence. Within a level, targets are ordered by bit-lex
// order of their current weight (ties: higher id is larger); the lower half
// sends to the upper half positionally.
TransactionSequence bit_matcher_sequence(const Partition& p);

std::size_t lambda(const Partition& p);

// Builds a coloring whose canonical sequence is s (as a multiset).
// s must be size-ordered with a single receiver-0 transaction of size 2^W.
TrieColoring realize_sequence(const TransactionSequence& s, unsigned width);

// Minimal table for p: Bit Matcher followed by realization.
TcamTable synthesize_table(const Partition& p);

}  // namespace tcamsplit

#endif  // TCAMSPLIT_BIT_MATCHER_H
