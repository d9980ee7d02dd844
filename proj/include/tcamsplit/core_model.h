#ifndef TCAMSPLIT_CORE_MODEL_H
#define TCAMSPLIT_CORE_MODEL_H

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace tcamsplit {

using Weight = boost::multiprecision::cpp_int;
using WeightVector = std::vector<Weight>;

enum class ErrorCode {
  NonPositiveWeight,
  SumNotPowerOfTwo,
  WidthMismatch,
  InsufficientWeight,
  OutOfRange,
  UnmatchedAddress,
  UnrealizableSequence,
  NonSegmentedInput,
  WidthCapExceeded,
  TooManyPermutations,
  NotOptimalInput,
  InvalidKW,
  MultipleZeroTargets,
  NotMinimalColoring,
  BadTargetIds,
  BadK,
  StateSpaceTooLarge,
  BudgetExceeded,
  ParseError,
};

const char* error_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what);
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

// Explicit-trie operations materialize O(2^W) nodes.
inline constexpr unsigned kExplicitWidthCap = 22;
// Prefixes are packed into 64-bit words.
inline constexpr unsigned kMaxColoringWidth = 63;

Weight pow2(unsigned e);
bool is_power_of_two(const Weight& x);
unsigned log2_exact(const Weight& x);  // x must be a power of two
std::string to_string(const Weight& x);
Weight parse_weight(std::string_view s);

struct Partition {
  WeightVector weights;
  unsigned width = 0;
  std::size_t k() const { return weights.size(); }
};

Partition validate_partition(const WeightVector& weights,
                             std::optional<unsigned> width = std::nullopt);

// receiver 0 is the unallocated pseudo-target. size = 2^exponent.
struct Transaction {
  int sender = 1;
  int receiver = 0;
  unsigned exponent = 0;

  Weight size() const { return pow2(exponent); }
  auto operator<=>(const Transaction&) const = default;
};

using TransactionSequence = std::vector<Transaction>;

Transaction make_transaction(int sender, int receiver, const Weight& size);

WeightVector apply_transaction(WeightVector p, const Transaction& t);
// Applies s in order; throws InsufficientWeight on a negative intermediate.
WeightVector apply_sequence(WeightVector p, const TransactionSequence& s);
bool zeroes(const WeightVector& p, const TransactionSequence& s);
// The partition a sequence zeroes, recovered by undoing it from all-zero.
WeightVector source_of(const TransactionSequence& s);

bool bitlex_less(const Weight& a, const Weight& b, unsigned width);

// A bit-string of length len; bits holds its value with the first bit as MSB.
struct Prefix {
  std::uint64_t bits = 0;
  unsigned len = 0;

  Prefix parent() const { return {bits >> 1, len - 1}; }
  Prefix child(unsigned bit) const { return {(bits << 1) | bit, len + 1}; }
  bool is_ancestor_of(const Prefix& other) const;  // proper ancestor
  auto operator<=>(const Prefix&) const = default;
};

// First leaf address and leaf count of the prefix subtree at width W.
Weight prefix_start(const Prefix& p, unsigned width);
Weight prefix_span(const Prefix& p, unsigned width);

struct TrieColoring {
  unsigned width = 0;
  std::map<Prefix, int> marked;

  // Color of the nearest marked ancestor-or-self.
  int color_of(const Prefix& node) const;
  // Color of the nearest marked proper ancestor; 0 for the root.
  int parent_color(const Prefix& node) const;
  int max_color() const;
};

TrieColoring make_root_coloring(unsigned width, int color);
void check_coloring(const TrieColoring& c);

struct Rule {
  Prefix prefix;
  int target = 1;
  bool operator==(const Rule&) const = default;
};

struct TcamTable {
  unsigned width = 0;
  std::vector<Rule> rules;  // first match wins
};

// First-match lookup, used as the reference semantics of a table.
std::optional<int> lookup(const TcamTable& t, std::uint64_t address);

TrieColoring coloring_from_table(const TcamTable& t);
TcamTable table_from_coloring(const TrieColoring& c);

// Leaf counts per color 1..k; k = 0 means the largest color present.
WeightVector induced_partition(const TrieColoring& c, std::size_t k = 0);

struct ConflictNode {
  Prefix node;
  int color = 0;
  int parent_color = 0;  // 0 for the root
};

struct ConflictReport {
  std::size_t count = 0;
  std::vector<ConflictNode> nodes;  // emission order of table_from_coloring
};

ConflictReport conflicts(const TrieColoring& c);

TransactionSequence sequence_from_coloring(const TrieColoring& c);

struct LeafRun {
  int color = 0;
  Weight length;
  bool operator==(const LeafRun&) const = default;
};

struct LeafColoring {
  unsigned width = 0;
  std::vector<LeafRun> runs;
};

// Merges adjacent equal runs and checks lengths against 2^width.
LeafColoring normalize(LeafColoring lc);
bool is_segmented(const LeafColoring& lc);
LeafColoring segments_in_order(const Partition& p, const std::vector<int>& order);
// Left-to-right leaf runs of a coloring, without materializing leaves.
LeafColoring leaf_runs(const TrieColoring& c);
std::vector<int> expand_leaves(const LeafColoring& lc);  // W <= explicit cap

// Text forms.
WeightVector parse_partition(std::string_view text);
std::string format_partition(const WeightVector& p);
std::string format_prefix(const Prefix& p, unsigned width);
std::string format_table(const TcamTable& t);
TcamTable parse_table(std::string_view text);
std::string format_transaction(const Transaction& t);
std::string format_sequence(const TransactionSequence& s);
TransactionSequence parse_sequence(std::string_view text);

}  // namespace tcamsplit

#endif  // TCAMSPLIT_CORE_MODEL_H
