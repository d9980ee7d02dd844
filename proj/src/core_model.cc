#include "tcamsplit/core_model.h"

#include <algorithm>
#include <cctype>
#include <regex>
#include <set>
#include <sstream>
#include <tuple>

namespace tcamsplit {

namespace mp = boost::multiprecision;

const char* error_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::NonPositiveWeight: return "NonPositiveWeight";
    case ErrorCode::SumNotPowerOfTwo: return "SumNotPowerOfTwo";
    case ErrorCode::WidthMismatch: return "WidthMismatch";
    case ErrorCode::InsufficientWeight: return "InsufficientWeight";
    case ErrorCode::OutOfRange: return "OutOfRange";
    case ErrorCode::UnmatchedAddress: return "UnmatchedAddress";
    case ErrorCode::UnrealizableSequence: return "UnrealizableSequence";
    case ErrorCode::NonSegmentedInput: return "NonSegmentedInput";
    case ErrorCode::WidthCapExceeded: return "WidthCapExceeded";
    case ErrorCode::TooManyPermutations: return "TooManyPermutations";
    case ErrorCode::NotOptimalInput: return "NotOptimalInput";
    case ErrorCode::InvalidKW: return "InvalidKW";
    case ErrorCode::MultipleZeroTargets: return "MultipleZeroTargets";
    case ErrorCode::NotMinimalColoring: return "NotMinimalColoring";
    case ErrorCode::BadTargetIds: return "BadTargetIds";
    case ErrorCode::BadK: return "BadK";
    case ErrorCode::StateSpaceTooLarge: return "StateSpaceTooLarge";
    case ErrorCode::BudgetExceeded: return "BudgetExceeded";
    case ErrorCode::ParseError: return "ParseError";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& what)
    : std::runtime_error(std::string(error_name(code)) + ": " + what), code_(code) {}

Weight pow2(unsigned e) {
  Weight r = 1;
  r <<= e;
  return r;
}

bool is_power_of_two(const Weight& x) { return x > 0 && (x & (x - 1)) == 0; }

unsigned log2_exact(const Weight& x) { return static_cast<unsigned>(mp::msb(x)); }

std::string to_string(const Weight& x) { return x.str(); }

Weight parse_weight(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  std::string t(s.substr(b, e - b));
  bool neg = !t.empty() && t[0] == '-';
  std::string digits = neg ? t.substr(1) : t;
  if (digits.empty() ||
      !std::all_of(digits.begin(), digits.end(),
                   [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }))
    throw Error(ErrorCode::ParseError, "not an integer: '" + t + "'");
  Weight w(digits);
  return neg ? Weight(-w) : w;
}

Partition validate_partition(const WeightVector& weights, std::optional<unsigned> width) {
  Weight sum = 0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (weights[i] <= 0)
      throw Error(ErrorCode::NonPositiveWeight,
                  "weight " + std::to_string(i + 1) + " is " + to_string(weights[i]));
    sum += weights[i];
  }
  if (!is_power_of_two(sum))
    throw Error(ErrorCode::SumNotPowerOfTwo, "sum " + to_string(sum));
  unsigned w = log2_exact(sum);
  if (width && *width != w)
    throw Error(ErrorCode::WidthMismatch,
                "sum is 2^" + std::to_string(w) + ", width " + std::to_string(*width));
  return Partition{weights, w};
}

Transaction make_transaction(int sender, int receiver, const Weight& size) {
  if (!is_power_of_two(size))
    throw Error(ErrorCode::OutOfRange, "transaction size " + to_string(size));
  if (sender < 1 || receiver < 0 || sender == receiver)
    throw Error(ErrorCode::BadTargetIds,
                std::to_string(sender) + " -> " + std::to_string(receiver));
  return Transaction{sender, receiver, log2_exact(size)};
}

WeightVector apply_transaction(WeightVector p, const Transaction& t) {
  const int k = static_cast<int>(p.size());
  if (t.sender < 1 || t.sender > k || t.receiver < 0 || t.receiver > k ||
      t.sender == t.receiver)
    throw Error(ErrorCode::BadTargetIds, format_transaction(t));
  Weight m = t.size();
  if (p[t.sender - 1] < m)
    throw Error(ErrorCode::InsufficientWeight, format_transaction(t));
  p[t.sender - 1] -= m;
  if (t.receiver != 0) p[t.receiver - 1] += m;
  return p;
}

WeightVector apply_sequence(WeightVector p, const TransactionSequence& s) {
  for (const auto& t : s) p = apply_transaction(std::move(p), t);
  return p;
}

bool zeroes(const WeightVector& p, const TransactionSequence& s) {
  try {
    auto r = apply_sequence(p, s);
    return std::all_of(r.begin(), r.end(), [](const Weight& w) { return w == 0; });
  } catch (const Error&) {
    return false;
  }
}

WeightVector source_of(const TransactionSequence& s) {
  int k = 0;
  for (const auto& t : s) {
    if (t.sender < 1 || t.receiver < 0 || t.sender == t.receiver)
      throw Error(ErrorCode::BadTargetIds, format_transaction(t));
    k = std::max({k, t.sender, t.receiver});
  }
  WeightVector p(k, Weight(0));
  for (auto it = s.rbegin(); it != s.rend(); ++it) {
    p[it->sender - 1] += it->size();
    if (it->receiver != 0) p[it->receiver - 1] -= it->size();
  }
  for (const auto& w : p)
    if (w < 0) throw Error(ErrorCode::InsufficientWeight, "sequence does not zero a partition");
  apply_sequence(p, s);
  return p;
}

bool bitlex_less(const Weight& a, const Weight& b, unsigned width) {
  Weight top = pow2(width);
  if (a < 0 || b < 0 || a >= top || b >= top)
    throw Error(ErrorCode::OutOfRange, "bitlex operands exceed width");
  if (a == b) return false;
  Weight x = a ^ b;
  return mp::bit_test(b, static_cast<unsigned>(mp::lsb(x)));
}

bool Prefix::is_ancestor_of(const Prefix& other) const {
  return len < other.len && (other.bits >> (other.len - len)) == bits;
}

Weight prefix_start(const Prefix& p, unsigned width) {
  Weight s = p.bits;
  s <<= (width - p.len);
  return s;
}

Weight prefix_span(const Prefix& p, unsigned width) { return pow2(width - p.len); }

int TrieColoring::color_of(const Prefix& node) const {
  Prefix v = node;
  while (true) {
    auto it = marked.find(v);
    if (it != marked.end()) return it->second;
    if (v.len == 0) throw Error(ErrorCode::UnmatchedAddress, "root is not marked");
    v = v.parent();
  }
}

int TrieColoring::parent_color(const Prefix& node) const {
  return node.len == 0 ? 0 : color_of(node.parent());
}

int TrieColoring::max_color() const {
  int m = 0;
  for (const auto& [p, c] : marked) m = std::max(m, c);
  return m;
}

TrieColoring make_root_coloring(unsigned width, int color) {
  TrieColoring c;
  c.width = width;
  c.marked[Prefix{0, 0}] = color;
  return c;
}

void check_coloring(const TrieColoring& c) {
  if (c.width > kMaxColoringWidth)
    throw Error(ErrorCode::WidthCapExceeded, "coloring width " + std::to_string(c.width));
  if (!c.marked.count(Prefix{0, 0}))
    throw Error(ErrorCode::UnmatchedAddress, "root is not marked");
  for (const auto& [p, col] : c.marked) {
    if (p.len > c.width || (p.len < 64 && (p.bits >> p.len) != 0))
      throw Error(ErrorCode::OutOfRange, "prefix outside the trie");
    if (col < 1) throw Error(ErrorCode::BadTargetIds, "color " + std::to_string(col));
  }
}

std::optional<int> lookup(const TcamTable& t, std::uint64_t address) {
  for (const auto& r : t.rules)
    if ((address >> (t.width - r.prefix.len)) == r.prefix.bits) return r.target;
  return std::nullopt;
}

TrieColoring coloring_from_table(const TcamTable& t) {
  TrieColoring c;
  c.width = t.width;
  if (t.width > kMaxColoringWidth)
    throw Error(ErrorCode::WidthCapExceeded, "table width " + std::to_string(t.width));
  for (const auto& r : t.rules) {
    if (r.prefix.len > t.width) throw Error(ErrorCode::WidthMismatch, "rule longer than width");
    if (r.target < 1) throw Error(ErrorCode::BadTargetIds, "rule target " + std::to_string(r.target));
    // A rule under an earlier, shorter rule never matches.
    bool shadowed = c.marked.count(r.prefix) > 0;
    for (Prefix v = r.prefix; !shadowed && v.len > 0;) {
      v = v.parent();
      shadowed = c.marked.count(v) > 0;
    }
    if (!shadowed) c.marked[r.prefix] = r.target;
  }
  if (!c.marked.count(Prefix{0, 0}))
    throw Error(ErrorCode::UnmatchedAddress, "table has no match-all rule");
  return c;
}

ConflictReport conflicts(const TrieColoring& c) {
  check_coloring(c);
  ConflictReport r;
  for (const auto& [p, col] : c.marked) {
    int pc = c.parent_color(p);
    if (p.len == 0 || pc != col) r.nodes.push_back({p, col, pc});
  }
  std::sort(r.nodes.begin(), r.nodes.end(), [](const ConflictNode& a, const ConflictNode& b) {
    return std::make_tuple(b.node.len, a.node.bits) < std::make_tuple(a.node.len, b.node.bits);
  });
  r.count = r.nodes.size();
  return r;
}

TcamTable table_from_coloring(const TrieColoring& c) {
  TcamTable t;
  t.width = c.width;
  for (const auto& n : conflicts(c).nodes) t.rules.push_back({n.node, n.color});
  return t;
}

WeightVector induced_partition(const TrieColoring& c, std::size_t k) {
  check_coloring(c);
  std::map<Prefix, Weight> owned;
  for (const auto& [p, col] : c.marked) owned[p] += prefix_span(p, c.width);
  for (const auto& [p, col] : c.marked) {
    if (p.len == 0) continue;
    Prefix a = p.parent();
    while (!c.marked.count(a)) a = a.parent();
    owned[a] -= prefix_span(p, c.width);
  }
  k = std::max<std::size_t>(k, static_cast<std::size_t>(c.max_color()));
  WeightVector out(k, Weight(0));
  for (const auto& [p, col] : c.marked) out[col - 1] += owned[p];
  return out;
}

TransactionSequence sequence_from_coloring(const TrieColoring& c) {
  TransactionSequence s;
  for (const auto& n : conflicts(c).nodes)
    s.push_back(Transaction{n.color, n.parent_color, c.width - n.node.len});
  return s;
}

LeafColoring normalize(LeafColoring lc) {
  std::vector<LeafRun> out;
  Weight total = 0;
  for (auto& r : lc.runs) {
    if (r.length <= 0) throw Error(ErrorCode::NonPositiveWeight, "empty leaf run");
    if (r.color < 1) throw Error(ErrorCode::BadTargetIds, "color " + std::to_string(r.color));
    total += r.length;
    if (!out.empty() && out.back().color == r.color)
      out.back().length += r.length;
    else
      out.push_back(std::move(r));
  }
  if (total != pow2(lc.width))
    throw Error(ErrorCode::WidthMismatch, "leaf runs cover " + to_string(total) +
                                              " leaves, width " + std::to_string(lc.width));
  lc.runs = std::move(out);
  return lc;
}

bool is_segmented(const LeafColoring& lc) {
  std::set<int> seen;
  int prev = 0;
  for (const auto& r : lc.runs) {
    if (r.color == prev) continue;
    if (!seen.insert(r.color).second) return false;
    prev = r.color;
  }
  return true;
}

LeafColoring segments_in_order(const Partition& p, const std::vector<int>& order) {
  std::vector<int> sorted = order;
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t i = 0; i < sorted.size(); ++i)
    if (sorted[i] != static_cast<int>(i + 1) || sorted.size() != p.k())
      throw Error(ErrorCode::BadTargetIds, "order is not a permutation of 1..k");
  if (sorted.size() != p.k()) throw Error(ErrorCode::BadTargetIds, "order length differs from k");
  LeafColoring lc;
  lc.width = p.width;
  for (int id : order) lc.runs.push_back({id, p.weights[id - 1]});
  return normalize(std::move(lc));
}

LeafColoring leaf_runs(const TrieColoring& c) {
  check_coloring(c);
  struct Node {
    Weight start, end;
    unsigned len;
    int color;
  };
  std::vector<Node> nodes;
  for (const auto& [p, col] : c.marked) {
    Weight s = prefix_start(p, c.width);
    nodes.push_back({s, s + prefix_span(p, c.width), p.len, col});
  }
  std::sort(nodes.begin(), nodes.end(), [](const Node& a, const Node& b) {
    return a.start != b.start ? a.start < b.start : a.len < b.len;
  });
  LeafColoring lc;
  lc.width = c.width;
  auto emit = [&](int color, const Weight& len) {
    if (len > 0) lc.runs.push_back({color, len});
  };
  std::vector<std::pair<Weight, int>> stack;  // (end, color)
  Weight pos = 0;
  for (const auto& n : nodes) {
    while (!stack.empty() && stack.back().first <= n.start) {
      emit(stack.back().second, stack.back().first - pos);
      pos = stack.back().first;
      stack.pop_back();
    }
    if (!stack.empty()) emit(stack.back().second, n.start - pos);
    pos = n.start;
    stack.push_back({n.end, n.color});
  }
  while (!stack.empty()) {
    emit(stack.back().second, stack.back().first - pos);
    pos = stack.back().first;
    stack.pop_back();
  }
  return normalize(std::move(lc));
}

std::vector<int> expand_leaves(const LeafColoring& lc) {
  if (lc.width > kExplicitWidthCap)
    throw Error(ErrorCode::WidthCapExceeded, "width " + std::to_string(lc.width));
  std::vector<int> leaves;
  leaves.reserve(std::size_t{1} << lc.width);
  for (const auto& r : lc.runs) leaves.insert(leaves.end(), r.length.convert_to<std::size_t>(), r.color);
  if (leaves.size() != (std::size_t{1} << lc.width))
    throw Error(ErrorCode::WidthMismatch, "leaf runs do not cover the trie");
  return leaves;
}

WeightVector parse_partition(std::string_view text) {
  WeightVector out;
  std::size_t pos = 0;
  while (true) {
    std::size_t comma = text.find(',', pos);
    out.push_back(parse_weight(text.substr(pos, comma == std::string_view::npos ? text.npos
                                                                                 : comma - pos)));
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return out;
}

std::string format_partition(const WeightVector& p) {
  std::string s;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (i) s += ',';
    s += to_string(p[i]);
  }
  return s;
}

std::string format_prefix(const Prefix& p, unsigned width) {
  std::string s;
  for (unsigned i = 0; i < p.len; ++i) s += ((p.bits >> (p.len - 1 - i)) & 1) ? '1' : '0';
  s.append(width - p.len, '*');
  return s;
}

std::string format_table(const TcamTable& t) {
  std::string s;
  for (const auto& r : t.rules) s += format_prefix(r.prefix, t.width) + " -> " + std::to_string(r.target) + "\n";
  return s;
}

namespace {

std::vector<std::string> content_lines(std::string_view text) {
  std::vector<std::string> lines;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    auto b = line.find_first_not_of(" \t\r");
    if (b == std::string::npos || line[b] == '#') continue;
    auto e = line.find_last_not_of(" \t\r");
    lines.push_back(line.substr(b, e - b + 1));
  }
  return lines;
}

int parse_id(const std::string& s) {
  Weight w = parse_weight(s);
  if (w < 0 || w > 1'000'000'000) throw Error(ErrorCode::BadTargetIds, "target id " + s);
  return w.convert_to<int>();
}

}  // namespace

TcamTable parse_table(std::string_view text) {
  TcamTable t;
  bool have_width = false;
  for (const auto& line : content_lines(text)) {
    auto arrow = line.find("->");
    if (arrow == std::string::npos) throw Error(ErrorCode::ParseError, "rule without '->': " + line);
    std::string pat = line.substr(0, arrow);
    pat.erase(pat.find_last_not_of(" \t") + 1);
    Rule r;
    r.target = parse_id(line.substr(arrow + 2));
    if (r.target < 1) throw Error(ErrorCode::BadTargetIds, "rule target 0: " + line);
    bool in_wild = false;
    for (char ch : pat) {
      if (ch == '*') {
        in_wild = true;
      } else if ((ch == '0' || ch == '1') && !in_wild) {
        if (r.prefix.len >= kMaxColoringWidth) throw Error(ErrorCode::WidthCapExceeded, line);
        r.prefix = r.prefix.child(ch == '1');
      } else {
        throw Error(ErrorCode::ParseError, "not a prefix pattern: " + line);
      }
    }
    if (pat.size() > kMaxColoringWidth) throw Error(ErrorCode::WidthCapExceeded, line);
    if (have_width && pat.size() != t.width)
      throw Error(ErrorCode::WidthMismatch, "pattern width differs: " + line);
    t.width = static_cast<unsigned>(pat.size());
    have_width = true;
    t.rules.push_back(r);
  }
  return t;
}

std::string format_transaction(const Transaction& t) {
  return std::to_string(t.sender) + " -(" + to_string(t.size()) + ")-> " + std::to_string(t.receiver);
}

std::string format_sequence(const TransactionSequence& s) {
  std::string out;
  for (const auto& t : s) out += format_transaction(t) + "\n";
  return out;
}

TransactionSequence parse_sequence(std::string_view text) {
  static const std::regex re(R"(^(\d+)\s*-\(\s*(\d+)\s*\)->\s*(\d+)$)");
  TransactionSequence s;
  for (const auto& line : content_lines(text)) {
    std::smatch m;
    if (!std::regex_match(line, m, re)) throw Error(ErrorCode::ParseError, "not a transaction: " + line);
    s.push_back(make_transaction(parse_id(m[1]), parse_id(m[3]), parse_weight(m[2].str())));
  }
  return s;
}

}  // namespace tcamsplit
