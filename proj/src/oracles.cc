#include "tcamsplit/oracles.h"

#include <algorithm>
#include <bit>
#include <limits>
#include <map>
#include <string>
#include <unordered_map>

namespace tcamsplit {

namespace {

using State = std::basic_string<std::uint16_t>;

struct StateHash {
  std::size_t operator()(const State& s) const {
    std::size_t h = 1469598103934665603ull;
    for (auto x : s) h = (h ^ x) * 1099511628211ull;
    return h;
  }
};

// Hash-map states cost roughly 100 bytes each.
constexpr std::size_t kMaxStates = 10'000'000;

// Minimum number of signed powers of two summing to x.
unsigned naf_weight(std::uint32_t x) {
  return static_cast<unsigned>(std::popcount((3ull * x ^ x) >> 1));
}

// A transaction lowers sum(naf) by at most 2, and a zeroing one lowers
// popcount(total) by at most 1 and sum(naf) by at most 1; it also zeroes at
// most one target.
unsigned lower_bound(const State& s) {
  unsigned nz = 0, phi = 0;
  std::uint32_t total = 0;
  for (auto w : s) {
    nz += w != 0;
    phi += naf_weight(w);
    total += w;
  }
  phi += static_cast<unsigned>(std::popcount(total));
  return std::max(nz, (phi + 1) / 2);
}

State initial_state(const Partition& p, unsigned max_sum) {
  if (max_sum > 65535 || pow2(p.width) > max_sum)
    throw Error(ErrorCode::StateSpaceTooLarge,
                "sum 2^" + std::to_string(p.width) + " above oracle guard " + std::to_string(max_sum));
  State s;
  for (const auto& w : p.weights) s.push_back(w.convert_to<std::uint16_t>());
  return s;
}

template <class F>
void for_each_labeled_move(const State& s, F&& f) {
  const int k = static_cast<int>(s.size());
  for (int i = 0; i < k; ++i)
    for (unsigned d = 0; (1u << d) <= s[i]; ++d)
      for (int j = 0; j <= k; ++j)
        if (j != i + 1) f(Transaction{i + 1, j, d});
}

State apply_labeled(State s, const Transaction& t) {
  s[t.sender - 1] = static_cast<std::uint16_t>(s[t.sender - 1] - (1u << t.exponent));
  if (t.receiver) s[t.receiver - 1] = static_cast<std::uint16_t>(s[t.receiver - 1] + (1u << t.exponent));
  return s;
}

bool applicable(const State& s, const Transaction& t) { return s[t.sender - 1] >= (1u << t.exponent); }

bool is_zero(const State& s) {
  return std::all_of(s.begin(), s.end(), [](auto w) { return w == 0; });
}

auto tx_key(const Transaction& t) { return std::make_tuple(t.exponent, t.sender, t.receiver); }

bool seq_less(const TransactionSequence& a, const TransactionSequence& b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end(),
                                      [](const Transaction& x, const Transaction& y) { return tx_key(x) < tx_key(y); });
}

}  // namespace

std::size_t brute_lambda(const Partition& p, unsigned max_sum) {
  State start = initial_state(p, max_sum);
  std::sort(start.begin(), start.end());
  std::unordered_map<State, unsigned, StateHash> best;
  std::vector<std::vector<State>> open(1);
  auto push = [&](State s, unsigned g) {
    auto it = best.find(s);
    if (it != best.end() && it->second <= g) return;
    if (best.size() > kMaxStates) throw Error(ErrorCode::StateSpaceTooLarge, "search exceeded state budget");
    unsigned f = g + lower_bound(s);
    best[s] = g;
    if (open.size() <= f) open.resize(f + 1);
    open[f].push_back(std::move(s));
  };
  push(start, 0);
  for (std::size_t f = 0; f < open.size(); ++f) {
    while (!open[f].empty()) {
      State s = std::move(open[f].back());
      open[f].pop_back();
      const unsigned g = best[s];
      if (g + lower_bound(s) != f) continue;  // stale entry
      if (is_zero(s)) return g;
      const std::size_t k = s.size();
      for (std::size_t i = 0; i < k; ++i) {
        if (s[i] == 0 || (i > 0 && s[i] == s[i - 1])) continue;
        for (unsigned m = 1; m <= s[i]; m <<= 1) {
          // Receivers: the sink (j == k), then one target per distinct value.
          std::basic_string<std::uint16_t> values;
          for (std::size_t j = 0; j <= k; ++j) {
            if (j < k) {
              if (j == i || values.find(s[j]) != values.npos) continue;
              values.push_back(s[j]);
            }
            State n = s;
            n[i] = static_cast<std::uint16_t>(n[i] - m);
            if (j < k) n[j] = static_cast<std::uint16_t>(n[j] + m);
            std::sort(n.begin(), n.end());
            push(std::move(n), g + 1);
          }
        }
      }
    }
  }
  throw Error(ErrorCode::StateSpaceTooLarge, "search ended without reaching zero");
}

std::vector<TransactionSequence> enumerate_shortest_sequences(const Partition& p, unsigned max_sum) {
  const State start = initial_state(p, std::min(max_sum, kBruteLambdaMaxSum));
  if (pow2(p.width) > max_sum)
    throw Error(ErrorCode::StateSpaceTooLarge, "sum above enumeration guard " + std::to_string(max_sum));
  const unsigned lam = static_cast<unsigned>(brute_lambda(p, kBruteLambdaMaxSum));

  // solvable[state + depth]: can the state be zeroed in exactly `depth` more steps?
  std::unordered_map<State, bool, StateHash> memo;
  auto solvable = [&](auto&& self, const State& s, unsigned r) -> bool {
    if (r == 0) return is_zero(s);
    if (lower_bound(s) > r) return false;
    State key = s;
    key.push_back(static_cast<std::uint16_t>(r));
    if (auto it = memo.find(key); it != memo.end()) return it->second;
    if (memo.size() > kMaxStates) throw Error(ErrorCode::StateSpaceTooLarge, "enumeration memo overflow");
    bool ok = false;
    for_each_labeled_move(s, [&](const Transaction& t) {
      if (!ok) ok = self(self, apply_labeled(s, t), r - 1);
    });
    memo[key] = ok;
    return ok;
  };

  std::map<TransactionSequence, TransactionSequence> found;  // sorted multiset -> best ordering
  TransactionSequence seq;
  std::vector<State> trail{start};
  auto dfs = [&](auto&& self, unsigned r) -> void {
    const State s = trail.back();
    if (r == 0) {
      TransactionSequence key = seq;
      std::sort(key.begin(), key.end());
      auto it = found.find(key);
      if (it == found.end())
        found.emplace(std::move(key), seq);
      else if (seq_less(seq, it->second))
        it->second = seq;
      return;
    }
    for_each_labeled_move(s, [&](const Transaction& t) {
      if (!seq.empty() && tx_key(t) < tx_key(seq.back())) {
        // Skip when swapping with the previous step would also be valid:
        // the swapped ordering is smaller and is explored on its own.
        const State before = trail[trail.size() - 2];
        if (applicable(before, t) && applicable(apply_labeled(before, t), seq.back())) return;
      }
      State n = apply_labeled(s, t);
      if (!solvable(solvable, n, r - 1)) return;
      seq.push_back(t);
      trail.push_back(std::move(n));
      self(self, r - 1);
      trail.pop_back();
      seq.pop_back();
    });
  };
  dfs(dfs, lam);

  std::vector<TransactionSequence> out;
  for (auto& [key, s] : found) out.push_back(std::move(s));
  std::sort(out.begin(), out.end(), seq_less);
  return out;
}

std::size_t dp_min_conflicts(const LeafColoring& input) {
  const LeafColoring lc = normalize(input);
  if (lc.width > kDpMaxWidth)
    throw Error(ErrorCode::StateSpaceTooLarge, "width " + std::to_string(lc.width) + " above DP guard");
  std::vector<int> palette;
  for (const auto& r : lc.runs) palette.push_back(r.color);
  std::sort(palette.begin(), palette.end());
  palette.erase(std::unique(palette.begin(), palette.end()), palette.end());
  if (palette.size() > kDpMaxColors)
    throw Error(ErrorCode::StateSpaceTooLarge, std::to_string(palette.size()) + " colors above DP guard");
  const std::size_t C = palette.size();
  constexpr std::size_t kInf = std::numeric_limits<std::size_t>::max() / 4;

  const std::vector<int> leaves = expand_leaves(lc);
  std::vector<std::size_t> cost(leaves.size() * C, kInf);
  for (std::size_t x = 0; x < leaves.size(); ++x) {
    auto ci = std::lower_bound(palette.begin(), palette.end(), leaves[x]) - palette.begin();
    cost[x * C + static_cast<std::size_t>(ci)] = 0;
  }
  for (std::size_t n = leaves.size(); n > 1; n /= 2) {
    std::vector<std::size_t> up((n / 2) * C, 0);
    for (std::size_t u = 0; u < n; ++u) {
      const std::size_t* cu = &cost[u * C];
      for (std::size_t c = 0; c < C; ++c) {
        std::size_t other = kInf;
        for (std::size_t c2 = 0; c2 < C; ++c2)
          if (c2 != c) other = std::min(other, cu[c2] + 1);
        up[(u / 2) * C + c] += std::min(cu[c], other);
      }
    }
    cost = std::move(up);
  }
  return *std::min_element(cost.begin(), cost.end()) + 1;
}

LambdaTable::LambdaTable(unsigned max_sum) : max_sum_(max_sum), stride_(max_sum + 1) {
  if (max_sum > kLambdaTableMaxSum)
    throw Error(ErrorCode::StateSpaceTooLarge, "table sum " + std::to_string(max_sum) + " above guard");
  const unsigned N = max_sum;
  p_.assign(stride_ * stride_, 0);
  for (unsigned m = 0; m <= N; ++m) p_[m] = 1;
  for (unsigned n = 1; n <= N; ++n)
    for (unsigned m = 1; m <= N; ++m)
      p_[n * stride_ + m] = p_[n * stride_ + m - 1] + (m <= n ? p_[(n - m) * stride_ + m] : 0);
  offset_.assign(N + 2, 0);
  for (unsigned n = 0; n <= N; ++n) offset_[n + 1] = offset_[n] + partitions_at_most(n, n);
  run_rank_.assign(static_cast<std::size_t>(stride_) * stride_ * stride_, 0);
  for (unsigned rem = 0; rem <= N; ++rem)
    for (unsigned v = 1; v <= rem; ++v) {
      std::uint64_t acc = 0;
      for (unsigned c = 1; c * v <= rem; ++c) {
        acc += partitions_at_most(rem - (c - 1) * v, v - 1);
        run_rank_[(static_cast<std::size_t>(rem) * stride_ + v) * stride_ + c] = static_cast<std::uint32_t>(acc);
      }
    }

  dist_.assign(offset_[N + 1], 0xff);
  std::vector<std::uint64_t> seen((dist_.size() + 63) / 64, 0);
  dist_[0] = 0;
  seen[0] = 1;
  std::vector<std::uint32_t> frontier{0}, next;
  Run runs[kLambdaTableMaxSum + 1];
  std::uint64_t prefix_rank[kLambdaTableMaxSum + 2];
  unsigned prefix_rem[kLambdaTableMaxSum + 2];
  for (std::uint8_t level = 0; !frontier.empty(); ++level) {
    next.clear();
    for (std::uint32_t idx : frontier) {
      unsigned total = 0;
      const std::size_t n = unrank(idx, runs, total);
      prefix_rank[0] = 0;
      prefix_rem[0] = total;
      for (std::size_t i = 0; i < n; ++i) {
        prefix_rank[i + 1] = prefix_rank[i] + run_rank(prefix_rem[i], runs[i].value, runs[i].count);
        prefix_rem[i + 1] = prefix_rem[i] - runs[i].value * runs[i].count;
      }
      // Visits the multiset with count changes `mods` (value, delta), sorted
      // by descending value. Runs above the largest touched value keep their
      // rank terms when the total is unchanged.
      auto visit = [&](std::pair<unsigned, int>* mods, std::size_t nm, unsigned new_total) {
        std::size_t i = 0;
        std::uint64_t r;
        unsigned rem;
        if (new_total == total) {
          while (i < n && runs[i].value > mods[0].first) ++i;
          r = prefix_rank[i];
          rem = prefix_rem[i];
        } else {
          r = 0;
          rem = new_total;
        }
        std::size_t j = 0;
        while (i < n || j < nm) {
          unsigned v;
          int c = 0;
          if (j >= nm || (i < n && runs[i].value > mods[j].first)) {
            v = runs[i].value;
            c = static_cast<int>(runs[i++].count);
          } else {
            v = mods[j].first;
            if (i < n && runs[i].value == v) c = static_cast<int>(runs[i++].count);
            while (j < nm && mods[j].first == v) c += mods[j++].second;
          }
          if (c > 0) {
            r += run_rank(rem, v, static_cast<unsigned>(c));
            rem -= v * static_cast<unsigned>(c);
          }
        }
        const std::uint64_t q = offset_[new_total] + r;
        if (!((seen[q >> 6] >> (q & 63)) & 1)) {
          seen[q >> 6] |= std::uint64_t{1} << (q & 63);
          dist_[q] = static_cast<std::uint8_t>(level + 1);
          next.push_back(static_cast<std::uint32_t>(q));
        }
      };
      std::pair<unsigned, int> mods[4];
      auto sorted_visit = [&](std::size_t nm, unsigned new_total) {
        for (std::size_t i = 1; i < nm; ++i)  // at most four entries
          for (std::size_t j = i; j > 0 && mods[j - 1].first < mods[j].first; --j) std::swap(mods[j - 1], mods[j]);
        visit(mods, nm, new_total);
      };
      // Predecessors: undo a transfer (transfers are reversible) or undo a
      // send to the sink by growing one part (or a new part).
      for (std::size_t a = 0; a < n; ++a) {
        const unsigned va = runs[a].value;
        for (unsigned m = 1; m <= va; m <<= 1) {
          const unsigned lo = va - m;
          std::size_t nm = 0;
          mods[nm++] = {va, -1};
          if (lo) mods[nm++] = {lo, 1};
          mods[nm++] = {m, 1};
          sorted_visit(nm, total);
          for (std::size_t b = 0; b < n; ++b) {
            if (b == a && runs[a].count < 2) continue;
            const unsigned vb = runs[b].value;
            nm = 0;
            mods[nm++] = {va, -1};
            if (lo) mods[nm++] = {lo, 1};
            mods[nm++] = {vb, -1};
            mods[nm++] = {vb + m, 1};
            sorted_visit(nm, total);
          }
        }
      }
      for (unsigned m = 1; total + m <= N; m <<= 1) {
        mods[0] = {m, 1};
        visit(mods, 1, total + m);
        for (std::size_t b = 0; b < n; ++b) {
          mods[0] = {runs[b].value + m, 1};
          mods[1] = {runs[b].value, -1};
          visit(mods, 2, total + m);
        }
      }
    }
    frontier.swap(next);
  }
}

std::uint64_t LambdaTable::rank(const Run* runs, std::size_t n, unsigned total) const {
  std::uint64_t r = offset_[total];
  unsigned rem = total;
  for (std::size_t i = 0; i < n; ++i) {
    r += run_rank(rem, runs[i].value, runs[i].count);
    rem -= runs[i].value * runs[i].count;
  }
  return r;
}

std::size_t LambdaTable::unrank(std::uint64_t index, Run* runs, unsigned& total) const {
  total = static_cast<unsigned>(std::upper_bound(offset_.begin(), offset_.end(), index) - offset_.begin()) - 1;
  std::uint64_t r = index - offset_[total];
  unsigned rem = total, bound = total;
  std::size_t n = 0;
  while (rem > 0) {
    unsigned a = 1;
    while (a < std::min(bound, rem) && partitions_at_most(rem, a) <= r) ++a;
    r -= partitions_at_most(rem, a - 1);
    if (n > 0 && runs[n - 1].value == a)
      ++runs[n - 1].count;
    else
      runs[n++] = {a, 1};
    rem -= a;
    bound = a;
  }
  return n;
}

int LambdaTable::distance(const std::vector<unsigned>& parts) const {
  std::vector<unsigned> sorted;
  unsigned total = 0;
  for (unsigned x : parts)
    if (x) {
      sorted.push_back(x);
      total += x;
    }
  if (total > max_sum_) throw Error(ErrorCode::OutOfRange, "multiset sum above table range");
  std::sort(sorted.rbegin(), sorted.rend());
  std::vector<Run> runs;
  for (unsigned x : sorted) {
    if (!runs.empty() && runs.back().value == x)
      ++runs.back().count;
    else
      runs.push_back({x, 1});
  }
  std::uint8_t d = dist_[rank(runs.data(), runs.size(), total)];
  return d == 0xff ? -1 : d;
}

}  // namespace tcamsplit
