#include <chrono>
#include <deque>
#include <map>

#include "doctest.h"
#include "test_util.h"
#include "tcamsplit/bit_matcher.h"
#include "tcamsplit/harness.h"
#include "tcamsplit/oracles.h"
#include "tcamsplit/segmented_coloring.h"

using namespace tcamsplit;
using namespace tcamsplit::testing;

namespace {

// Plain BFS over sorted weight vectors with k fixed slots; the slow reference.
int small_bfs(std::vector<unsigned> start) {
  std::sort(start.begin(), start.end());
  std::map<std::vector<unsigned>, int> dist{{start, 0}};
  std::deque<std::vector<unsigned>> q{start};
  while (!q.empty()) {
    auto s = q.front();
    q.pop_front();
    const int d = dist[s];
    if (std::all_of(s.begin(), s.end(), [](unsigned x) { return x == 0; })) return d;
    for (std::size_t i = 0; i < s.size(); ++i)
      for (unsigned m = 1; m <= s[i]; m *= 2)
        for (std::size_t j = 0; j <= s.size(); ++j) {
          if (j == i + 1) continue;
          auto t = s;
          t[i] -= m;
          if (j > 0) t[j - 1] += m;
          std::sort(t.begin(), t.end());
          if (dist.emplace(t, d + 1).second) q.push_back(t);
        }
  }
  return -1;
}

Partition from_parts(const std::vector<std::uint64_t>& parts) {
  WeightVector w(parts.begin(), parts.end());
  return validate_partition(w);
}

}  // namespace

TEST_CASE("brute_lambda") {
  CHECK(brute_lambda(P("13,13,6")) == 5);
  CHECK(brute_lambda(P("5,3")) == 3);
  CHECK(brute_lambda(P("64")) == 1);
  CHECK(brute_lambda(P("12,49,195")) == 5);
  CHECK_THROWS_WITH_AS(brute_lambda(P("1000,24")), doctest::Contains("StateSpaceTooLarge"), Error);
  CHECK(brute_lambda(P("1000,24"), 1024) == lambda(P("1000,24")));
}

TEST_CASE("brute_lambda matches a plain BFS" * doctest::description("sum <= 16, every partition")) {
  for (unsigned w = 0; w <= 4; ++w)
    for (std::size_t k = 1; k <= (std::size_t{1} << w); ++k)
      for (const auto& parts : unordered_partitions(std::uint64_t{1} << w, k)) {
        std::vector<unsigned> v(parts.begin(), parts.end());
        auto p = from_parts(parts);
        INFO(format_partition(p.weights));
        REQUIRE(static_cast<int>(brute_lambda(p)) == small_bfs(v));
      }
}

TEST_CASE("property: bit matcher is optimal" * doctest::description("sum <= 32 with k <= 6, sampled up to 2^9")) {
  for (unsigned w = 0; w <= 5; ++w)
    for (std::size_t k = 1; k <= std::min<std::size_t>(6, std::size_t{1} << w); ++k)
      for (const auto& parts : unordered_partitions(std::uint64_t{1} << w, k)) {
        auto p = from_parts(parts);
        INFO(format_partition(p.weights));
        REQUIRE(brute_lambda(p) == lambda(p));
      }
  std::mt19937_64 rng(501);
  for (int iter = 0; iter < 12; ++iter) {
    unsigned w = 7 + static_cast<unsigned>(iter % 3);
    Partition p = random_partition(rng, w, 2 + rng() % 3);
    INFO(format_partition(p.weights));
    REQUIRE(brute_lambda(p) == lambda(p));
  }
}

TEST_CASE("enumerate_shortest_sequences") {
  auto all = enumerate_shortest_sequences(P("5,3"));
  auto has = [&](const TransactionSequence& s) { return std::find(all.begin(), all.end(), s) != all.end(); };
  CHECK(has({T(2, 1, 1), T(2, 1, 2), T(1, 0, 8)}));
  CHECK(has({T(1, 2, 1), T(2, 1, 4), T(1, 0, 8)}));
  CHECK(enumerate_shortest_sequences(P("8")) == std::vector<TransactionSequence>{{T(1, 0, 8)}});
  CHECK_THROWS_WITH_AS(enumerate_shortest_sequences(P("200,56")), doctest::Contains("StateSpaceTooLarge"), Error);
}

TEST_CASE("property: enumerated sequences are shortest and valid") {
  std::mt19937_64 rng(503);
  for (int iter = 0; iter < 40; ++iter) {
    unsigned w = 1 + static_cast<unsigned>(rng() % 6);
    Partition p = random_partition(rng, w, 1 + rng() % 4);
    auto lam = lambda(p);
    auto all = enumerate_shortest_sequences(p);
    REQUIRE_FALSE(all.empty());
    std::set<std::multiset<Transaction>> seen;
    for (const auto& s : all) {
      REQUIRE(s.size() == lam);
      REQUIRE(zeroes(p.weights, s));
      REQUIRE(seen.insert({s.begin(), s.end()}).second);
    }
    const auto bm = bit_matcher_sequence(p);
    REQUIRE(seen.count({bm.begin(), bm.end()}) == 1);
  }
}

TEST_CASE("dp_min_conflicts") {
  CHECK(dp_min_conflicts(segments_in_order(P("13,13,6"), {1, 2, 3})) == 6);
  CHECK(dp_min_conflicts(LeafColoring{2, {{1, 1}, {2, 2}, {4, 1}}}) == 3);
  CHECK(dp_min_conflicts(LeafColoring{6, {{3, 64}}}) == 1);
  CHECK_THROWS_WITH_AS(dp_min_conflicts(LeafColoring{13, {{1, 8192}}}), doctest::Contains("StateSpaceTooLarge"),
                       Error);
}

TEST_CASE("LambdaTable") {
  LambdaTable t(32);
  CHECK(t.states() == 43820);
  CHECK(t.distance({13, 13, 6}) == 5);
  CHECK(t.distance({5, 3}) == 3);
  CHECK(t.distance({0, 3, 5, 0}) == 3);
  CHECK(t.distance({}) == 0);
  CHECK_THROWS_WITH_AS(t.distance({33}), doctest::Contains("OutOfRange"), Error);

  // never above the fixed-slot optimum; equal to the bit matcher on powers of two
  for (unsigned w = 0; w <= 5; ++w)
    for (std::size_t k = 1; k <= (std::size_t{1} << w); ++k)
      for (const auto& parts : unordered_partitions(std::uint64_t{1} << w, k)) {
        std::vector<unsigned> v(parts.begin(), parts.end());
        auto p = from_parts(parts);
        REQUIRE(t.distance(v) == static_cast<int>(lambda(p)));
      }
}

TEST_CASE("LambdaTable agrees with a BFS allowing spare slots" * doctest::description("sum <= 12")) {
  LambdaTable t(12);
  for (std::uint64_t n = 1; n <= 12; ++n)
    for (std::size_t k = 1; k <= n; ++k)
      for (const auto& parts : unordered_partitions(n, k)) {
        std::vector<unsigned> v(parts.begin(), parts.end());
        auto padded = v;
        padded.resize(n, 0);  // n slots is never a restriction
        REQUIRE(t.distance(v) == small_bfs(padded));
      }
}
