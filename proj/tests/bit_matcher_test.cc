#include "doctest.h"
#include "test_util.h"
#include "tcamsplit/bit_matcher.h"
#include "tcamsplit/structure_analysis.h"

using namespace tcamsplit;
using namespace tcamsplit::testing;

namespace {

std::vector<std::tuple<int, unsigned, int>> as_multiset(const TransactionSequence& s) {
  std::vector<std::tuple<int, unsigned, int>> m;
  for (const auto& t : s) m.emplace_back(t.sender, t.exponent, t.receiver);
  std::sort(m.begin(), m.end());
  return m;
}

}  // namespace

TEST_CASE("bit matcher goldens") {
  CHECK(bit_matcher_sequence(P("13,13,6")) ==
        TransactionSequence{T(1, 2, 1), T(3, 2, 2), T(3, 1, 4), T(1, 2, 16), T(2, 0, 32)});
  CHECK(bit_matcher_sequence(P("12,49,195")) ==
        TransactionSequence{T(2, 3, 1), T(3, 1, 4), T(1, 2, 16), T(2, 3, 64), T(3, 0, 256)});
  CHECK(bit_matcher_sequence(P("16")) == TransactionSequence{T(1, 0, 16)});
  CHECK(bit_matcher_sequence(P("1")) == TransactionSequence{T(1, 0, 1)});
}

TEST_CASE("lambda") {
  CHECK(lambda(P("13,13,6")) == 5);
  CHECK(lambda(P("5,3")) == 3);
  CHECK(lambda(P("64")) == 1);
  CHECK(lambda(P("1,1")) == 2);
}

TEST_CASE("realize_sequence") {
  auto s = bit_matcher_sequence(P("13,13,6"));
  auto c = realize_sequence(s, 5);
  CHECK(conflicts(c).count == 5);
  CHECK(induced_partition(c) == P("13,13,6").weights);
  CHECK(as_multiset(sequence_from_coloring(c)) == as_multiset(s));

  auto root = realize_sequence({T(1, 0, 8)}, 3);
  CHECK(root.marked.size() == 1);
  CHECK(root.color_of(Prefix{5, 3}) == 1);

  auto c2 = realize_sequence(bit_matcher_sequence(P("12,49,195")), 8);
  CHECK(conflicts(c2).count == 5);
  CHECK(induced_partition(c2) == P("12,49,195").weights);

  CHECK_THROWS_AS(realize_sequence({T(2, 1, 2), T(1, 2, 1), T(1, 0, 4)}, 2), Error);
  CHECK_THROWS_AS(realize_sequence({T(1, 0, 2), T(2, 0, 2)}, 2), Error);
  CHECK_THROWS_AS(realize_sequence({T(1, 0, 8)}, 2), Error);
}

TEST_CASE("fragmentation witness for [13,13,6]") {
  auto c = realize_sequence(bit_matcher_sequence(P("13,13,6")), 5);
  CHECK(fragmentation(c).max_segments >= 2);
}

TEST_CASE("synthesize_table") {
  auto t = synthesize_table(P("13,13,6"));
  CHECK(t.rules.size() == 5);
  CHECK(induced_partition(coloring_from_table(t)) == P("13,13,6").weights);
}

TEST_CASE("property: divisibility after each level" * doctest::description("random partitions, W <= 12")) {
  std::mt19937_64 rng(7);
  for (int iter = 0; iter < 400; ++iter) {
    unsigned w = 1 + static_cast<unsigned>(rng() % 12);
    std::size_t k = 1 + rng() % std::min<std::size_t>(12, std::size_t{1} << w);
    Partition p = random_partition(rng, w, k);
    auto s = bit_matcher_sequence(p);
    WeightVector cur = p.weights;
    for (std::size_t i = 0; i < s.size(); ++i) {
      cur = apply_transaction(cur, s[i]);
      bool level_done = i + 1 == s.size() || s[i + 1].exponent != s[i].exponent;
      if (!level_done) continue;
      Weight mod = pow2(s[i].exponent + 1);
      for (const auto& x : cur) REQUIRE(x % mod == 0);
    }
    for (const auto& x : cur) REQUIRE(x == 0);
  }
}

TEST_CASE("property: realization soundness" * doctest::description("random partitions, W <= 12")) {
  std::mt19937_64 rng(11);
  for (int iter = 0; iter < 400; ++iter) {
    unsigned w = static_cast<unsigned>(rng() % 13);
    std::size_t k = 1 + rng() % std::min<std::size_t>(16, std::size_t{1} << w);
    Partition p = random_partition(rng, w, k);
    auto s = bit_matcher_sequence(p);
    auto c = realize_sequence(s, w);
    REQUIRE(conflicts(c).count == lambda(p));
    REQUIRE(induced_partition(c, k) == p.weights);
    REQUIRE(as_multiset(sequence_from_coloring(c)) == as_multiset(s));
  }
}

TEST_CASE("property: lambda is invariant under relabeling") {
  std::mt19937_64 rng(13);
  for (int iter = 0; iter < 200; ++iter) {
    unsigned w = 2 + static_cast<unsigned>(rng() % 14);
    Partition p = random_partition(rng, w, 2 + rng() % 8);
    Partition q = p;
    std::shuffle(q.weights.begin(), q.weights.end(), rng);
    REQUIRE(lambda(p) == lambda(q));
  }
}

TEST_CASE("wide partitions stay exact") {
  WeightVector w{pow2(90) - 3, Weight(1), Weight(2)};
  w.push_back(pow2(100) - w[0] - 3);
  Partition p = validate_partition(w);
  CHECK(p.width == 100);
  auto s = bit_matcher_sequence(p);
  CHECK(zeroes(p.weights, s));
}
