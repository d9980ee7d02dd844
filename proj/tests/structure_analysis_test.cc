#include <algorithm>
#include <map>

#include "doctest.h"
#include "test_util.h"
#include "tcamsplit/bit_matcher.h"
#include "tcamsplit/forced_constructions.h"
#include "tcamsplit/segmented_coloring.h"
#include "tcamsplit/structure_analysis.h"

using namespace tcamsplit;
using namespace tcamsplit::testing;

namespace {

using Edges = std::set<std::pair<int, int>>;

Prefix pre(const char* bits) {
  Prefix p;
  for (const char* c = bits; *c; ++c) p = p.child(*c == '1');
  return p;
}

std::multiset<Transaction> as_multiset(const TransactionSequence& s) { return {s.begin(), s.end()}; }

}  // namespace

TEST_CASE("transactions_graph") {
  auto p = P("13,13,6");
  auto g = transactions_graph(bit_matcher_sequence(p), p);
  CHECK(g.cutoff == 1);
  CHECK(g.contributing == TransactionSequence{T(1, 2, 1), T(3, 2, 2)});
  CHECK(g.edges == Edges{{1, 2}, {2, 3}});
  CHECK_FALSE(g.is_clique());

  auto whole = P("8");
  auto g1 = transactions_graph({T(1, 0, 8)}, whole);
  CHECK(g1.edges.empty());

  auto q = P("12,49,195");
  auto g2 = transactions_graph(bit_matcher_sequence(q), q);
  CHECK(g2.edges == Edges{{2, 3}, {1, 3}});
  CHECK(g2.cutoff == 3);  // literal reading of the cutoff; see README

  CHECK_THROWS_WITH_AS(transactions_graph({T(1, 0, 4), T(2, 0, 4)}, P("4,4")),
                       doctest::Contains("MultipleZeroTargets"), Error);
  CHECK_THROWS_AS(transactions_graph({T(1, 0, 8)}, P("5,3")), Error);
}

TEST_CASE("transactions_graph cutoff of -1") {
  // the size-1 step already zeroes target 1
  auto p = P("1,7");
  auto g = transactions_graph({T(1, 2, 1), T(2, 0, 8)}, p);
  CHECK(g.cutoff == -1);
  CHECK(g.edges.empty());
}

TEST_CASE("property: transactions_graph ignores valid reorderings") {
  std::mt19937_64 rng(301);
  int compared = 0;
  for (int iter = 0; iter < 200; ++iter) {
    unsigned w = 2 + static_cast<unsigned>(rng() % 8);
    Partition p = random_partition(rng, w, 2 + rng() % 5);
    auto s = bit_matcher_sequence(p);
    auto base = transactions_graph(s, p);
    for (int t = 0; t < 10; ++t) {
      auto r = s;
      std::shuffle(r.begin(), r.end(), rng);
      bool ok = true;
      try {
        ok = zeroes(p.weights, r);
      } catch (const Error&) {
        ok = false;
      }
      if (!ok) continue;
      auto g = transactions_graph(r, p);
      REQUIRE(g.edges == base.edges);
      REQUIRE(g.cutoff == base.cutoff);
      ++compared;
    }
  }
  CHECK(compared > 100);
}

TEST_CASE("fragmentation") {
  TcamTable t{3, {{pre("011"), 1}, {pre("01"), 2}, {pre("0"), 3}, {pre(""), 1}}};
  auto f = fragmentation(coloring_from_table(t));
  CHECK(f.segments == std::vector<std::size_t>{1, 1, 1});
  CHECK(f.max_segments == 1);

  auto p = P("13,13,6");
  auto seg = fragmentation(color_segments_full(segments_in_order(p, {1, 2, 3})));
  CHECK(seg.segments == std::vector<std::size_t>{1, 1, 1});
  CHECK(fragmentation(realize_sequence(bit_matcher_sequence(p), 5)).max_segments >= 2);

  LeafColoring lc{2, {{1, 1}, {2, 1}, {1, 1}, {3, 1}}};
  auto g = fragmentation(lc);
  CHECK(g.segments == std::vector<std::size_t>{2, 1, 1});
  CHECK(g.max_segments == 2);
}

TEST_CASE("neighbor_ordered_sequence") {
  TrieColoring two{1, {{pre(""), 2}, {pre("0"), 1}}};
  CHECK(neighbor_ordered_sequence(two) == TransactionSequence{T(1, 2, 1), T(2, 0, 2)});

  auto p = P("13,13,6");
  auto c = color_segments_full(segments_in_order(p, {1, 2, 3}));
  auto plan = neighbor_ordered_plan(c);
  CHECK(plan.size() == 6);
  CHECK(neighbor_predicate_holds(c, plan));
  TransactionSequence s;
  for (const auto& t : plan) s.push_back(t.transaction);
  CHECK(as_multiset(s) == as_multiset(sequence_from_coloring(c)));
  CHECK(zeroes(p.weights, s));

  TrieColoring wasteful{2, {{pre(""), 3}, {pre("00"), 1}, {pre("01"), 2}, {pre("10"), 2}}};
  CHECK_THROWS_WITH_AS(neighbor_ordered_sequence(wasteful), doctest::Contains("NotMinimalColoring"), Error);
}

TEST_CASE("property: neighbor order on segmented optima" * doctest::description("W <= 10")) {
  std::mt19937_64 rng(303);
  for (int iter = 0; iter < 200; ++iter) {
    unsigned w = 1 + static_cast<unsigned>(rng() % 10);
    auto lc = random_segments(rng, w, 1 + rng() % 6);
    auto c = color_segments_full(lc);
    auto plan = neighbor_ordered_plan(c);
    REQUIRE(neighbor_predicate_holds(c, plan));
    TransactionSequence s;
    for (const auto& t : plan) s.push_back(t.transaction);
    REQUIRE(as_multiset(s) == as_multiset(sequence_from_coloring(c)));
  }
}

TEST_CASE("property: neighbor order on arbitrary optimal colorings" * doctest::description("W <= 8")) {
  std::mt19937_64 rng(305);
  for (int iter = 0; iter < 200; ++iter) {
    unsigned w = 1 + static_cast<unsigned>(rng() % 8);
    auto c = ortc(random_leaves(rng, w, 2 + static_cast<int>(rng() % 4), 1 + rng() % 8));
    auto plan = neighbor_ordered_plan(c);
    REQUIRE(neighbor_predicate_holds(c, plan));
  }
}

TEST_CASE("property: segmented optima have at most k-1 edges") {
  std::mt19937_64 rng(307);
  for (int iter = 0; iter < 300; ++iter) {
    unsigned w = 1 + static_cast<unsigned>(rng() % 12);
    std::size_t k = 1 + rng() % 7;
    Partition p = random_partition(rng, w, k);
    k = p.k();
    auto c = color_segments_full(segments_in_order(p, random_order(rng, k)));
    auto g = transactions_graph(sequence_from_coloring(c), p);
    REQUIRE(g.edges.size() + 1 <= std::max<std::size_t>(k, 1));
  }
}

TEST_CASE("clique witness forces fragmentation") {
  auto p = clique_partition(3, P("1,1,2"));
  auto c = realize_sequence(bit_matcher_sequence(p), p.width);
  auto g = transactions_graph(sequence_from_coloring(c), p);
  CHECK(g.is_clique());
  // ceil((k+1)/4 + 1/(2k)) at k = 3
  CHECK(fragmentation(c).max_segments >= 2);
}
