#include "doctest.h"
#include "test_util.h"
#include "tcamsplit/bit_matcher.h"
#include "tcamsplit/order_search.h"
#include "tcamsplit/segmented_coloring.h"

using namespace tcamsplit;
using namespace tcamsplit::testing;

namespace {

std::vector<std::vector<int>> all_orders(std::size_t k) {
  std::vector<int> o(k);
  for (std::size_t i = 0; i < k; ++i) o[i] = static_cast<int>(i + 1);
  std::vector<std::vector<int>> out;
  do out.push_back(o);
  while (std::next_permutation(o.begin(), o.end()));
  return out;
}

WeightVector values_in_order(const Partition& p, const std::vector<int>& o) {
  WeightVector v;
  for (int id : o) v.push_back(p.weights[id - 1]);
  return v;
}

}  // namespace

TEST_CASE("exhaustive_best_order") {
  auto r = exhaustive_best_order(P("13,13,6"));
  CHECK(r.best_n == 6);
  CHECK(r.lambda == 5);
  CHECK(r.gap == 1);
  auto r2 = exhaustive_best_order(P("12,49,195"));
  CHECK(r2.best_n == 6);
  CHECK(r2.lambda == 5);
  for (unsigned p = 1; p < 64; ++p) {
    auto r3 = exhaustive_best_order(validate_partition({Weight(p), Weight(64 - p)}));
    REQUIRE(r3.gap == 0);
  }
  auto t = exhaustive_best_order(P("1,1,1,1,4,8"), true);
  CHECK(t.table.size() == t.evaluated);
  CHECK(t.evaluated == 15);  // 6!/4! orderings, each reversal pair once
}

TEST_CASE("exhaustive search agrees with brute force over every permutation") {
  std::mt19937_64 rng(201);
  for (int iter = 0; iter < 150; ++iter) {
    unsigned w = 2 + static_cast<unsigned>(rng() % 8);
    std::size_t k = 1 + rng() % std::min<std::size_t>(6, std::size_t{1} << w);
    Partition p = random_partition(rng, w, k);
    if (iter % 3 == 0 && k >= 3 && p.weights[0] + p.weights[0] < p.weights[0] + p.weights[1] + p.weights[2]) {
      // repeat a part so equal values get exercised
      Weight spare = p.weights[1] - p.weights[0];
      p.weights[1] = p.weights[0];
      p.weights[2] += spare;
      p = validate_partition(p.weights, w);
    }
    auto r = exhaustive_best_order(p);
    std::size_t best = SIZE_MAX;
    std::vector<int> best_order;
    for (const auto& o : all_orders(k)) {
      std::size_t n = n_of(p, o);
      if (n < best) {
        best = n;
        best_order = o;
      }
    }
    REQUIRE(r.best_n == best);
    REQUIRE(r.best_order == best_order);
    REQUIRE(n_of(p, r.best_order) == r.best_n);
  }
}

TEST_CASE("too many orderings is an error") {
  WeightVector w;
  for (int i = 1; i <= 13; ++i) w.push_back(i);
  w.push_back(1024 - 91);
  CHECK_THROWS_WITH_AS(exhaustive_best_order(validate_partition(w)), doctest::Contains("TooManyPermutations"), Error);
}

TEST_CASE("derandomized_order") {
  auto p = P("13,13,6");
  auto o = derandomized_order(p);
  CHECK(n_of(p, o) <= 6);
  CHECK(within_derandomized_bound(n_of(p, o), 5, 3));
  auto two = P("5,27");
  CHECK(n_of(two, derandomized_order(two)) == lambda(two));
  CHECK(derandomized_order(P("8")) == std::vector<int>{1});
  CHECK(n_of(P("8"), {1}) == 1);
}

TEST_CASE("greedy_order") {
  auto p = P("1,1,7,7");
  CHECK(n_of(p, {1, 2, 3, 4}) > n_of(p, {1, 3, 2, 4}));
  auto adversarial = greedy_order(p, GreedyTieBreak::SmallestValue);
  CHECK(values_in_order(p, adversarial) == WeightVector{1, 1, 7, 7});
  CHECK(n_of(p, adversarial) > exhaustive_best_order(p).best_n);
  auto two = P("3,13");
  CHECK(n_of(two, greedy_order(two)) == lambda(two));
  CHECK(greedy_order(P("16")) == std::vector<int>{1});
}

TEST_CASE("shift_to_segments") {
  auto p = P("13,13,6");
  auto c = realize_sequence(bit_matcher_sequence(p), 5);
  auto s = shift_to_segments(c, {1, 2, 3});
  CHECK(leaf_runs(s).runs == segments_in_order(p, {1, 2, 3}).runs);
  CHECK(conflicts(s).count <= 8);
  CHECK(conflicts(s).count >= n_of(p, {1, 2, 3}));

  auto two = P("5,11");
  auto c2 = realize_sequence(bit_matcher_sequence(two), 4);
  CHECK(conflicts(shift_to_segments(c2, {2, 1})).count == lambda(two));

  auto mono = make_root_coloring(4, 1);
  CHECK(conflicts(shift_to_segments(mono, {1})).count == 1);

  auto worse = color_segments_full(segments_in_order(p, {1, 2, 3}));
  CHECK_THROWS_WITH_AS(shift_to_segments(worse, {1, 2, 3}), doctest::Contains("NotOptimalInput"), Error);
}

TEST_CASE("property: shifting stays within its bound" * doctest::description("W <= 12, k <= 6")) {
  std::mt19937_64 rng(203);
  for (int iter = 0; iter < 300; ++iter) {
    unsigned w = 1 + static_cast<unsigned>(rng() % 12);
    std::size_t k = 1 + rng() % std::min<std::size_t>(6, std::size_t{1} << w);
    Partition p = random_partition(rng, w, k);
    auto c = realize_sequence(bit_matcher_sequence(p), w);
    auto o = random_order(rng, k);
    auto s = shift_to_segments(c, o);
    const auto n = conflicts(s).count;
    REQUIRE(leaf_runs(s).runs == segments_in_order(p, o).runs);
    REQUIRE(static_cast<long long>(n) <= shift_bound(lambda(p), k));
    REQUIRE(n >= n_of(p, o));
  }
}

TEST_CASE("lower_bound_instance") {
  auto inst = lower_bound_instance(5, 9);
  CHECK(inst.p.weights == WeightVector{85, 171, 64, 64, 128});
  CHECK(values_in_order(inst.p, inst.bad) == WeightVector{85, 64, 64, 128, 171});
  CHECK(n_of(inst.p, inst.good) == 8);
  auto [num, den] = lower_bound_ratio(5, 9);
  CHECK(n_of(inst.p, inst.bad) * den >= num * n_of(inst.p, inst.good));

  auto small = lower_bound_instance(3, 5);
  CHECK(lower_bound_ratio(3, 5) == std::pair<std::size_t, std::size_t>{5, 4});
  CHECK(n_of(small.p, small.bad) * 4 >= 5 * n_of(small.p, small.good));

  CHECK_THROWS_AS(lower_bound_instance(2, 5), Error);
  CHECK_THROWS_AS(lower_bound_instance(6, 2), Error);
}

TEST_CASE("property: lower-bound instances meet their ratio" * doctest::description("k <= 6, W <= 12")) {
  for (std::size_t k = 3; k <= 6; ++k)
    for (unsigned w = 2; w <= 12; ++w) {
      if (Weight(k - 2) > pow2(w - 1)) continue;
      auto inst = lower_bound_instance(k, w);
      auto [num, den] = lower_bound_ratio(k, w);
      INFO("k=" << k << " W=" << w);
      REQUIRE(n_of(inst.p, inst.bad) * den >= num * n_of(inst.p, inst.good));
    }
}

TEST_CASE("property: order bounds against the exhaustive optimum" * doctest::description("k <= 6, W <= 10")) {
  std::mt19937_64 rng(205);
  std::size_t lambda_form_misses = 0, checked = 0;
  for (int iter = 0; iter < 120; ++iter) {
    unsigned w = 2 + static_cast<unsigned>(rng() % 9);
    std::size_t k = 2 + rng() % std::min<std::size_t>(5, (std::size_t{1} << w) - 1);
    Partition p = random_partition(rng, w, k);
    const auto best = exhaustive_best_order(p);
    const std::size_t lg = floor_log2(k);
    for (const auto& o : all_orders(k)) {
      std::size_t n = n_of(p, o);
      REQUIRE(n <= segmented_size_bound(w, k));
      REQUIRE(n <= best.best_n * std::min<std::size_t>(k - 1, w - lg + 1));
      REQUIRE(n >= best.best_n);
    }
    std::size_t nd = n_of(p, derandomized_order(p));
    REQUIRE(within_derandomized_bound(nd, best.best_n, k));
    ++checked;
    if (!within_derandomized_bound(nd, best.lambda, k)) ++lambda_form_misses;
  }
  MESSAGE("derandomized order vs lambda-form bound: " << lambda_form_misses << " of " << checked
                                                      << " instances exceed it");
}
