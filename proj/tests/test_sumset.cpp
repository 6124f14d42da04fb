#include <numeric>
#include <sstream>

#include "doctest.h"
#include "oracles.hpp"
#include "sumlab/rng.hpp"
#include "sumlab/sumset.hpp"

using namespace sumlab;

namespace {

std::vector<Int> vals(const SumMask& m) { return m.values(); }

std::vector<Int> as_vec(const std::set<Int>& s) { return {s.begin(), s.end()}; }

ElementSet random_set(Rng& rng, std::size_t max_size, Int max_elem) {
  std::set<Int> s;
  const std::size_t target = rng.below(max_size + 1);
  while (s.size() < target) s.insert(rng.between(1, max_elem));
  return ElementSet(std::vector<Int>(s.begin(), s.end()));
}

}  // namespace

TEST_CASE("element set invariants and text format") {
  CHECK_THROWS_AS(ElementSet({1, 1}), InvalidArgument);
  CHECK_THROWS_AS(ElementSet({0, 2}), InvalidArgument);
  CHECK(ElementSet::multiset({2, 1, 2}).elements() == std::vector<Int>{1, 2, 2});
  std::istringstream in("# header\n5\n  3 # three\n\n1\n");
  const ElementSet a = parse_element_set(in);
  CHECK(a.elements() == std::vector<Int>{1, 3, 5});
  std::istringstream back(format_element_set(a));
  CHECK(parse_element_set(back) == a);
  std::istringstream bad("4\nx\n");
  CHECK_THROWS_AS(parse_element_set(bad), InvalidArgument);
}

TEST_CASE("subset_sums examples") {
  CHECK(vals(subset_sums({})) == std::vector<Int>{0});
  CHECK(vals(subset_sums({1, 2, 4})) == std::vector<Int>{0, 1, 2, 3, 4, 5, 6, 7});
  CHECK(vals(subset_sums({3, 4, 5})) == std::vector<Int>{0, 3, 4, 5, 7, 8, 9, 12});
  CHECK(vals(subset_sums({3, 4, 5})) == as_vec(oracle::subset_sums({3, 4, 5})));
  CHECK(vals(subset_sums({3, 4, 5}, 8)) == std::vector<Int>{0, 3, 4, 5, 7, 8});
  CHECK_THROWS_AS(subset_sums({1}, Int{1} << 30), ResourceError);
  CHECK_THROWS_AS(subset_sums({1}, 100, 64), ResourceError);
}

TEST_CASE("subset_sums_mod examples") {
  CHECK(vals(subset_sums_mod({1, 2}, 5)) == std::vector<Int>{0, 1, 2, 3});
  CHECK(vals(subset_sums_mod({5, 10}, 5)) == std::vector<Int>{0});
  CHECK(vals(subset_sums_mod({2, 3, 7}, 6)) == std::vector<Int>{0, 1, 2, 3, 4, 5});
  CHECK(vals(subset_sums_mod({2, 3, 7}, 6)) == as_vec(oracle::subset_sums_mod({2, 3, 7}, 6)));
  CHECK(vals(subset_sums_mod(ElementSet::multiset({3, 3, 3}), 9)) == std::vector<Int>{0, 3, 6});
  CHECK_THROWS_AS(subset_sums_mod({1}, 0), InvalidArgument);
}

TEST_CASE("subset_sums_bounded examples") {
  CHECK(vals(subset_sums_bounded({1, 2, 4}, 2, 7, SumMode::at_most).row(2)) ==
        std::vector<Int>{0, 1, 2, 3, 4, 5, 6});
  CHECK(vals(subset_sums_bounded({3, 4, 5}, 2, 12, SumMode::at_most).row(2)) ==
        std::vector<Int>{0, 3, 4, 5, 7, 8, 9});
  const auto ex = subset_sums_bounded({1, 2, 3}, 2, 6, SumMode::exactly);
  CHECK(vals(ex.row(2)) == std::vector<Int>{3, 4, 5});
  CHECK(vals(ex.row(0)) == std::vector<Int>{0});
}

TEST_CASE("longest_interval examples") {
  CHECK(longest_interval(subset_sums({1, 2, 4})) == IntervalWitness{0, 8});
  CHECK(longest_interval(subset_sums({3, 4, 5})) == IntervalWitness{3, 3});
  CHECK(longest_interval(subset_sums({})) == IntervalWitness{0, 1});
  CHECK(longest_interval(subset_sums({3, 4, 5}), 6) == IntervalWitness{7, 3});
  CHECK_THROWS_AS(longest_interval(subset_sums_mod({1}, 3)), InvalidArgument);
}

TEST_CASE("find_homog_progression examples") {
  const auto p = find_homog_progression(subset_sums({2, 4, 6}), 6);
  REQUIRE(p);
  CHECK(*p == ProgressionWitness{2, 2, 6, true});
  const auto q = find_homog_progression(subset_sums({1, 2, 4}), 7);
  REQUIRE(q);
  CHECK(*q == ProgressionWitness{1, 1, 7, true});
  CHECK_FALSE(find_homog_progression(subset_sums({3, 5}), 2));
  CHECK_THROWS_AS(find_homog_progression(subset_sums({3, 5}), 1), InvalidArgument);
}

TEST_CASE("graham_extend examples") {
  CHECK(graham_extend({3, 3}, {3}) == IntervalWitness{3, 6});
  CHECK(graham_extend({2, 2}, {2, 4}) == IntervalWitness{2, 8});
  try {
    graham_extend({2, 2}, {5});
    FAIL("expected precondition error");
  } catch (const PreconditionError& e) {
    CHECK(e.index() == 0);
    CHECK(e.slack() == 3);
  }
}

TEST_CASE("lev_interval examples") {
  const IntervalWitness w = lev_interval({{0, 1, 2}, {0, 1, 2}}, 2, 3);
  CHECK(w == IntervalWitness{0, 5});
  const IntervalWitness v = lev_interval({{0, 2, 3}, {0, 2, 3}, {0, 2, 3}, {0, 2, 3}}, 3, 3);
  CHECK(v == IntervalWitness{2, 11});
  try {
    lev_interval({{0, 2, 3}, {0, 2, 3}}, 3, 3);
    FAIL("expected hypothesis error");
  } catch (const HypothesisError& e) {
    CHECK(e.clause() == "ell");
  }
  CHECK_THROWS_AS(lev_interval({{0, 2, 4}, {0, 2, 4}}, 4, 3), HypothesisError);
  CHECK(lev_interval({{5, 6, 7}, {10, 11, 12}}, 2, 3) == IntervalWitness{15, 5});
}

TEST_CASE("almost_periods examples") {
  const auto a = ResidueSet::of(5, {0, 1});
  CHECK(almost_periods(a, 1).values() == std::vector<Int>{0, 1, 4});
  CHECK(almost_periods(a, 0).values() == std::vector<Int>{0});
  CHECK(almost_periods(ResidueSet::full(7), 2) == ResidueSet::full(7));
}

TEST_CASE("mod_growth_lower_bound examples") {
  CHECK(mod_growth_lower_bound({1, 2}, 5) == std::pair<Int, Int>{8, 8});
  CHECK(mod_growth_lower_bound({}, 3) == std::pair<Int, Int>{2, 2});
  CHECK_THROWS_AS(mod_growth_lower_bound({3}, 3), InvalidArgument);
}

TEST_CASE("witness reconstruction") {
  const ElementSet a{3, 5, 9, 14, 22};
  const auto all = oracle::subset_sums(a.elements());
  for (Int t = 0; t <= a.total() + 1; ++t) {
    const auto w = subset_sum_witness(a, t);
    CHECK(w.has_value() == (all.count(t) > 0));
    if (w) {
      CHECK(std::accumulate(w->begin(), w->end(), Int{0}) == t);
      CHECK(ElementSet(*w).size() == w->size());
      for (Int v : *w) CHECK(a.contains(v));
    }
  }
  auto by = oracle::sums_by_size(a.elements());
  for (Int t = 0; t <= 30; ++t) {
    const auto w = bounded_sum_witness(a, 2, t);
    const bool reachable = by[0].count(t) || by[1].count(t) || by[2].count(t);
    CHECK(w.has_value() == reachable);
    if (w) {
      CHECK(w->size() <= 2);
      CHECK(std::accumulate(w->begin(), w->end(), Int{0}) == t);
    }
  }
}

TEST_CASE("property: DP engines agree with enumeration") {
  Rng rng(20240601);
  for (int trial = 0; trial < 200; ++trial) {
    const ElementSet a = random_set(rng, 12, 60);
    const auto& v = a.elements();
    CHECK(vals(subset_sums(a)) == as_vec(oracle::subset_sums(v)));
    const Int m = rng.between(1, 40);
    CHECK(vals(subset_sums_mod(a, m)) == as_vec(oracle::subset_sums_mod(v, m)));
    auto by = oracle::sums_by_size(v);
    const Int h = rng.between(0, 5);
    const Int cap = rng.between(0, 200);
    const auto ex = subset_sums_bounded(a, h, cap, SumMode::exactly);
    const auto am = subset_sums_bounded(a, h, cap, SumMode::at_most);
    std::set<Int> cumulative;
    for (Int k = 0; k <= h; ++k) {
      std::set<Int> row;
      for (Int s : by[static_cast<int>(k)])
        if (s <= cap) row.insert(s);
      cumulative.insert(row.begin(), row.end());
      CHECK(vals(ex.row(k)) == as_vec(row));
      CHECK(vals(am.row(k)) == as_vec(cumulative));
      CHECK(ex.union_upto(k) == am.row(k));
    }
  }
}

TEST_CASE("property: monotonicity and witness validity") {
  Rng rng(77);
  for (int trial = 0; trial < 100; ++trial) {
    ElementSet a = random_set(rng, 10, 40);
    Int x = rng.between(1, 40);
    if (a.contains(x)) continue;
    std::vector<Int> more = a.elements();
    more.push_back(x);
    const SumMask small = subset_sums(a);
    const SumMask big = subset_sums(ElementSet(more));
    for (Int s : small.values()) CHECK(big.contains(s));
    const auto iv = longest_interval(big);
    CHECK(validates(iv, big));
    const auto run = oracle::longest_run(oracle::subset_sums(more));
    CHECK(iv == IntervalWitness{run.first, run.second});
    if (auto p = find_homog_progression(big, 2)) CHECK(validates(*p, big));
    const auto [lhs, rhs] = mod_growth_lower_bound(a, x);
    CHECK(lhs >= rhs);
  }
}

TEST_CASE("hex serialization round trip") {
  const SumMask m = subset_sums({3, 4, 5});
  CHECK(m.bits.to_hex() == "b913");
  CHECK(Bitset::from_hex(m.bits.to_hex(), m.bits.size()) == m.bits);
  CHECK_THROWS(Bitset::from_hex("ff", 3));
}

TEST_CASE("residue helpers") {
  const auto a = ResidueSet::of(6, {1, 2});
  CHECK(residue_sum(a, a).values() == std::vector<Int>{2, 3, 4});
  CHECK(residue_negate(a).values() == std::vector<Int>{4, 5});
  CHECK(iterated_sumset(a, 1, 1).values() == std::vector<Int>{0, 1, 5});
  CHECK(in_proper_coset(ResidueSet::of(6, {1, 3, 5})));
  CHECK_FALSE(in_proper_coset(ResidueSet::of(6, {1, 2})));
}
