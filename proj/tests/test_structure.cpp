#include <numeric>
#include <set>

#include "doctest.h"
#include "oracles.hpp"
#include "sumlab/rng.hpp"
#include "sumlab/structure.hpp"

using namespace sumlab;
using namespace sumlab::structure;

namespace {

std::vector<Int> range(Int lo, Int hi, Int step = 1) {
  std::vector<Int> v;
  for (Int x = lo; x <= hi; x += step) v.push_back(x);
  return v;
}

}  // namespace

TEST_CASE("is_k_diverse examples") {
  auto r = is_k_diverse({2, 4, 6, 8}, 1);
  CHECK_FALSE(r.diverse);
  CHECK(r.witness == 2);
  CHECK(is_k_diverse({1, 2, 3}, 2).diverse);
  r = is_k_diverse({6}, 1);
  CHECK_FALSE(r.diverse);
  CHECK(r.witness == 2);
  r = is_k_diverse({1}, 2);
  CHECK_FALSE(r.diverse);
  CHECK(r.witness == 2);
  const auto c = is_k_diverse({2, 3, 4, 9}, 1, true);
  CHECK(c.counts[2] == 2);
  CHECK(c.counts[3] == 2);
  CHECK(c.counts[9] == 3);
  CHECK_THROWS_AS(is_k_diverse({1}, 0), InvalidArgument);
}

TEST_CASE("property: diversity matches the definition") {
  Rng rng(5);
  for (int t = 0; t < 200; ++t) {
    std::set<Int> s;
    const auto size = rng.between(1, 12);
    while (static_cast<Int>(s.size()) < size) s.insert(rng.between(1, 60));
    const ElementSet a(std::vector<Int>(s.begin(), s.end()));
    const Int k = rng.between(1, 6);
    std::optional<Int> brute;
    for (Int v = 2; v <= 61 && !brute; ++v) {
      Int non = 0;
      for (Int x : a) non += x % v != 0;
      if (non < k) brute = v;
    }
    const auto rep = is_k_diverse(a, k);
    CHECK(rep.diverse == !brute.has_value());
    CHECK(rep.witness == brute);
  }
}

TEST_CASE("diverse_decompose examples") {
  auto t = diverse_decompose({4, 8, 12, 20}, 1, 0);
  REQUIRE(t.steps.size() == 1);
  CHECK(t.steps[0].v == 4);
  CHECK(t.q.elements() == std::vector<Int>{1, 2, 3, 5});
  CHECK(t.divisor == 4);
  CHECK(t.status == DecompositionStatus::diverse);
  t = diverse_decompose({4, 8, 12, 21}, 1, 0);
  CHECK(t.steps.empty());
  CHECK(t.q.elements() == std::vector<Int>{4, 8, 12, 21});
  t = diverse_decompose({2}, 2, 5);
  CHECK(t.status == DecompositionStatus::stuck);
}

TEST_CASE("property: decomposition trace lifts back into the input") {
  Rng rng(9);
  for (int trial = 0; trial < 100; ++trial) {
    std::set<Int> s;
    const Int g = rng.between(1, 12);
    while (s.size() < 20) s.insert(g * rng.between(1, 40));
    const ElementSet a(std::vector<Int>(s.begin(), s.end()));
    const auto t = diverse_decompose(a, 3, 4);
    BigInt v = 1;
    for (const auto& st : t.steps) v *= st.v;
    CHECK(v == t.divisor);
    for (Int x : t.q) CHECK(a.contains((t.divisor * x).convert_to<Int>()));
    CHECK(t.divisor <= a.max());
    if (t.status == DecompositionStatus::diverse) CHECK(is_k_diverse(t.q, 3).diverse);
  }
}

TEST_CASE("sigma_mod_full examples") {
  auto r = sigma_mod_full({1, 3, 5, 7}, 4);
  CHECK(r.hypotheses_hold);
  CHECK(r.full);
  r = sigma_mod_full({1, 2}, 3);
  CHECK(r.full);
  r = sigma_mod_full({2, 4}, 4);
  CHECK_FALSE(r.hypotheses_hold);
  REQUIRE(r.divisor_checks.front() == std::pair<Int, bool>{2, false});
  CHECK(r.mask.values() == std::vector<Int>{0, 2});
  CHECK(r.has_nonzero_subgroup);
}

TEST_CASE("property: full-mod-d lemma on random sets") {
  Rng rng(31);
  for (int t = 0; t < 300; ++t) {
    std::set<Int> s;
    const auto size = rng.between(1, 10);
    while (static_cast<Int>(s.size()) < size) s.insert(rng.between(1, 50));
    // Throws on any violation of either clause.
    CHECK_NOTHROW(sigma_mod_full(ElementSet(std::vector<Int>(s.begin(), s.end())), rng.between(1, 12)));
  }
}

TEST_CASE("nice_decompose examples") {
  const NiceParams desk = NiceParams::desk();
  auto t = nice_decompose(ElementSet(range(2, 64, 2)), 64, desk);
  CHECK(t.status == NiceStatus::nice);
  CHECK(t.d == 2);
  CHECK(t.result.elements() == range(1, 32));
  REQUIRE(t.log.size() == 1);
  CHECK(t.log[0].rule == "divisor");

  NiceParams dense = desk;
  dense.density = 2;
  t = nice_decompose(ElementSet(range(2, 64, 2)), 64, dense);
  CHECK(t.d == 2);
  CHECK(t.result.elements() == range(2, 31));

  t = nice_decompose(ElementSet(range(1, 32)), 64, desk);
  CHECK(t.d == 1);
  CHECK(t.log.empty());
  CHECK(t.result.elements() == range(1, 32));

  std::vector<Int> mixed = range(6, 600, 6);
  mixed.insert(mixed.begin(), 1);
  t = nice_decompose(ElementSet(mixed), 600, desk);
  REQUIRE(t.log.size() == 2);
  CHECK(t.log[0].rule == "divisor");
  CHECK(t.log[0].d == 2);
  CHECK(t.log[0].removed == std::vector<Int>{1});
  CHECK(t.d == 6);
  CHECK(t.result.elements() == range(1, 100));

  NiceParams strict{1, 0, 0, 2};
  t = nice_decompose(ElementSet(mixed), 600, strict);
  REQUIRE_FALSE(t.log.empty());
  CHECK(t.log[0].rule == "sparse-dyadic");
  CHECK(t.log[0].removed == std::vector<Int>{1, 6, 12});
  CHECK(t.d == 6);
}

TEST_CASE("nice_decompose reports lossy inputs") {
  const auto t = nice_decompose({1, 2, 40}, 64, NiceParams{1, 0, 1, 3});
  CHECK(t.status == NiceStatus::too_lossy);
}

TEST_CASE("property: nice output satisfies niceness and lifts") {
  Rng rng(11);
  for (int trial = 0; trial < 60; ++trial) {
    std::set<Int> s;
    const Int g = rng.between(1, 4);
    while (s.size() < 50) s.insert(g * rng.between(1, 256 / g));
    const ElementSet a(std::vector<Int>(s.begin(), s.end()));
    const NiceParams p{1, static_cast<double>(rng.between(0, 3)), 1, static_cast<double>(rng.between(1, 4))};
    const auto t = nice_decompose(a, 256, p);
    for (Int x : t.result) CHECK(a.contains(t.d * x));
    if (t.status == NiceStatus::nice) CHECK(is_nice(t.result, 256, p));
  }
}

TEST_CASE("phase_process examples") {
  PhaseParams p;
  p.seed = 1;
  auto log = phase_process(7, range(1, 6), p);
  CHECK(static_cast<Int>(log.final_mask.size()) >= 2);
  CHECK(log.first_part.size() == 4);
  CHECK(log.second_part.size() == 2);
  bool saturated = false;
  for (const auto& st : log.steps) saturated = saturated || st.phase == Phase::saturated;
  CHECK(saturated);

  log = phase_process(8, {2, 4, 6}, p);
  for (const auto& st : log.steps) CHECK(st.d % 2 == 0);
  for (Int r : log.final_mask.values()) CHECK(r % 2 == 0);

  p.k_cap = 3;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    p.seed = seed;
    log = phase_process(12, range(1, 12), p);
    CHECK(log.steps.size() == 3);
    for (const auto& st : log.steps) CHECK(st.d == 1);
  }
}

TEST_CASE("property: phase log is replayable") {
  Rng rng(3);
  for (int trial = 0; trial < 40; ++trial) {
    const Int b = rng.between(2, 60);
    std::vector<Int> a;
    const auto size = rng.between(1, 30);
    for (Int i = 0; i < size; ++i) a.push_back(rng.between(0, b - 1));
    PhaseParams p;
    p.seed = rng.next();
    const auto log = phase_process(b, a, p);
    ResidueSet sigma = ResidueSet::of(b, log.second_part);
    std::vector<Int> remaining = log.first_part;
    Int prev_d = 1;
    Int prev_size = static_cast<Int>(sigma.size());
    for (const auto& st : log.steps) {
      const Int d = residue_gcd(b, remaining);
      CHECK(d == st.d);
      CHECK(d % prev_d == 0);
      prev_d = d;
      CHECK(classify_phase(sigma, static_cast<Int>(remaining.size()), d, p) == st.phase);
      CHECK(st.sigma_before == static_cast<Int>(sigma.size()));
      sigma.bits |= sigma.bits.rotated(static_cast<std::size_t>(st.chosen));
      CHECK(st.sigma_after == static_cast<Int>(sigma.size()));
      CHECK(st.sigma_after >= prev_size);
      prev_size = st.sigma_after;
      remaining.erase(std::find(remaining.begin(), remaining.end(), st.chosen));
    }
    CHECK(sigma == log.final_mask);
    const auto again = phase_process(b, a, p);
    CHECK(again.final_mask == log.final_mask);
  }
}

TEST_CASE("structure hypotheses") {
  CHECK_FALSE(structure_hypotheses(7, range(1, 6)));
  Rng rng(17);
  std::set<Int> s;
  while (s.size() < 9000) s.insert(rng.between(0, 30010));
  CHECK(structure_hypotheses(30011, std::vector<Int>(s.begin(), s.end())));
  CHECK_FALSE(structure_hypotheses(30011, std::vector<Int>(s.begin(), std::next(s.begin(), 1000))));
}

TEST_CASE("random thinning keeps diversity in most trials") {
  const std::vector<Int> base = range(1, 400);
  const Int k = 200;
  const Int h = 2;
  REQUIRE(is_k_diverse(ElementSet(base), k).diverse);
  int failures = 0;
  for (std::uint64_t trial = 0; trial < 200; ++trial) {
    Rng rng(2024, "thinning", trial);
    std::vector<Int> pool = base;
    rng.shuffle(pool);
    pool.resize(base.size() / static_cast<std::size_t>(h));
    if (!is_k_diverse(ElementSet(pool), k / (2 * h)).diverse) ++failures;
  }
  CHECK(failures <= 10);
}
