#include <numeric>

#include "doctest.h"
#include "oracles.hpp"
#include "sumlab/extremal.hpp"
#include "sumlab/numtheory.hpp"
#include "sumlab/rng.hpp"

using namespace sumlab;
using namespace sumlab::extremal;

namespace {

std::vector<Int> range(Int lo, Int hi, Int step = 1) {
  std::vector<Int> v;
  for (Int x = lo; x <= hi; x += step) v.push_back(x);
  return v;
}

}  // namespace

TEST_CASE("homog pipeline on [64]") {
  const HomogResult r = homog_pipeline(ElementSet(range(1, 64)), 64, 64);
  REQUIRE(r.certified);
  CHECK(r.attempt.d == 1);
  CHECK(r.attempt.k == 64);
  CHECK(r.attempt.interval == IntervalWitness{0, 2081});
  CHECK(validate(r.attempt));
  // At the default factor only sums of at most 8 elements count: [0, 8*64 - 28].
  const HomogResult r8 = homog_pipeline(ElementSet(range(1, 64)), 64);
  CHECK(r8.attempt.k == 8);
  CHECK(r8.attempt.interval == IntervalWitness{0, 485});
  CHECK(validate(r8.attempt));
}

TEST_CASE("homog pipeline on the even numbers") {
  const HomogResult r = homog_pipeline(ElementSet(range(2, 64, 2)), 64);
  REQUIRE(r.certified);
  CHECK(r.attempt.d == 2);
  CHECK(r.attempt.reduced == range(1, 32));
  CHECK(r.attempt.progression.diff == 2);
  CHECK(r.attempt.progression.first % 2 == 0);
  CHECK(validate(r.attempt));
  const auto w = term_witnesses(r.attempt);
  for (std::size_t i = 0; i < w.size(); ++i) {
    const Int sum = std::accumulate(w[i].begin(), w[i].end(), Int{0});
    CHECK(sum == r.attempt.progression.term(static_cast<Int>(i)));
  }
}

TEST_CASE("homog pipeline status when the interval is short") {
  const HomogResult r = homog_pipeline(ElementSet{3, 5}, 8);
  CHECK_FALSE(r.certified);
  CHECK(r.status == "interval shorter than n");
  CHECK(r.attempt.interval.length == 1);
  CHECK_THROWS_AS(homog_pipeline(ElementSet{3, 9}, 8), InvalidArgument);
}

TEST_CASE("homog certificates re-validate on random inputs") {
  Rng rng(77, "homog");
  int certified = 0;
  for (int trial = 0; trial < 20; ++trial) {
    const Int n = 256;
    std::vector<Int> pool = range(1, n);
    rng.shuffle(pool);
    pool.resize(static_cast<std::size_t>(rng.between(48, 200)));
    const ElementSet a(pool);
    const HomogResult r = homog_pipeline(a, n);
    // The bounded table agrees with the union of the exact rows.
    const ElementSet reduced(r.attempt.reduced);
    const Int cap = std::min(reduced.total(), r.attempt.k * reduced.max());
    const auto at_most = subset_sums_bounded(reduced, r.attempt.k, cap, SumMode::at_most);
    const auto exactly = subset_sums_bounded(reduced, r.attempt.k, cap, SumMode::exactly);
    CHECK(exactly.union_upto(r.attempt.k) == at_most.row(r.attempt.k));
    if (r.certified) {
      ++certified;
      CHECK(validate(r.attempt));
    }
  }
  CHECK(certified > 0);
}

TEST_CASE("validate rejects tampered certificates") {
  HomogCertificate c = homog_pipeline(ElementSet(range(2, 64, 2)), 64).attempt;
  HomogCertificate wrong_k = c;
  wrong_k.k = 1;
  CHECK_FALSE(validate(wrong_k));
  HomogCertificate wrong_diff = c;
  wrong_diff.progression.diff = 1;
  CHECK_FALSE(validate(wrong_diff));
}

TEST_CASE("exact_g examples") {
  const GResult g56 = exact_g(5, 6);
  CHECK(g56.value == 3);
  CHECK(g56.witness == std::vector<Int>{3, 4, 5});
  CHECK(exact_g(4, 5).value == 2);
  CHECK(exact_g(6, 22).value == 6);
  CHECK(exact_g(1, 1).value == 0);
  CHECK_THROWS_AS(exact_g(25, 10), SizeError);
}

TEST_CASE("exact_g matches subset enumeration for n <= 12") {
  for (Int n = 1; n <= 12; ++n) {
    const auto table = oracle::g_table(n);
    for (Int m = 1; m <= n * (n + 1) / 2 + 1; ++m) {
      const GResult g = exact_g(n, m);
      CHECK_MESSAGE(g.value == table[static_cast<std::size_t>(m)], "n=" << n << " m=" << m);
      CHECK(static_cast<Int>(g.witness.size()) == g.value);
      CHECK_FALSE(oracle::has_subset_sum(g.witness, m));
    }
  }
}

TEST_CASE("exact_g does not depend on thread count") {
  for (auto [n, m] : {std::pair<Int, Int>{18, 40}, {20, 97}, {16, 60}}) {
    const GResult a = exact_g(n, m, 1);
    const GResult b = exact_g(n, m, 4);
    CHECK(a.value == b.value);
    CHECK(a.witness == b.witness);
  }
}

TEST_CASE("g constructions") {
  SUBCASE("(20, 12)") {
    const auto cs = g_constructions(20, 12);
    CHECK(cs[0].set == std::vector<Int>{5, 10, 14, 15, 16, 19, 20});
    CHECK(cs[0].verified);
    CHECK(cs[0].size() == nt::s_formula(20, 12));
  }
  SUBCASE("(5, 6)") {
    const auto cs = g_constructions(5, 6);
    CHECK(cs[1].set == std::vector<Int>{1, 2});
    CHECK(cs[1].verified);
    CHECK(exact_g(5, 6).value > cs[1].size());
  }
  SUBCASE("(100, 900) interval") {
    const auto plain = g_constructions(100, 900);
    CHECK_FALSE(plain[2].applicable);
    CHECK(plain[2].set.empty());
    const auto forced = g_constructions(100, 900, true);
    CHECK(forced[2].set == range(85, 90));
    CHECK(forced[2].verified);
  }
}

TEST_CASE("every verified construction is at most exact_g") {
  for (Int n = 2; n <= 14; ++n)
    for (Int m = 1; m <= n * (n + 1) / 2; ++m) {
      const GResult g = exact_g(n, m);
      for (const auto& c : g_constructions(n, m, true)) {
        if (!c.verified) continue;
        CHECK(!oracle::has_subset_sum(c.set, m));
        CHECK_MESSAGE(c.size() <= g.value, c.name << " n=" << n << " m=" << m);
        if (c.name == "multiples+extras" && c.reason.empty()) CHECK(g.value >= nt::s_formula(n, m));
      }
    }
}

TEST_CASE("exact_H") {
  const HResult h1 = exact_H(1);
  CHECK(h1.value == 0);
  const HResult h3 = exact_H(3);
  CHECK(h3.value == 1);
  CHECK(h3.first == std::vector<Int>{1});
  CHECK(h3.second == std::vector<Int>{2});
  const HResult h5 = exact_H(5);
  CHECK(h5.value == 2);
  CHECK(h5.first == std::vector<Int>{1, 2});
  CHECK(h5.second == std::vector<Int>{4, 5});
  for (Int n = 1; n <= 8; ++n) CHECK_MESSAGE(exact_H(n).value == oracle::H_brute(n), "n=" << n);
  CHECK_THROWS_AS(exact_H(13), SizeError);
}

TEST_CASE("exact_h") {
  CHECK(exact_h(1).value == 1);
  const hResult h5 = exact_h(5);
  CHECK(h5.value == 4);
  CHECK(h5.witness == std::vector<Int>{1, 2, 4, 5});
  Int prev = 0;
  for (Int n = 1; n <= 12; ++n) {
    const hResult h = exact_h(n);
    CHECK_MESSAGE(h.value == oracle::h_brute(n), "n=" << n);
    CHECK_FALSE(oracle::has_average(h.witness));
    CHECK(h.value >= prev);
    prev = h.value;
  }
  CHECK_THROWS_AS(exact_h(26), SizeError);
}

TEST_CASE("Straus inequality for n <= 10") {
  for (Int n = 1; n <= 10; ++n) CHECK(straus_check(n).holds);
}
