#include <cmath>

#include "doctest.h"
#include "oracles.hpp"
#include "sumlab/completeness.hpp"
#include "sumlab/rng.hpp"

using namespace sumlab;
using namespace sumlab::completeness;

namespace {

std::vector<BigInt> big(std::initializer_list<Int> v) { return {v.begin(), v.end()}; }

// Byte-per-value reachability, independent of the bitset engine.
std::vector<char> reachable(const std::vector<Int>& a) {
  Int total = 0;
  for (Int x : a) total += x;
  std::vector<char> r(static_cast<std::size_t>(total) + 1, 0);
  r[0] = 1;
  for (Int x : a)
    for (Int s = total; s >= x; --s)
      if (r[s - x]) r[s] = 1;
  return r;
}

std::vector<Rational> random_poly(Rng& rng) {
  const auto deg = static_cast<std::size_t>(rng.between(0, 6));
  std::vector<Rational> c(deg + 1);
  for (auto& x : c) x = Rational(rng.between(-50, 50), rng.between(1, 12));
  if (c.back() == 0) c.back() = Rational(1, rng.between(1, 5));
  return c;
}

}  // namespace

TEST_CASE("polynomial parsing") {
  CHECK(parse_polynomial("x") == std::vector<Rational>{0, 1});
  CHECK(parse_polynomial("3/4x^2 - x + 5") == std::vector<Rational>{5, -1, Rational(3, 4)});
  CHECK(parse_polynomial("-2*x^3+x^3 + 1/2") == std::vector<Rational>{Rational(1, 2), 0, 0, -1});
  CHECK(format_polynomial({5, -1, Rational(3, 4)}) == "3/4x^2 - x + 5");
  CHECK(format_polynomial({0, 0, -1}) == "-x^2");
  CHECK_THROWS_AS(parse_polynomial("sqrt(2)x"), InvalidArgument);
  CHECK_THROWS_AS(parse_polynomial("1/0 x"), InvalidArgument);
  CHECK_THROWS_AS(parse_polynomial("0.5x"), InvalidArgument);
  CHECK_THROWS_AS(parse_polynomial(""), InvalidArgument);
}

TEST_CASE("graham criterion") {
  CHECK(graham_complete_test({0, 1}).complete);
  const auto two = graham_complete_test({0, 2});
  CHECK_FALSE(two.complete);
  CHECK(two.failing_condition == 3);
  const auto sq = graham_complete_test({0, 0, 1});
  CHECK(sq.complete);
  CHECK(sq.binomial.alpha() == std::vector<Rational>{0, 1, 2});
  const auto neg = graham_complete_test({0, 0, -1});
  CHECK(neg.failing_condition == 1);
  CHECK_THROWS_AS(graham_complete_test({0, 0}), InvalidArgument);

  // x(x+1)/2 = C(x,2) + C(x,1): triangular numbers.
  const auto tri = graham_complete_test({0, Rational(1, 2), Rational(1, 2)});
  CHECK(tri.complete);
  CHECK(tri.scale == 1);
  const auto half = graham_complete_test({0, Rational(1, 2)});
  CHECK(half.scale == 2);
  CHECK(half.scaled == std::vector<BigInt>{0, 1});
}

TEST_CASE("binomial conversion round-trips") {
  Rng rng(7, "poly");
  for (int t = 0; t < 1000; ++t) {
    const auto c = random_poly(rng);
    const auto b = BinomialPolynomial::from_monomial(c);
    REQUIRE(b.to_monomial() == c);
    REQUIRE(parse_polynomial(format_polynomial(c)) == c);
    for (Int x = -3; x <= 5; ++x) {
      Rational direct = 0;
      Rational xp = 1;
      for (const auto& ci : c) {
        direct += ci * xp;
        xp *= x;
      }
      REQUIRE(b.eval(x) == direct);
    }
  }
}

TEST_CASE("graham verdict is invariant under scaling by L") {
  Rng rng(11, "poly");
  for (int t = 0; t < 300; ++t) {
    const auto c = random_poly(rng);
    const auto v = graham_complete_test(c);
    std::vector<Rational> lc;
    for (const auto& ci : c) lc.push_back(ci * Rational(v.scale));
    const auto w = graham_complete_test(lc);
    REQUIRE(v.complete == w.complete);
    REQUIRE(w.scale == 1);
    for (std::size_t i = 0; i < v.scaled.size(); ++i)
      REQUIRE(Rational(v.scaled[i]) == w.binomial.alpha()[i]);
  }
}

TEST_CASE("prefix completeness windows") {
  std::vector<Int> birch;
  for (Int p2 = 1; p2 <= 100; p2 *= 2)
    for (Int v = p2; v <= 100; v *= 3) birch.push_back(v);
  std::sort(birch.begin(), birch.end());
  REQUIRE(birch.size() == 20);
  const auto w = prefix_completeness_window(make_prefix(birch));
  CHECK(w.low == 0);
  CHECK(w.high == 613);

  std::vector<Int> twos, threes;
  for (Int v = 1; v <= 1024; v *= 2) twos.push_back(v);
  for (Int v = 1; v <= 243; v *= 3) threes.push_back(v);
  const auto wt = prefix_completeness_window(make_prefix(twos));
  CHECK(wt.low == 0);
  CHECK(wt.high == 2047);
  const auto w3 = prefix_completeness_window(make_prefix(threes));
  CHECK(w3.low == 0);
  CHECK(w3.high == 1);
  CHECK(w3.length() == 1);

  const auto r3 = oracle::subset_sums(threes);
  CHECK(r3.count(2) == 0);
  CHECK(r3.count(1) == 1);

  CHECK_THROWS_AS(prefix_completeness_window(make_prefix({1, 2}), 2), ResourceError);
  CHECK_THROWS_AS(prefix_completeness_window(SequencePrefix{}), InvalidArgument);
}

TEST_CASE("squares: window of distinct squares") {
  std::vector<Int> sq;
  for (Int i = 1; i <= 70; ++i) sq.push_back(i * i);
  const auto w = prefix_completeness_window(make_prefix(sq));
  CHECK(w.length() >= 4871);
  CHECK(w.low == 129);
  CHECK(w.high == 116666);
  const auto r = reachable(sq);
  for (Int s = 129; s <= 5000; ++s) REQUIRE(r[s]);
  CHECK_FALSE(r[128]);
}

TEST_CASE("F sequence") {
  const auto f = gen_F(Rational(1, 2), big({1}), 8);
  CHECK(f.prefix.terms == big({1, 1, 1, 2, 2, 3, 3, 5}));
  CHECK_FALSE(f.proxy);
  CHECK(gen_F(Rational(1, 3), big({1, 2, 4}), 3).prefix.terms == big({1, 2, 4}));
  CHECK_THROWS_AS(gen_F(Rational(1, 3), big({1}), 5), InvalidArgument);
  CHECK_THROWS_AS(gen_F(Rational(1, 1), big({1}), 5), InvalidArgument);
  CHECK_THROWS_AS(gen_F(Rational(1, 2), big({1, 2}), 1), InvalidArgument);

  const auto again = gen_F(Rational(1, 2), big({1}), 8);
  CHECK(again.prefix.terms == f.prefix.terms);
}

TEST_CASE("F sequence growth proxy at N = 1e5") {
  const auto f = gen_F(Rational(1, 2), big({1}), 100000);
  REQUIRE(f.proxy);
  CHECK(f.proxy->target == doctest::Approx(1.0 / (2.0 * std::log(2.0))));
  CHECK(f.proxy->relative() == doctest::Approx(0.674030).epsilon(1e-4));
  CHECK(f.proxy->relative() >= 0.54);
  CHECK(f.proxy->relative() <= 0.90);
}

TEST_CASE("friendly sequence recursion") {
  const auto fr = gen_friendly(Rational(1, 2), big({1, 2}), 6);
  CHECK(fr.prefix.terms == big({1, 2, 2, 3, 4, 5}));
  CHECK_FALSE(fr.report.strictly_increasing);

  // Recompute each extension directly from the definition.
  const auto& b = fr.prefix.terms;
  for (Int n = 3; n <= 6; ++n) {
    const Int fl = n / 2;
    const Int ce = (n + 1) / 2;
    const BigInt frac_part = n % 2 == 1 ? b[ce - 1] / 2 : BigInt(0);
    BigInt s = 0;
    for (Int i = 1; i <= fl; ++i) s += b[i - 1];
    CHECK(b[n - 1] == frac_part + s);
  }
  CHECK_THROWS_AS(gen_friendly(Rational(2, 3), big({1}), 4), InvalidArgument);
}

TEST_CASE("friendly condition report") {
  const auto fr = gen_friendly(Rational(1, 2), big({2, 3, 4}), 2000);
  const auto& r = fr.report;
  CHECK(fr.prefix.terms.size() == 2000);
  CHECK(r.strictly_increasing);
  CHECK(r.best_C == 1);
  CHECK(r.gaps_grow);
  REQUIRE(r.gaps_monotone_from);
  CHECK(*r.gaps_monotone_from == 1);
  CHECK(r.best_c == doctest::Approx(0.5));
  CHECK(r.dyadic_counts_grow);
  CHECK(r.doubling_tested > 0);
  REQUIRE(r.doubling_from);
  CHECK(*r.doubling_from == 1);
}

TEST_CASE("eps necessary condition") {
  std::vector<BigInt> pow2;
  for (Int n = 1; n <= 40; ++n) pow2.push_back(BigInt(1) << n);
  SequencePrefix p2;
  p2.terms = pow2;

  const auto v = eps_necessary_check(p2, Rational(1, 2));
  CHECK_FALSE(v.holds);
  CHECK(v.best_C == 20);
  REQUIRE(v.witness);
  const auto& w = *v.witness;
  CHECK(w.indices.front() == 17);
  CHECK(w.value == BigInt(1) << 17);
  CHECK(w.method == "dp");
  CHECK(w.certified);
  CHECK(w.density_ok);
  std::vector<Int> kept;
  for (Int n = 1; n <= 17; ++n)
    if (std::find(w.deleted.begin(), w.deleted.end(), n) == w.deleted.end()) kept.push_back(Int{1} << n);
  CHECK(kept.size() == 16);
  CHECK_FALSE(oracle::has_subset_sum(kept, Int{1} << 17));

  const auto one = eps_necessary_check(p2, Rational(1));
  CHECK(one.holds);
  CHECK(one.best_C == 0);

  std::vector<Int> lin;
  for (Int n = 1; n <= 200; ++n) lin.push_back(n);
  const auto l = eps_necessary_check(make_prefix(lin), Rational(1, 2));
  CHECK(l.holds);
  CHECK(l.best_C == 1);
  CHECK_FALSE(l.witness);
}

TEST_CASE("eps witness for huge terms falls back to the sum certificate") {
  std::vector<BigInt> pow3;
  for (Int n = 1; n <= 60; ++n) pow3.push_back(BigInt(1) << (2 * n));
  SequencePrefix p;
  p.terms = pow3;
  const auto v = eps_necessary_check(p, Rational(1, 2), 20);
  REQUIRE(v.witness);
  CHECK(v.witness->method == "sum");
  CHECK(v.witness->certified);
}

TEST_CASE("interlace sampling") {
  const auto b = make_prefix({10, 20, 30});
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const auto a = interlace_sample(b, 3, seed);
    REQUIRE(a.terms.size() == 2);
    const Int a1 = a.terms[0].convert_to<Int>();
    const Int a2 = a.terms[1].convert_to<Int>();
    CHECK((a1 == 11 || a1 == 13 || a1 == 17 || a1 == 19));
    CHECK((a2 == 23 || a2 == 25 || a2 == 29));
    CHECK(interlace_sample(b, 3, seed).terms == a.terms);
  }

  std::vector<int> hits(10, 0);
  for (std::uint64_t seed = 0; seed < 2000; ++seed)
    ++hits[(interlace_sample(b, 0, seed).terms[0] - 10).convert_to<int>()];
  for (int h : hits) CHECK(h > 120);

  // 14 and 15 both have a prime factor at most 3, so the left end is used.
  const auto fb = interlace_sample(make_prefix({14, 16}), 3, 1);
  CHECK(fb.terms == big({14}));

  SequencePrefix huge;
  huge.terms = {BigInt(1) << 100, BigInt(1) << 101};
  const auto h = interlace_sample(huge, 1000, 5);
  CHECK(h.terms[0] >= huge.terms[0]);
  CHECK(h.terms[0] < huge.terms[1]);
  for (Int p = 2; p <= 1000; ++p) CHECK(h.terms[0] % p != 0);
}
