#include "sumlab/ramsey.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <mutex>
#include <set>

#include "sumlab/numtheory.hpp"
#include "sumlab/parallel.hpp"
#include "sumlab/rng.hpp"

namespace sumlab::ramsey {

namespace {

BigInt mp_ceil(const Rational& q) {
  const BigInt num = boost::multiprecision::numerator(q);
  const BigInt den = boost::multiprecision::denominator(q);
  BigInt f = num / den;
  if (num > 0 && f * den != num) ++f;
  return f;
}

Int ceil_double(double v) { return static_cast<Int>(std::ceil(v - 1e-9)); }
Int floor_double(double v) { return static_cast<Int>(std::floor(v + 1e-9)); }

Int block_size(Int x, const Rational& eps, Int C) {
  return ceil_double(static_cast<double>(C) * std::log(static_cast<double>(x)) / to_double(eps));
}

bool distinct_terms(std::vector<Int> v) {
  std::sort(v.begin(), v.end());
  return std::adjacent_find(v.begin(), v.end()) == v.end();
}

struct SubsetCheck {
  bool ok = true;
  Int missing = 0;
};

// Sigma(subset) restricted to [0, hi] must contain [lo, hi].
SubsetCheck covers(const Bitset& mask, const IntervalWitness& target) {
  if (target.length <= 0) return {};
  const auto lo = static_cast<std::size_t>(target.start);
  const std::size_t gap = mask.find_next_clear(lo);
  if (gap == Bitset::npos || gap >= static_cast<std::size_t>(target.end())) return {};
  return {false, static_cast<Int>(gap)};
}

Bitset sums_of(const std::vector<Int>& vals, std::size_t nbits) {
  Bitset b(nbits);
  b.set(0);
  for (Int v : vals)
    if (static_cast<std::size_t>(v) < nbits) b.shift_or(static_cast<std::size_t>(v));
  return b;
}

struct Failure {
  std::uint64_t rank = std::numeric_limits<std::uint64_t>::max();
  std::vector<Int> subset;
  Int missing = 0;
};

std::vector<std::vector<std::size_t>> heuristic_candidates(const std::vector<Int>& v, std::size_t s) {
  std::set<std::vector<std::size_t>> seen;
  std::vector<std::vector<std::size_t>> out;
  auto add = [&](std::vector<std::size_t> idx) {
    if (idx.size() != s) return;
    std::sort(idx.begin(), idx.end());
    if (seen.insert(idx).second) out.push_back(std::move(idx));
  };
  const std::size_t n = v.size();
  std::vector<std::size_t> first, last;
  for (std::size_t i = 0; i < s; ++i) {
    first.push_back(i);
    last.push_back(n - s + i);
  }
  add(first);
  add(last);
  // Smallest s inside each dyadic class.
  for (std::size_t i = 0; i < n;) {
    const auto level = std::bit_width(static_cast<std::uint64_t>(v[i]));
    std::vector<std::size_t> cls;
    std::size_t k = i;
    while (k < n && std::bit_width(static_cast<std::uint64_t>(v[k])) == level) cls.push_back(k++);
    if (cls.size() >= s) add(std::vector<std::size_t>(cls.begin(), cls.begin() + static_cast<std::ptrdiff_t>(s)));
    i = k;
  }
  // Smallest s sharing a small prime divisor.
  for (Int p : nt::primes_up_to(31)) {
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < n && idx.size() < s; ++i)
      if (v[i] % p == 0) idx.push_back(i);
    add(idx);
  }
  return out;
}

std::vector<Int> values_at(const std::vector<Int>& v, const std::vector<std::size_t>& idx) {
  std::vector<Int> out;
  for (std::size_t i : idx) out.push_back(v[i]);
  return out;
}

}  // namespace

Int RamseyBlock::subset_size() const {
  const Rational need = eps * Rational(static_cast<Int>(terms.size()));
  BigInt c = mp_ceil(need);
  return c.convert_to<Int>();
}

RamseyBlock sample_block(Int x, const Rational& eps, Int C, std::optional<Int> w, std::uint64_t seed) {
  if (x < 4) throw InvalidArgument("sample_block needs x >= 4");
  if (eps <= 0 || eps > Rational(1, 2)) throw InvalidArgument("eps must lie in (0, 1/2]");
  if (C < 1) throw InvalidArgument("C must be positive");
  RamseyBlock b;
  b.x = x;
  b.eps = eps;
  b.C = C;
  b.w = w.value_or(floor_double(std::log(static_cast<double>(x)) / 2.0));
  b.seed = seed;
  const auto pool = nt::smooth_free_set(x, b.w);
  if (pool.empty()) throw SamplingError("no integer in [x, 2x) avoids the primes up to w");
  Rng rng(seed, "sample_block");
  const Int size = block_size(x, eps, C);
  for (Int i = 0; i < size; ++i) b.terms.push_back(pool[rng.below(pool.size())]);
  b.distinct = distinct_terms(b.terms);
  const double y = static_cast<double>(C) * static_cast<double>(x) * std::log(static_cast<double>(x));
  const Int lo = ceil_double(y / 4.0);
  const Int hi = floor_double(7.0 * y / 8.0);
  b.target = {lo, hi - lo + 1};
  return b;
}

std::string kind_name(VerifyKind k) {
  switch (k) {
    case VerifyKind::exact: return "exact";
    case VerifyKind::montecarlo: return "montecarlo";
    case VerifyKind::heuristic: return "heuristic";
  }
  return "unknown";
}

std::uint64_t binomial_saturating(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  unsigned __int128 acc = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    acc = acc * (n - k + i) / i;
    if (acc > std::numeric_limits<std::uint64_t>::max()) return std::numeric_limits<std::uint64_t>::max();
  }
  return static_cast<std::uint64_t>(acc);
}

Certificate verify_subsequences(const ElementSet& s_set, Int s, const IntervalWitness& target,
                                const VerifyMode& mode) {
  const auto n = static_cast<Int>(s_set.size());
  if (s < 0 || s > n) throw InvalidArgument("subset size must lie in [0, |S|]");
  if (target.start < 0) throw InvalidArgument("target must be nonnegative");
  const std::vector<Int>& v = s_set.elements();
  const auto us = static_cast<std::size_t>(s);
  const std::size_t nbits = static_cast<std::size_t>(std::max<Int>(target.end(), 1));

  Certificate cert;
  cert.claim = "every s-subset has subset sums covering the target";
  cert.mode = kind_name(mode.kind);
  cert.params = {{"n", std::to_string(n)},
                 {"s", std::to_string(s)},
                 {"target", "[" + std::to_string(target.start) + "," + std::to_string(target.end() - 1) + "]"}};
  Failure fail;
  std::mutex fail_mutex;
  auto record = [&](std::uint64_t rank, std::vector<Int> subset, Int missing) {
    std::lock_guard lock(fail_mutex);
    if (rank < fail.rank) fail = {rank, std::move(subset), missing};
  };
  std::uint64_t total = 0;

  if (mode.kind == VerifyKind::exact) {
    total = binomial_saturating(static_cast<std::uint64_t>(n), us);
    if (total > mode.exact_budget)
      throw ModeError("exact mode would check " + std::to_string(total) + " subsets; use montecarlo");
    // Tasks are the lexicographically ordered prefixes of length p; leaf ranks follow task order.
    const std::size_t p = std::min<std::size_t>(us, 2);
    std::vector<std::vector<std::size_t>> tasks;
    std::vector<std::uint64_t> offset;
    std::uint64_t acc = 0;
    auto tail = [&](std::size_t last) {
      return binomial_saturating(static_cast<std::uint64_t>(n) - last - 1, us - p);
    };
    if (p == 0) {
      tasks.push_back({});
      offset.push_back(0);
    } else if (p == 1) {
      for (std::size_t i = 0; i + us <= v.size(); ++i) {
        tasks.push_back({i});
        offset.push_back(acc);
        acc += tail(i);
      }
    } else {
      for (std::size_t i = 0; i + us <= v.size(); ++i)
        for (std::size_t k = i + 1; k + us - 1 <= v.size(); ++k) {
          tasks.push_back({i, k});
          offset.push_back(acc);
          acc += tail(k);
        }
    }
    std::atomic<std::uint64_t> first_fail_task{std::numeric_limits<std::uint64_t>::max()};
    parallel_for(tasks.size(), mode.threads, [&](std::uint64_t t) {
      if (t > first_fail_task.load()) return;
      const auto& pre = tasks[t];
      std::vector<Bitset> stack(us - pre.size() + 1);
      stack[0] = sums_of(values_at(v, pre), nbits);
      std::vector<std::size_t> chosen(pre);
      std::uint64_t leaf = 0;
      bool stop = false;
      auto dfs = [&](auto&& self, std::size_t start, std::size_t depth) -> void {
        if (stop) return;
        if (chosen.size() == us) {
          const auto c = covers(stack[depth], target);
          if (!c.ok) {
            record(offset[t] + leaf, values_at(v, chosen), c.missing);
            std::uint64_t cur = first_fail_task.load();
            while (t < cur && !first_fail_task.compare_exchange_weak(cur, t)) {
            }
            stop = true;
          }
          ++leaf;
          return;
        }
        for (std::size_t i = start; i + (us - chosen.size()) <= v.size() && !stop; ++i) {
          stack[depth + 1] = stack[depth];
          if (static_cast<std::size_t>(v[i]) < nbits) stack[depth + 1].shift_or(static_cast<std::size_t>(v[i]));
          chosen.push_back(i);
          self(self, i + 1, depth + 1);
          chosen.pop_back();
        }
      };
      dfs(dfs, pre.empty() ? 0 : pre.back() + 1, 0);
    });
  } else {
    std::vector<std::vector<std::size_t>> fixed;
    if (mode.kind == VerifyKind::heuristic || mode.with_heuristic) fixed = heuristic_candidates(v, us);
    const std::uint64_t trials = mode.kind == VerifyKind::montecarlo ? mode.trials : 0;
    total = fixed.size() + trials;
    cert.seed = mode.seed;
    if (mode.kind == VerifyKind::montecarlo) cert.params["trials"] = std::to_string(trials);
    std::atomic<std::uint64_t> first_fail{std::numeric_limits<std::uint64_t>::max()};
    parallel_for(total, mode.threads, [&](std::uint64_t idx) {
      if (idx > first_fail.load()) return;
      std::vector<std::size_t> pick;
      if (idx < fixed.size()) {
        pick = fixed[idx];
      } else {
        Rng rng(mode.seed, "montecarlo", idx - fixed.size());
        std::vector<std::size_t> perm(v.size());
        for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = i;
        for (std::size_t i = 0; i < us; ++i) std::swap(perm[i], perm[i + rng.below(perm.size() - i)]);
        pick.assign(perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(us));
        std::sort(pick.begin(), pick.end());
      }
      const auto vals = values_at(v, pick);
      const auto c = covers(sums_of(vals, nbits), target);
      if (!c.ok) {
        record(idx, vals, c.missing);
        std::uint64_t cur = first_fail.load();
        while (idx < cur && !first_fail.compare_exchange_weak(cur, idx)) {
        }
      }
    });
  }

  cert.pass = fail.rank == std::numeric_limits<std::uint64_t>::max();
  cert.checked = cert.pass ? total : fail.rank + 1;
  cert.vacuous = cert.pass && total == 0;
  if (!cert.pass) {
    cert.witness = fail.subset;
    cert.missing = fail.missing;
  }
  return cert;
}

ConcatPrefix concat_prefix(Int r, Int x0, Int blocks, Int C, std::uint64_t seed) {
  if (r < 2) throw InvalidArgument("r must be at least 2");
  if (x0 < 4) throw InvalidArgument("x0 must be at least 4");
  if (blocks < 1) throw InvalidArgument("need at least one block");
  ConcatPrefix out;
  out.r = r;
  out.x0 = x0;
  out.C = C;
  const Rational eps(1, r);
  for (Int i = 0; i < blocks; ++i) {
    const Int x = x0 << i;
    out.blocks.push_back(sample_block(x, eps, C, std::nullopt, derive_seed(seed, "concat_prefix", static_cast<std::uint64_t>(i))));
    auto sorted = out.blocks.back().terms;
    std::sort(sorted.begin(), sorted.end());
    out.sequence.insert(out.sequence.end(), sorted.begin(), sorted.end());
  }
  for (Int i = 0; i < blocks; ++i) {
    const Int n = x0 << (i + 1);
    const auto count = static_cast<Int>(std::upper_bound(out.sequence.begin(), out.sequence.end(), n) - out.sequence.begin());
    const double ln = std::log(static_cast<double>(n));
    out.density.push_back({n, count, static_cast<double>(count) / (static_cast<double>(r) * ln * ln)});
  }
  auto y = [&](Int i) {
    const double x = static_cast<double>(x0 << i);
    return static_cast<double>(C) * x * std::log(x);
  };
  out.all_overlap = true;
  for (Int i = 0; i + 1 < blocks; ++i) {
    out.overlaps.push_back(y(i + 1) / 4.0 < 7.0 * y(i) / 8.0);
    if (!out.overlaps.back()) out.all_overlap = false;
  }
  out.coverage = out.blocks.front().target;
  for (std::size_t i = 1; i < out.blocks.size(); ++i) {
    const auto& t = out.blocks[i].target;
    if (t.start > out.coverage.end()) break;
    out.coverage.length = std::max(out.coverage.end(), t.end()) - out.coverage.start;
  }
  return out;
}

PolyBlock poly_block(const completeness::BinomialPolynomial& p, Int x, const Rational& eps, Int C,
                     std::optional<Int> w, std::uint64_t seed) {
  const auto verdict = completeness::graham_complete_test(p.to_monomial());
  if (!verdict.complete) throw InvalidArgument("polynomial is not complete");
  if (p.degree() < 1) throw InvalidArgument("polynomial must have degree at least 1");
  if (x < 2) throw InvalidArgument("x must be at least 2");
  if (eps <= 0 || eps > Rational(1, 2)) throw InvalidArgument("eps must lie in (0, 1/2]");
  PolyBlock b;
  std::vector<Rational> scaled;
  for (const auto& a : verdict.scaled) scaled.emplace_back(a);
  b.poly = completeness::BinomialPolynomial(scaled);
  b.scale = verdict.scale;
  b.x = x;
  b.k = p.degree();
  b.eps = eps;
  b.C = C;
  b.seed = seed;
  b.w = w.value_or(floor_double(std::sqrt(std::log(static_cast<double>(x)))));
  const auto primes = nt::primes_up_to(std::max<Int>(b.w, 1));
  auto value = [&](Int y) {
    const Rational q = b.poly.eval(BigInt(y));
    return BigInt(boost::multiprecision::numerator(q));
  };
  for (Int y = x; y * b.k < x * (b.k + 1); ++y) {
    const BigInt py = value(y);
    if (py <= 0) continue;
    bool ok = true;
    for (Int pr : primes)
      if (py % pr == 0) {
        ok = false;
        break;
      }
    if (ok) b.domain.push_back(y);
  }
  if (b.domain.empty()) throw SamplingError("no y in [x, (1+1/k)x) has P(y) free of primes up to w");
  b.density = static_cast<double>(b.domain.size()) / static_cast<double>(x);
  b.shape = b.w >= 3 ? std::pow(std::log(static_cast<double>(b.w)), -static_cast<double>(b.k)) : 1.0;
  Rng rng(seed, "poly_block");
  const Int size = block_size(x, eps, C);
  for (Int i = 0; i < size; ++i) {
    const Int y = b.domain[rng.below(b.domain.size())];
    b.terms.push_back(y);
    const BigInt py = value(y);
    if (py > std::numeric_limits<Int>::max()) throw ResourceError("P(y) does not fit in 64 bits");
    b.values.push_back(py.convert_to<Int>());
  }
  b.distinct = distinct_terms(b.terms);
  const BigInt sub = mp_ceil(eps * Rational(size));
  const double px = to_double(b.poly.eval(BigInt(x)));
  const double base = px * sub.convert_to<double>();
  const Int lo = ceil_double(std::exp(1.0) * base / 9.0);
  const Int hi = floor_double(8.0 * base / 9.0);
  b.target = {lo, hi - lo + 1};
  return b;
}

GrowthCheck iterated_growth_check(const completeness::BinomialPolynomial& p, const ElementSet& t, Int m, Int k,
                                  Int x, std::uint64_t bit_budget) {
  if (k != p.degree() || k < 1) throw InvalidArgument("k must equal the degree of P");
  if (t.empty()) throw InvalidArgument("T must be nonempty");
  if (x < 1 || t.min() < x || t.max() >= 2 * x) throw InvalidArgument("T must lie in [x, 2x)");
  if (m < x || m >= 2 * x) throw InvalidArgument("m must lie in [x, 2x)");
  const auto verdict = completeness::graham_complete_test(p.to_monomial());
  std::vector<Rational> scaled;
  for (const auto& a : verdict.scaled) scaled.emplace_back(a);
  const completeness::BinomialPolynomial q(scaled);
  const BigInt modulus = boost::multiprecision::numerator(q.eval(BigInt(m)));
  if (modulus < 1) throw InvalidArgument("P(m) must be positive");
  if (modulus > BigInt(bit_budget)) throw ResourceError("P(m) exceeds the bit budget");
  GrowthCheck g;
  g.modulus = modulus.convert_to<Int>();
  g.copies = Int{1} << (k - 1);
  std::vector<Int> residues;
  for (Int v : t) {
    BigInt r = boost::multiprecision::numerator(q.eval(BigInt(v))) % modulus;
    if (r < 0) r += modulus;
    residues.push_back(r.convert_to<Int>());
  }
  const auto sum = iterated_sumset(ResidueSet::of(g.modulus, residues), g.copies, g.copies);
  g.count = static_cast<Int>(sum.bits.count());
  const double denom = std::log(static_cast<double>(t.size()) / static_cast<double>(x));
  g.exponent = denom == 0.0 ? 0.0
                            : std::log(static_cast<double>(g.count) / static_cast<double>(g.modulus)) / denom;
  return g;
}

CoolCheck cool_bound(const std::vector<Int>& s, Int m, Int q) {
  if (m < 1 || q < 1) throw InvalidArgument("m and q must be positive");
  std::vector<Int> small;
  for (Int a : s) {
    if (a < 1) throw InvalidArgument("S must hold positive integers");
    if (a <= m) small.push_back(a);
  }
  CoolCheck c;
  const auto mask = subset_sums(ElementSet::multiset(small), m);
  c.exact = static_cast<Int>(mask.count()) - 1;
  c.log2_bound = static_cast<double>(m) / static_cast<double>(q);
  for (Int a : small) c.log2_bound += std::log2(1.0 + std::exp2(-static_cast<double>(a) / static_cast<double>(q)));
  c.holds = c.exact == 0 || std::log2(static_cast<double>(c.exact)) <= c.log2_bound + 1e-9;
  return c;
}

bool HueColoring::blue(Int value) const {
  for (Int j : blue_levels)
    if (value > (Int{1} << j) && value <= (Int{1} << j) * j) return true;
  return false;
}

Int HueColoring::color(Int index, Int value) const { return index % hues() + (blue(value) ? hues() : 0); }

AdversaryReport adversary_coloring(const std::vector<Int>& a, Int r, Int gap, Int j_min, std::uint64_t bit_budget) {
  if (r < 2 || r % 2 != 0) throw InvalidArgument("r must be even and at least 2");
  if (gap < 1 || j_min < 1) throw InvalidArgument("gap and j_min must be positive");
  if (a.empty() || a.front() < 1 || !std::is_sorted(a.begin(), a.end()))
    throw InvalidArgument("A must be a nonempty increasing sequence of positive integers");
  const Int hues = r / 2;
  AdversaryReport rep;
  rep.coloring.r = r;
  const Int top = a.back();
  for (Int j = j_min; j < 58 && (Int{1} << j) * j <= top; ++j) {
    const Int low = Int{1} << j;
    const Int cap = low * j;
    if (static_cast<std::uint64_t>(cap) + 1 > bit_budget) break;
    LevelReport lv;
    lv.j = j;
    std::vector<Int> red_total(static_cast<std::size_t>(hues), 0);
    std::vector<std::vector<Int>> blue(static_cast<std::size_t>(hues));
    for (std::size_t i = 0; i < a.size(); ++i) {
      const auto h = static_cast<std::size_t>(static_cast<Int>(i + 1) % hues);
      if (a[i] <= low) {
        red_total[h] += a[i];
      } else if (a[i] <= cap) {
        blue[h].push_back(a[i]);
      }
    }
    lv.red_max = *std::max_element(red_total.begin(), red_total.end());
    lv.red_strong = lv.red_max > (low / 2) * (j + 2);
    Bitset reach(static_cast<std::size_t>(cap) + 1);
    double log2_sum = -HUGE_VAL;
    for (const auto& cls : blue) {
      reach |= subset_sums(ElementSet::multiset(cls), cap).bits;
      const double lb = cool_bound(cls, cap, low << 4).log2_bound;
      const double hi = std::max(log2_sum, lb);
      log2_sum = hi + std::log2(std::exp2(log2_sum - hi) + std::exp2(lb - hi));
    }
    lv.blue_count = static_cast<Int>(reach.count()) - 1;
    lv.log2_cool = log2_sum;
    lv.blue_strong = lv.blue_count >= low;
    if (lv.weak() && (rep.coloring.blue_levels.empty() || j >= gap * rep.coloring.blue_levels.back()))
      rep.coloring.blue_levels.push_back(j);
    rep.levels.push_back(lv);
  }
  for (std::size_t i = 0; i < a.size(); ++i) rep.colors.push_back(rep.coloring.color(static_cast<Int>(i + 1), a[i]));
  if (rep.coloring.blue_levels.empty()) {
    rep.status = "no witness at this scale";
    return rep;
  }
  rep.status = "ok";
  const Int j_top = rep.coloring.blue_levels.back();
  const Int cap = (Int{1} << j_top) * j_top;
  std::vector<std::vector<Int>> classes(static_cast<std::size_t>(r));
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] <= cap) classes[static_cast<std::size_t>(rep.colors[i])].push_back(a[i]);
  Bitset reach(static_cast<std::size_t>(cap) + 1);
  for (const auto& cls : classes) reach |= subset_sums(ElementSet::multiset(cls), cap).bits;
  for (Int j : rep.coloring.blue_levels) {
    MissedRange mr;
    mr.j = j;
    mr.low = (Int{1} << (j - 1)) * (j + 2);
    mr.high = (Int{1} << j) * j;
    for (Int v = mr.low + 1; v <= mr.high; ++v)
      if (!reach.test(static_cast<std::size_t>(v))) mr.missed.push_back(v);
    rep.missed.push_back(std::move(mr));
  }
  return rep;
}

}  // namespace sumlab::ramsey
