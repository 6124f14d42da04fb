#include "sumlab/extremal.hpp"

#include <algorithm>
#include <atomic>
#include <bitset>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>

#include "sumlab/numtheory.hpp"
#include "sumlab/parallel.hpp"

namespace sumlab::extremal {

namespace {

bool avoids(const std::vector<Int>& set, Int m) {
  if (set.empty()) return m != 0;
  return !subset_sums(ElementSet(set), m).contains(m);
}

}  // namespace

HomogResult homog_pipeline(const ElementSet& a, Int n, Int k_factor, const structure::NiceParams& params,
                           std::uint64_t bit_budget) {
  if (a.empty()) throw InvalidArgument("homog_pipeline needs a nonempty set");
  if (a.max() > n) throw InvalidArgument("A must lie in [n]");
  if (k_factor < 1) throw InvalidArgument("k_factor must be positive");
  HomogResult out;
  HomogCertificate& c = out.attempt;
  c.input = a.elements();
  c.n = n;
  c.k_factor = k_factor;
  const structure::NiceTrace trace = structure::nice_decompose(a, n, params);
  if (trace.status == structure::NiceStatus::nice && !trace.result.empty()) {
    c.reduced = trace.result.elements();
    c.d = trace.d;
    c.nice_status = "nice";
  } else {
    c.reduced = a.elements();
    c.d = 1;
    c.nice_status = "too_lossy";
  }
  const auto size = static_cast<Int>(a.size());
  c.k = (k_factor * n + size - 1) / size;
  const ElementSet reduced(c.reduced);
  const Int cap = std::min(reduced.total(), c.k * reduced.max());
  const BoundedSumTable table = subset_sums_bounded(reduced, c.k, cap, SumMode::at_most, bit_budget);
  c.interval = longest_interval(table.row(c.k));
  c.progression = {c.d * c.interval.start, c.d, c.interval.length, true};
  out.certified = c.interval.length >= n;
  out.status = out.certified ? "ok" : "interval shorter than n";
  return out;
}

std::vector<std::vector<Int>> term_witnesses(const HomogCertificate& c) {
  const std::vector<Int>& items = c.reduced;
  const Int top = c.interval.end() - 1;
  if (c.interval.length <= 0) return {};
  const auto nbits = static_cast<std::size_t>(top) + 1;
  if (static_cast<std::uint64_t>(items.size()) * nbits > kDefaultBitBudget)
    throw ResourceError("witness table exceeds the bit budget");
  constexpr Int kInf = std::numeric_limits<Int>::max() / 2;
  std::vector<Int> fewest(nbits, kInf);
  fewest[0] = 0;
  std::vector<Bitset> took(items.size(), Bitset(nbits));
  for (std::size_t i = 0; i < items.size(); ++i) {
    const Int v = items[i];
    for (Int s = top; s >= v; --s) {
      const auto si = static_cast<std::size_t>(s);
      if (fewest[si - static_cast<std::size_t>(v)] + 1 < fewest[si]) {
        fewest[si] = fewest[si - static_cast<std::size_t>(v)] + 1;
        took[i].set(si);
      }
    }
  }
  std::vector<std::vector<Int>> out;
  for (Int t = c.interval.start; t <= top; ++t) {
    std::vector<Int> w;
    if (fewest[static_cast<std::size_t>(t)] < kInf) {
      Int s = t;
      for (std::size_t i = items.size(); i-- > 0 && s > 0;)
        if (took[i].test(static_cast<std::size_t>(s))) {
          w.push_back(items[i] * c.d);
          s -= items[i];
        }
      std::reverse(w.begin(), w.end());
    }
    out.push_back(std::move(w));
  }
  return out;
}

bool validate(const HomogCertificate& c) {
  if (c.d < 1 || c.progression.diff != c.d || c.progression.first != c.d * c.interval.start ||
      c.progression.count != c.interval.length || c.progression.count < c.n)
    return false;
  const auto witnesses = term_witnesses(c);
  if (static_cast<Int>(witnesses.size()) != c.progression.count) return false;
  for (Int i = 0; i < c.progression.count; ++i) {
    const auto& w = witnesses[static_cast<std::size_t>(i)];
    if (static_cast<Int>(w.size()) > c.k) return false;
    if (std::adjacent_find(w.begin(), w.end()) != w.end()) return false;
    Int sum = 0;
    for (Int x : w) {
      if (x % c.d != 0 || !std::binary_search(c.input.begin(), c.input.end(), x)) return false;
      sum += x;
    }
    if (sum != c.progression.term(i)) return false;
  }
  return true;
}

namespace {

using GMask = std::bitset<320>;

struct GTask {
  Int m = 0;
  GMask limit;
  std::atomic<Int>* global = nullptr;
  Int best = 0;
  std::vector<Int> best_set;
  std::vector<Int> cur;
  std::uint64_t nodes = 0;

  void dfs(Int x, const GMask& mask) {
    ++nodes;
    const auto size = static_cast<Int>(cur.size());
    if (size > best) {
      best = size;
      best_set = cur;
      Int g = global->load();
      while (size > g && !global->compare_exchange_weak(g, size)) {
      }
    }
    if (x < 1) return;
    if (size + x <= best || size + x < global->load()) return;
    if (x != m) {
      const GMask next = (mask | (mask << static_cast<std::size_t>(x))) & limit;
      if (!next.test(static_cast<std::size_t>(m))) {
        cur.push_back(x);
        dfs(x - 1, next);
        cur.pop_back();
      }
    }
    dfs(x - 1, mask);
  }
};

}  // namespace

GResult exact_g(Int n, Int m, unsigned threads) {
  if (n < 1 || m < 1) throw InvalidArgument("exact_g needs n, m >= 1");
  if (n > kExactGMaxN) throw SizeError("exact_g is limited to n <= " + std::to_string(kExactGMaxN));
  GResult out;
  if (2 * m > n * (n + 1)) {
    out.value = n;
    out.witness.resize(static_cast<std::size_t>(n));
    std::iota(out.witness.begin(), out.witness.end(), Int{1});
    return out;
  }
  GMask limit;
  for (Int s = 0; s <= m; ++s) limit.set(static_cast<std::size_t>(s));
  std::atomic<Int> global{0};
  // Task i fixes n - i as the largest element.
  std::vector<GTask> tasks(static_cast<std::size_t>(n));
  parallel_for(tasks.size(), threads, [&](std::uint64_t i) {
    GTask& t = tasks[i];
    const Int top = n - static_cast<Int>(i);
    t.m = m;
    t.limit = limit;
    t.global = &global;
    if (top == m) return;
    GMask mask;
    mask.set(0);
    mask |= (mask << static_cast<std::size_t>(top)) & limit;
    t.cur = {top};
    t.dfs(top - 1, mask);
  });
  for (const auto& t : tasks) {
    out.nodes += t.nodes;
    if (t.best > out.value) {
      out.value = t.best;
      out.witness = t.best_set;
    }
  }
  std::sort(out.witness.begin(), out.witness.end());
  if (!avoids(out.witness, m)) throw std::logic_error("exact_g witness reaches m");
  return out;
}

std::vector<Construction> g_constructions(Int n, Int m, bool force_interval) {
  if (n < 2 || m < 1) throw InvalidArgument("g_constructions needs n >= 2 and m >= 1");
  std::vector<Construction> out;

  Construction a{"multiples+extras", {}, true, false, ""};
  const Int s = nt::snd(m);
  for (Int t = s; t <= n; t += s) a.set.push_back(t);
  Int extras = 0;
  for (Int t = n; t >= 1 && extras < s - 2; --t) {
    const Int r = t % s;
    if (r != 1 && r != s - 1) continue;
    std::vector<Int> trial = a.set;
    trial.push_back(t);
    if (avoids(trial, m)) {
      a.set = std::move(trial);
      ++extras;
    }
  }
  std::sort(a.set.begin(), a.set.end());
  if (extras < s - 2) a.reason = std::to_string(extras) + " of " + std::to_string(s - 2) + " extras fit";
  a.verified = avoids(a.set, m);
  out.push_back(std::move(a));

  Construction b{"small-integers", {}, true, false, ""};
  Int len = 0;
  while ((2 * (len + 1) + 1) * (2 * (len + 1) + 1) <= 8 * m) ++len;
  for (Int t = 1; t <= std::min(len, n); ++t) b.set.push_back(t);
  b.verified = avoids(b.set, m);
  out.push_back(std::move(b));

  Construction c{"interval", {}, true, false, ""};
  const double nd = static_cast<double>(n);
  c.applicable = 8 * n < m && static_cast<double>(m) < nd * std::log(nd) / 8;
  if (!c.applicable) c.reason = "outside 8n < m < n log(n) / 8";
  if (c.applicable || force_interval) {
    const Int h = n * n / (2 * m);
    const Int top = std::min(n, 2 * m * h / n);
    if (h < 1 || top - h < 1) {
      c.reason = "interval [n' - h, n'] leaves [n]";
    } else {
      for (Int t = top - h; t <= top; ++t) c.set.push_back(t);
      c.verified = avoids(c.set, m);
      if (!c.verified) {
        c.set.clear();
        c.reason = "subset sums reach m";
      }
    }
  }
  out.push_back(std::move(c));
  return out;
}

namespace {

using HMask = unsigned __int128;

// Size-k subsets of [n] as bitmasks, in lexicographic order of their sorted elements.
std::vector<std::uint32_t> combinations_lex(Int n, Int k) {
  std::vector<std::uint32_t> out;
  std::function<void(Int, Int, std::uint32_t)> rec = [&](Int next, Int left, std::uint32_t mask) {
    if (left == 0) {
      out.push_back(mask);
      return;
    }
    for (Int v = next; v <= n - left + 1; ++v) rec(v + 1, left - 1, mask | (std::uint32_t{1} << (v - 1)));
  };
  rec(1, k, 0);
  return out;
}

std::vector<Int> members(std::uint32_t mask) {
  std::vector<Int> out;
  for (Int v = 1; mask != 0; ++v, mask >>= 1)
    if (mask & 1U) out.push_back(v);
  return out;
}

}  // namespace

HResult exact_H(Int n) {
  if (n < 1) throw InvalidArgument("exact_H needs n >= 1");
  if (n > kExactHMaxN) throw SizeError("exact_H is limited to n <= " + std::to_string(kExactHMaxN));
  std::vector<HMask> sums(std::size_t{1} << n);
  sums[0] = 1;
  for (std::uint32_t s = 1; s < sums.size(); ++s) {
    const int top = 31 - std::countl_zero(s);
    sums[s] = sums[s & ~(1U << top)] | (sums[s & ~(1U << top)] << (top + 1));
  }
  for (Int h = n / 2; h >= 1; --h) {
    const auto combos = combinations_lex(n, h);
    for (std::size_t i = 0; i < combos.size(); ++i)
      for (std::size_t j = i + 1; j < combos.size(); ++j) {
        if (combos[i] & combos[j]) continue;
        if ((sums[combos[i]] & sums[combos[j]]) != 1) continue;
        return {h, members(combos[i]), members(combos[j])};
      }
  }
  return {};
}

namespace {

struct hSearch {
  Int n = 0;
  Int cols = 0;
  // count[j * cols + s]: j-subsets of the chosen set with sum s.
  std::vector<std::int64_t> count;
  std::vector<Int> chosen;
  std::vector<Int> best;
  std::uint64_t nodes = 0;

  std::int64_t at(Int j, Int s) const {
    if (j < 0 || s < 0 || s >= cols) return 0;
    return count[static_cast<std::size_t>(j * cols + s)];
  }

  // No chosen a equals the mean of x and j >= 1 other chosen elements.
  bool admissible(Int x) const {
    const auto size = static_cast<Int>(chosen.size());
    for (Int a : chosen)
      for (Int j = 1; j <= size - 1; ++j) {
        const Int s = (j + 1) * a - x;
        if (s < 0) continue;
        std::int64_t without = 0;
        for (Int i = 0; i <= j; ++i) without += (i % 2 ? -1 : 1) * at(j - i, s - i * a);
        if (without > 0) return false;
      }
    return true;
  }

  void add(Int x) {
    const auto size = static_cast<Int>(chosen.size());
    for (Int j = size + 1; j >= 1; --j)
      for (Int s = cols - 1; s >= x; --s) count[static_cast<std::size_t>(j * cols + s)] += at(j - 1, s - x);
    chosen.push_back(x);
  }

  void remove(Int x) {
    chosen.pop_back();
    const auto size = static_cast<Int>(chosen.size());
    for (Int j = 1; j <= size + 1; ++j)
      for (Int s = x; s < cols; ++s) count[static_cast<std::size_t>(j * cols + s)] -= at(j - 1, s - x);
  }

  void dfs(Int x) {
    ++nodes;
    const auto size = static_cast<Int>(chosen.size());
    if (x > n) {
      if (size > static_cast<Int>(best.size())) best = chosen;
      return;
    }
    if (size + (n - x + 1) <= static_cast<Int>(best.size())) return;
    if (admissible(x)) {
      add(x);
      dfs(x + 1);
      remove(x);
    }
    dfs(x + 1);
  }
};

}  // namespace

hResult exact_h(Int n) {
  if (n < 1) throw InvalidArgument("exact_h needs n >= 1");
  if (n > kExacthMaxN) throw SizeError("exact_h is limited to n <= " + std::to_string(kExacthMaxN));
  hSearch hs;
  hs.n = n;
  hs.cols = n * (n + 1) / 2 + 1;
  hs.count.assign(static_cast<std::size_t>((n + 1) * hs.cols), 0);
  hs.count[0] = 1;
  hs.dfs(1);
  return {static_cast<Int>(hs.best.size()), hs.best, hs.nodes};
}

StrausCheck straus_check(Int n) {
  StrausCheck out;
  out.n = n;
  out.h = exact_h(n).value;
  out.H = exact_H(n).value;
  out.holds = out.h <= 2 * out.H + 2;
  return out;
}

}  // namespace sumlab::extremal
