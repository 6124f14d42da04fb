#include "sumlab/structure.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>

#include "sumlab/numtheory.hpp"
#include "sumlab/rng.hpp"

namespace sumlab::structure {

namespace {

// nonmult[v] = elements not divisible by v, for v in [0, max]; entries 0 and 1 unused.
std::vector<Int> non_multiple_counts(const ElementSet& a) {
  if (a.empty()) return {};
  const Int top = a.max();
  std::vector<Int> present(static_cast<std::size_t>(top) + 1, 0);
  for (Int v : a) ++present[static_cast<std::size_t>(v)];
  std::vector<Int> out(static_cast<std::size_t>(top) + 1, 0);
  const auto size = static_cast<Int>(a.size());
  for (Int v = 2; v <= top; ++v) {
    Int mult = 0;
    for (Int j = v; j <= top; j += v) mult += present[static_cast<std::size_t>(j)];
    out[static_cast<std::size_t>(v)] = size - mult;
  }
  return out;
}

Int non_multiples(const ElementSet& a, Int d) {
  Int c = 0;
  for (Int v : a)
    if (v % d != 0) ++c;
  return c;
}

}  // namespace

DiversityReport is_k_diverse(const ElementSet& a, Int k, bool with_counts) {
  if (k < 1) throw InvalidArgument("k must be at least 1");
  DiversityReport rep;
  rep.k = k;
  const auto counts = non_multiple_counts(a);
  for (std::size_t v = 2; v < counts.size(); ++v)
    if (counts[v] < k) {
      rep.diverse = false;
      rep.witness = static_cast<Int>(v);
      break;
    }
  // Past max(A) every element is a non-multiple.
  if (rep.diverse && static_cast<Int>(a.size()) < k) {
    rep.diverse = false;
    rep.witness = std::max<Int>(2, static_cast<Int>(counts.size()));
  }
  if (with_counts) rep.counts = counts;
  return rep;
}

DecompositionTrace diverse_decompose(const ElementSet& a, Int k, Int budget) {
  if (k < 1 || budget < 0) throw InvalidArgument("diverse_decompose needs k >= 1 and budget >= 0");
  DecompositionTrace trace;
  ElementSet cur = a;
  const Int max_steps = a.empty() ? 0 : static_cast<Int>(std::bit_width(static_cast<std::uint64_t>(a.max()))) - 1;
  while (true) {
    const auto rep = is_k_diverse(cur, k, true);
    if (rep.diverse) {
      trace.status = DecompositionStatus::diverse;
      break;
    }
    std::optional<Int> best;
    const auto size = static_cast<Int>(cur.size());
    for (std::size_t v = 2; v < rep.counts.size(); ++v) {
      const Int c = rep.counts[v];
      if (c >= k || c > budget || c >= size) continue;
      if (!best || c <= rep.counts[static_cast<std::size_t>(*best)]) best = static_cast<Int>(v);
    }
    if (!best) {
      trace.status = DecompositionStatus::stuck;
      break;
    }
    DecompositionStep step{*best, {}};
    std::vector<Int> next;
    for (Int x : cur) {
      if (x % *best == 0)
        next.push_back(x / *best);
      else
        step.removed.push_back(x);
    }
    trace.divisor *= *best;
    trace.steps.push_back(std::move(step));
    cur = ElementSet(std::move(next), a.is_multiset());
    if (static_cast<Int>(trace.steps.size()) > max_steps || trace.divisor > a.max())
      throw std::logic_error("decomposition exceeded its step bound");
  }
  trace.q = cur;
  return trace;
}

FullModReport sigma_mod_full(const ElementSet& a, Int d) {
  if (d < 1) throw InvalidArgument("d must be at least 1");
  FullModReport rep;
  rep.mask = subset_sums_mod(a, d);
  rep.full = rep.mask.count() == static_cast<std::size_t>(d);
  rep.hypotheses_hold = true;
  for (Int e : nt::divisors(d)) {
    if (e < 2) continue;
    const bool ok = non_multiples(a, e) >= e - 1;
    rep.divisor_checks.emplace_back(e, ok);
    rep.hypotheses_hold = rep.hypotheses_hold && ok;
  }
  if (rep.hypotheses_hold && !rep.full) throw std::logic_error("mod-d sums are not full despite the hypotheses");
  rep.second_clause_applies = d >= 2 && non_multiples(a, d) >= d - 1;
  for (Int e : nt::divisors(d)) {
    if (e >= d) continue;
    bool all = true;
    for (Int x = 0; x < d && all; x += e) all = rep.mask.contains(x);
    if (all) {
      rep.has_nonzero_subgroup = true;
      break;
    }
  }
  if (rep.second_clause_applies && !rep.has_nonzero_subgroup)
    throw std::logic_error("mod-d sums miss every non-zero subgroup despite the hypothesis");
  return rep;
}

NiceParams NiceParams::asymptotic(Int n) {
  const double ln = std::log(static_cast<double>(n));
  const Int ell = Int{1} << 15;
  return {ell, 512.0 * static_cast<double>(ell) * ln * ln, 64.0 * static_cast<double>(ell),
          64.0 * static_cast<double>(ell) * ln};
}

std::optional<Int> divisor_violation(const ElementSet& a, Int n, const NiceParams& params) {
  if (a.empty()) return std::nullopt;
  const Int top = 8 * params.ell * n / static_cast<Int>(a.size());
  for (Int d = 2; d <= top; ++d)
    if (static_cast<double>(non_multiples(a, d)) <= params.t1 + params.t2 * static_cast<double>(d)) return d;
  return std::nullopt;
}

std::vector<Int> sparse_dyadic_levels(const ElementSet& a, const NiceParams& params) {
  std::vector<Int> per_level(65, 0);
  for (Int v : a) ++per_level[static_cast<std::size_t>(std::bit_width(static_cast<std::uint64_t>(v)))];
  std::vector<Int> out;
  for (std::size_t j = 1; j < per_level.size(); ++j)
    if (per_level[j] > 0 && static_cast<double>(per_level[j]) < params.density) out.push_back(static_cast<Int>(j));
  return out;
}

bool is_nice(const ElementSet& a, Int n, const NiceParams& params) {
  return !divisor_violation(a, n, params) && sparse_dyadic_levels(a, params).empty();
}

NiceTrace nice_decompose(const ElementSet& a, Int n, const NiceParams& params) {
  if (!a.empty() && a.max() > n) throw InvalidArgument("A must lie in [n]");
  NiceTrace trace;
  trace.params = params;
  ElementSet cur = a;
  while (true) {
    if (2 * cur.size() < a.size() || cur.empty()) {
      trace.status = NiceStatus::too_lossy;
      break;
    }
    if (auto d = divisor_violation(cur, n, params)) {
      NiceStep step{"divisor", *d, {}};
      std::vector<Int> next;
      for (Int x : cur) {
        if (x % *d == 0)
          next.push_back(x / *d);
        else
          step.removed.push_back(x);
      }
      trace.d *= *d;
      trace.log.push_back(std::move(step));
      cur = ElementSet(std::move(next));
      continue;
    }
    const auto sparse = sparse_dyadic_levels(cur, params);
    if (sparse.empty()) {
      trace.status = NiceStatus::nice;
      break;
    }
    NiceStep step{"sparse-dyadic", 1, {}};
    std::vector<Int> next;
    for (Int x : cur) {
      const auto lvl = static_cast<Int>(std::bit_width(static_cast<std::uint64_t>(x)));
      if (std::binary_search(sparse.begin(), sparse.end(), lvl))
        step.removed.push_back(x);
      else
        next.push_back(x);
    }
    trace.log.push_back(std::move(step));
    cur = ElementSet(std::move(next));
  }
  trace.result = cur;
  for (Int x : cur)
    if (!a.contains(trace.d * x)) throw std::logic_error("reduced set does not lift into the input");
  if (trace.status == NiceStatus::nice && !is_nice(cur, n, params))
    throw std::logic_error("nice_decompose returned a set that is not nice");
  return trace;
}

const char* phase_name(Phase p) {
  switch (p) {
    case Phase::growth:
      return "growth";
    case Phase::unsaturated:
      return "unsaturated";
    case Phase::saturated:
      return "saturated";
  }
  return "?";
}

Int residue_gcd(Int b, const std::vector<Int>& residues) {
  Int g = b;
  for (Int r : residues) g = std::gcd(g, r);
  return g;
}

Phase classify_phase(const ResidueSet& sigma, Int remaining, Int d, const PhaseParams& params) {
  const Int b = sigma.modulus;
  std::vector<Int> section(static_cast<std::size_t>(d), 0);
  sigma.bits.for_each([&](std::size_t x) { ++section[x % static_cast<std::size_t>(d)]; });
  bool growth = false;
  bool unsaturated = false;
  for (Int s : section) {
    if (s == 0) continue;
    if (params.growth_div * s <= remaining) growth = true;
    if (params.growth_div * s > remaining && params.saturation_div * s * d < b) unsaturated = true;
  }
  if (growth) return Phase::growth;
  return unsaturated ? Phase::unsaturated : Phase::saturated;
}

bool structure_hypotheses(Int b, const std::vector<Int>& residues) {
  const auto m = static_cast<Int>(residues.size());
  const double lb = std::log(static_cast<double>(b));
  if (!(static_cast<double>(m) > 80 * lb * lb && m <= b)) return false;
  std::vector<Int> sorted = residues;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) return false;
  for (Int d : nt::divisors(b)) {
    if (d < 2 || d * m > 4 * b) continue;
    Int non = 0;
    for (Int r : residues)
      if (r % d != 0) ++non;
    if (static_cast<double>(non) < 64 * lb * lb + 8.0 * static_cast<double>(d)) return false;
  }
  return true;
}

PhaseLog phase_process(Int b, const std::vector<Int>& residues, const PhaseParams& params) {
  if (b < 2) throw InvalidArgument("phase_process needs b >= 2");
  if (residues.empty()) throw InvalidArgument("phase_process needs a nonempty multiset");
  if (params.split <= 0 || params.split >= 1) throw InvalidArgument("split ratio must lie in (0,1)");
  std::vector<Int> a;
  for (Int r : residues) a.push_back(((r % b) + b) % b);
  const auto m = static_cast<Int>(a.size());

  PhaseLog log;
  log.b = b;
  const Int default_k = (1280 * b + m - 1) / m;
  log.k = params.k_cap.value_or(default_k);

  Rng rng(params.seed, "phase_process");
  std::vector<Int> order(a.size());
  std::iota(order.begin(), order.end(), 0);
  rng.shuffle(order);
  const Rational scaled = params.split * m;
  const BigInt floor_size = boost::multiprecision::numerator(scaled) / boost::multiprecision::denominator(scaled);
  const auto first_size = floor_size.convert_to<std::size_t>();
  for (std::size_t i = 0; i < order.size(); ++i)
    (i < first_size ? log.first_part : log.second_part).push_back(a[static_cast<std::size_t>(order[i])]);

  ResidueSet sigma = ResidueSet::of(b, log.second_part);
  std::vector<Int> remaining = log.first_part;
  std::vector<Int> chosen;
  const Int steps = std::min<Int>(static_cast<Int>(remaining.size()), log.k);
  Int prev_d = 1;
  for (Int i = 1; i <= steps; ++i) {
    const Int d = residue_gcd(b, remaining);
    if (d % prev_d != 0) throw std::logic_error("step divisors must form a divisor chain");
    prev_d = d;
    const Phase phase = classify_phase(sigma, static_cast<Int>(remaining.size()), d, params);
    ResidueSet base = sigma;
    if (phase == Phase::growth) {
      std::vector<Int> divisible;
      for (Int c : chosen)
        if (c % d == 0) divisible.push_back(c);
      base = ResidueSet::of(b, {0});
      for (Int c : divisible) base.bits |= base.bits.rotated(static_cast<std::size_t>(c));
    }
    std::vector<Int> candidates = remaining;
    std::sort(candidates.begin(), candidates.end());
    candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());
    Int best = candidates.front();
    Int best_gain = -1;
    for (Int c : candidates) {
      Bitset grown = base.bits.rotated(static_cast<std::size_t>(c));
      grown |= base.bits;
      const auto gain = static_cast<Int>(grown.count() - base.bits.count());
      if (gain > best_gain) {
        best_gain = gain;
        best = c;
      }
    }
    PhaseStep step{i, d, phase, best, static_cast<Int>(sigma.size()), 0};
    sigma.bits |= sigma.bits.rotated(static_cast<std::size_t>(best));
    step.sigma_after = static_cast<Int>(sigma.size());
    log.steps.push_back(step);
    chosen.push_back(best);
    remaining.erase(std::find(remaining.begin(), remaining.end(), best));
  }
  log.final_mask = sigma;
  log.hypotheses_hold = structure_hypotheses(b, a);
  log.bound = std::min<Int>((m * m + 255) / 256, (b + 3) / 4);
  if (log.hypotheses_hold && steps >= std::min<Int>(m / 2, default_k))
    log.bound_holds = static_cast<Int>(sigma.size()) >= log.bound;
  return log;
}

}  // namespace sumlab::structure
