#include "sumlab/sumset.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <numeric>
#include <sstream>

namespace sumlab {

namespace {

std::size_t checked_bits(Int cap, std::uint64_t budget) {
  if (cap < 0) throw InvalidArgument("cap must be non-negative");
  if (static_cast<std::uint64_t>(cap) + 1 > budget)
    throw ResourceError("bitmap of " + std::to_string(cap + 1) + " bits exceeds budget of " +
                        std::to_string(budget) + " bits");
  return static_cast<std::size_t>(cap) + 1;
}

Int mod_floor(Int a, Int m) {
  Int r = a % m;
  return r < 0 ? r + m : r;
}

}  // namespace

ElementSet::ElementSet(std::vector<Int> values, bool multiset) : elems_(std::move(values)), multiset_(multiset) {
  std::sort(elems_.begin(), elems_.end());
  if (!elems_.empty() && elems_.front() < 1) throw InvalidArgument("elements must be positive");
  if (!multiset_ && std::adjacent_find(elems_.begin(), elems_.end()) != elems_.end())
    throw InvalidArgument("duplicate element in a set");
}

Int ElementSet::total() const {
  Int t = 0;
  for (Int v : elems_)
    if (__builtin_add_overflow(t, v, &t)) throw ResourceError("element sum overflows 64 bits");
  return t;
}

bool ElementSet::contains(Int v) const { return std::binary_search(elems_.begin(), elems_.end(), v); }

ElementSet parse_element_set(std::istream& in, bool multiset) {
  std::vector<Int> values;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const auto b = line.find_first_not_of(" \t\r");
    if (b == std::string::npos) continue;
    const auto e = line.find_last_not_of(" \t\r");
    const char* first = line.data() + b;
    const char* last = line.data() + e + 1;
    Int v = 0;
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last || v < 1)
      throw InvalidArgument("line " + std::to_string(lineno) + ": expected a positive integer");
    values.push_back(v);
  }
  return ElementSet(std::move(values), multiset);
}

ElementSet read_element_set(const std::string& path, bool multiset) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open " + path);
  return parse_element_set(in, multiset);
}

std::string format_element_set(const ElementSet& a) {
  std::ostringstream out;
  for (Int v : a) out << v << '\n';
  return out.str();
}

std::vector<Int> SumMask::values() const {
  std::vector<Int> out;
  bits.for_each([&](std::size_t i) { out.push_back(static_cast<Int>(i)); });
  return out;
}

SumMask BoundedSumTable::union_upto(Int k) const {
  SumMask out = rows.at(0);
  for (Int j = 1; j <= k && j <= h; ++j) out.bits |= rows[static_cast<std::size_t>(j)].bits;
  return out;
}

SumMask subset_sums(const ElementSet& a, std::optional<Int> cap, std::uint64_t bit_budget) {
  const Int c = cap ? *cap : a.total();
  SumMask mask{c, std::nullopt, Bitset(checked_bits(c, bit_budget))};
  mask.bits.set(0);
  Int reach = 0;
  for (Int v : a) {
    if (v > c) break;
    reach = std::min(c, reach + v);
    mask.bits.shift_or(static_cast<std::size_t>(v), static_cast<std::size_t>(reach));
  }
  return mask;
}

std::optional<std::vector<Int>> subset_sum_witness(const ElementSet& a, Int target, std::uint64_t bit_budget) {
  if (target < 0) return std::nullopt;
  const std::size_t nbits = checked_bits(target, bit_budget);
  Bitset bits(nbits);
  bits.set(0);
  std::vector<std::int32_t> pred(nbits, -1);
  Int reach = 0;
  for (std::size_t i = 0; i < a.size() && !bits.test(static_cast<std::size_t>(target)); ++i) {
    const Int v = a[i];
    if (v > target) break;
    reach = std::min(target, reach + v);
    const auto before = bits.words();
    bits.shift_or(static_cast<std::size_t>(v), static_cast<std::size_t>(reach));
    const auto& after = bits.words();
    for (std::size_t w = 0; w < after.size(); ++w) {
      std::uint64_t fresh = after[w] & ~before[w];
      while (fresh != 0) {
        pred[w * 64 + static_cast<std::size_t>(std::countr_zero(fresh))] = static_cast<std::int32_t>(i);
        fresh &= fresh - 1;
      }
    }
  }
  if (!bits.test(static_cast<std::size_t>(target))) return std::nullopt;
  std::vector<Int> out;
  for (Int s = target; s > 0;) {
    const Int v = a[static_cast<std::size_t>(pred[static_cast<std::size_t>(s)])];
    out.push_back(v);
    s -= v;
  }
  std::reverse(out.begin(), out.end());
  return out;
}

SumMask subset_sums_mod(const ElementSet& a, Int m, std::uint64_t bit_budget) {
  if (m < 1) throw InvalidArgument("modulus must be at least 1");
  SumMask mask{m - 1, m, Bitset(checked_bits(m - 1, bit_budget))};
  mask.bits.set(0);
  for (Int v : a) {
    const Int r = v % m;
    if (r == 0) continue;
    mask.bits |= mask.bits.rotated(static_cast<std::size_t>(r));
    if (mask.count() == static_cast<std::size_t>(m)) break;
  }
  return mask;
}

BoundedSumTable subset_sums_bounded(const ElementSet& a, Int h, Int cap, SumMode mode, std::uint64_t bit_budget) {
  if (h < 0) throw InvalidArgument("cardinality bound must be non-negative");
  const std::size_t nbits = checked_bits(cap, bit_budget);
  if (static_cast<std::uint64_t>(h + 1) * nbits > bit_budget)
    throw ResourceError("bounded table exceeds bit budget");
  BoundedSumTable t{h, cap, mode, {}};
  t.rows.assign(static_cast<std::size_t>(h) + 1, SumMask{cap, std::nullopt, Bitset(nbits)});
  t.rows[0].bits.set(0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    const Int v = a[i];
    if (v > cap) break;
    const Int top = std::min<Int>(h, static_cast<Int>(i) + 1);
    for (Int k = top; k >= 1; --k)
      t.rows[static_cast<std::size_t>(k)].bits.or_shifted(t.rows[static_cast<std::size_t>(k - 1)].bits,
                                                          static_cast<std::size_t>(v));
  }
  if (mode == SumMode::at_most)
    for (std::size_t k = 1; k < t.rows.size(); ++k) t.rows[k].bits |= t.rows[k - 1].bits;
  return t;
}

std::optional<std::vector<Int>> bounded_sum_witness(const ElementSet& a, Int h, Int target,
                                                    std::uint64_t bit_budget) {
  if (target < 0 || h < 0) return std::nullopt;
  const std::size_t nbits = checked_bits(target, bit_budget);
  if (static_cast<std::uint64_t>(h + 1) * nbits > bit_budget)
    throw ResourceError("witness table exceeds bit budget");
  const auto rows = static_cast<std::size_t>(h) + 1;
  std::vector<Bitset> row(rows, Bitset(nbits));
  std::vector<std::int32_t> pred(rows * nbits, -1);
  row[0].set(0);
  Bitset tmp(nbits);
  for (std::size_t i = 0; i < a.size(); ++i) {
    const Int v = a[i];
    if (v > target) break;
    const std::size_t top = std::min<std::size_t>(rows - 1, i + 1);
    for (std::size_t k = top; k >= 1; --k) {
      tmp.clear();
      tmp.or_shifted(row[k - 1], static_cast<std::size_t>(v));
      const auto& nw = tmp.words();
      const auto& ow = row[k].words();
      for (std::size_t w = 0; w < nw.size(); ++w) {
        std::uint64_t fresh = nw[w] & ~ow[w];
        while (fresh != 0) {
          pred[k * nbits + w * 64 + static_cast<std::size_t>(std::countr_zero(fresh))] = static_cast<std::int32_t>(i);
          fresh &= fresh - 1;
        }
      }
      row[k] |= tmp;
    }
  }
  const auto t = static_cast<std::size_t>(target);
  for (std::size_t c = 0; c < rows; ++c) {
    if (!row[c].test(t)) continue;
    std::vector<Int> out;
    std::size_t s = t;
    for (std::size_t k = c; k > 0; --k) {
      const Int v = a[static_cast<std::size_t>(pred[k * nbits + s])];
      out.push_back(v);
      s -= static_cast<std::size_t>(v);
    }
    std::reverse(out.begin(), out.end());
    return out;
  }
  return std::nullopt;
}

IntervalWitness longest_interval(const SumMask& mask, std::optional<Int> from) {
  if (mask.modulus) throw InvalidArgument("longest_interval needs a non-modular mask");
  const Int begin = std::max<Int>(0, from.value_or(0));
  IntervalWitness best{begin, 0};
  if (begin > mask.cap) return best;
  const auto& bits = mask.bits;
  std::size_t pos = bits.find_next(static_cast<std::size_t>(begin));
  while (pos != Bitset::npos) {
    std::size_t end = bits.find_next_clear(pos);
    if (end == Bitset::npos) end = bits.size();
    const auto len = static_cast<Int>(end - pos);
    if (len > best.length) best = {static_cast<Int>(pos), len};
    if (end >= bits.size()) break;
    pos = bits.find_next(end);
  }
  return best;
}

std::optional<ProgressionWitness> find_homog_progression(const SumMask& mask, Int min_len) {
  if (mask.modulus) throw InvalidArgument("find_homog_progression needs a non-modular mask");
  if (min_len < 2) throw InvalidArgument("min_len must be at least 2");
  std::optional<ProgressionWitness> best;
  for (Int d = 1;; ++d) {
    const Int max_terms = mask.cap / d;
    if (max_terms < min_len) break;
    if (best && max_terms <= best->count) break;
    Int run_start = 0;
    Int run_len = 0;
    auto close_run = [&] {
      if (run_len >= min_len && (!best || run_len > best->count))
        best = ProgressionWitness{run_start * d, d, run_len, true};
      run_len = 0;
    };
    for (Int j = 1; j <= max_terms; ++j) {
      if (mask.contains(j * d)) {
        if (run_len == 0) run_start = j;
        ++run_len;
      } else if (run_len > 0) {
        close_run();
      }
    }
    if (run_len > 0) close_run();
  }
  return best;
}

bool validates(const IntervalWitness& w, const SumMask& mask) {
  if (w.length < 0 || w.start < 0) return false;
  for (Int s = w.start; s < w.end(); ++s)
    if (!mask.contains(s)) return false;
  return true;
}

bool validates(const ProgressionWitness& w, const SumMask& mask) {
  if (w.diff < 1 || w.count < 0) return false;
  if (w.homogeneous != (w.first % w.diff == 0)) return false;
  for (Int i = 0; i < w.count; ++i)
    if (!mask.contains(w.term(i))) return false;
  return true;
}

IntervalWitness graham_extend(const IntervalWitness& interval, const ElementSet& extras) {
  Int reach = interval.length;
  for (std::size_t i = 0; i < extras.size(); ++i) {
    if (extras[i] > reach)
      throw PreconditionError(i, extras[i] - reach,
                              "extra element " + std::to_string(extras[i]) + " at index " + std::to_string(i) +
                                  " exceeds the covered length " + std::to_string(reach));
    reach += extras[i];
  }
  return {interval.start, reach};
}

IntervalWitness lev_interval(const std::vector<std::vector<Int>>& parts, Int q, Int n) {
  if (n < 3) throw HypothesisError("n>=3", "n must be at least 3");
  if (q < 1) throw HypothesisError("q>=1", "q must be at least 1");
  const auto ell = static_cast<Int>(parts.size());
  const Int need = 2 * ((q - 1 + n - 3) / (n - 2));
  if (ell < 1 || ell < need)
    throw HypothesisError("ell", "need at least " + std::to_string(std::max<Int>(need, 1)) + " parts, got " +
                                     std::to_string(ell));
  Int offset = 0;
  Int width = 0;
  std::vector<std::vector<Int>> normalized;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    std::vector<Int> p = parts[i];
    std::sort(p.begin(), p.end());
    p.erase(std::unique(p.begin(), p.end()), p.end());
    const std::string tag = "part " + std::to_string(i);
    if (static_cast<Int>(p.size()) < n) throw HypothesisError("part-size", tag + " has fewer than n elements");
    if (p.back() - p.front() > q) throw HypothesisError("part-width", tag + " spans more than q+1 integers");
    Int g = 0;
    for (Int v : p) g = std::gcd(g, v - p.front());
    if (g != 1) throw HypothesisError("part-progression", tag + " lies in a progression of difference > 1");
    const Int base = p.front();
    offset += base;
    for (Int& v : p) v -= base;
    width += p.back();
    normalized.push_back(std::move(p));
  }
  Bitset acc(static_cast<std::size_t>(width) + 1);
  acc.set(0);
  for (const auto& p : normalized) {
    Bitset next(acc.size());
    for (Int v : p) next.or_shifted(acc, static_cast<std::size_t>(v));
    acc = std::move(next);
  }
  const IntervalWitness w = longest_interval(SumMask{width, std::nullopt, acc});
  if (w.length < ell * (n - 1) + 1) throw std::logic_error("iterated sumset interval shorter than guaranteed");
  return {w.start + offset, w.length};
}

ResidueSet ResidueSet::of(Int m, const std::vector<Int>& values) {
  ResidueSet r(m);
  for (Int v : values) r.insert(v);
  return r;
}

ResidueSet ResidueSet::full(Int m) {
  ResidueSet r(m);
  r.bits.set_all();
  return r;
}

bool ResidueSet::contains(Int r) const { return bits.test(static_cast<std::size_t>(mod_floor(r, modulus))); }
void ResidueSet::insert(Int r) { bits.set(static_cast<std::size_t>(mod_floor(r, modulus))); }

std::vector<Int> ResidueSet::values() const {
  std::vector<Int> out;
  bits.for_each([&](std::size_t i) { out.push_back(static_cast<Int>(i)); });
  return out;
}

ResidueSet residue_shift(const ResidueSet& a, Int x) {
  ResidueSet out(a.modulus);
  out.bits = a.bits.rotated(static_cast<std::size_t>(mod_floor(x, a.modulus)));
  return out;
}

ResidueSet residue_sum(const ResidueSet& a, const ResidueSet& b) {
  if (a.modulus != b.modulus) throw InvalidArgument("residue sets over different moduli");
  ResidueSet out(a.modulus);
  a.bits.for_each([&](std::size_t x) { out.bits |= b.bits.rotated(x); });
  return out;
}

ResidueSet residue_negate(const ResidueSet& a) {
  ResidueSet out(a.modulus);
  a.bits.for_each([&](std::size_t x) { out.insert(-static_cast<Int>(x)); });
  return out;
}

ResidueSet iterated_sumset(const ResidueSet& a, Int r, Int s) {
  ResidueSet acc = ResidueSet::of(a.modulus, {0});
  for (Int i = 0; i < r; ++i) acc = residue_sum(acc, a);
  const ResidueSet neg = residue_negate(a);
  for (Int i = 0; i < s; ++i) acc = residue_sum(acc, neg);
  return acc;
}

bool in_proper_coset(const ResidueSet& a) {
  const auto vals = a.values();
  if (vals.empty()) return false;
  Int g = a.modulus;
  for (Int v : vals) g = std::gcd(g, v - vals.front());
  return g > 1;
}

ResidueSet almost_periods(const ResidueSet& a, Int d) {
  if (d < 0) throw InvalidArgument("d must be non-negative");
  const Int m = a.modulus;
  const auto size = static_cast<Int>(a.size());
  ResidueSet g(m);
  for (Int x = 0; x < m; ++x) {
    Bitset moved = a.bits.rotated(static_cast<std::size_t>(x));
    moved |= a.bits;
    if (static_cast<Int>(moved.count()) <= size + d) g.insert(x);
  }
  if (d < size && size < m && static_cast<Int>(g.size()) * (size - d) > size * size)
    throw std::logic_error("almost-period set exceeds its counting bound");
  return g;
}

std::pair<Int, Int> mod_growth_lower_bound(const ElementSet& a, Int m) {
  if (m < 1 || a.contains(m)) throw InvalidArgument("m must be a positive integer outside A");
  std::vector<Int> with = a.elements();
  with.push_back(m);
  const auto lhs = static_cast<Int>(subset_sums(ElementSet(with, a.is_multiset())).count());
  const auto rhs = static_cast<Int>(subset_sums(a).count() + subset_sums_mod(a, m).count());
  return {lhs, rhs};
}

}  // namespace sumlab
