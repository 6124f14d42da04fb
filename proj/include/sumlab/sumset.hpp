#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "sumlab/bitset.hpp"
#include "sumlab/common.hpp"

namespace sumlab {

// Sorted positive integers; strictly increasing unless built as a multiset.
class ElementSet {
 public:
  ElementSet() = default;
  ElementSet(std::vector<Int> values, bool multiset = false);
  ElementSet(std::initializer_list<Int> values) : ElementSet(std::vector<Int>(values)) {}
  static ElementSet multiset(std::vector<Int> values) { return ElementSet(std::move(values), true); }

  const std::vector<Int>& elements() const { return elems_; }
  std::size_t size() const { return elems_.size(); }
  bool empty() const { return elems_.empty(); }
  bool is_multiset() const { return multiset_; }
  Int min() const { return elems_.front(); }
  Int max() const { return elems_.back(); }
  // Throws ResourceError when the sum does not fit in 64 bits.
  Int total() const;
  bool contains(Int v) const;
  Int operator[](std::size_t i) const { return elems_[i]; }
  auto begin() const { return elems_.begin(); }
  auto end() const { return elems_.end(); }
  bool operator==(const ElementSet&) const = default;

 private:
  std::vector<Int> elems_;
  bool multiset_ = false;
};

// One integer per line; '#' starts a comment.
ElementSet parse_element_set(std::istream& in, bool multiset = false);
ElementSet read_element_set(const std::string& path, bool multiset = false);
std::string format_element_set(const ElementSet& a);

struct SumMask {
  Int cap = 0;
  std::optional<Int> modulus;
  Bitset bits;

  bool contains(Int s) const { return s >= 0 && bits.test(static_cast<std::size_t>(s)); }
  std::size_t count() const { return bits.count(); }
  std::vector<Int> values() const;
  bool operator==(const SumMask&) const = default;
};

enum class SumMode { at_most, exactly };

struct BoundedSumTable {
  Int h = 0;
  Int cap = 0;
  SumMode mode = SumMode::at_most;
  std::vector<SumMask> rows;

  const SumMask& row(Int k) const { return rows.at(static_cast<std::size_t>(k)); }
  // Union of rows 0..k.
  SumMask union_upto(Int k) const;
};

struct IntervalWitness {
  Int start = 0;
  Int length = 0;
  Int end() const { return start + length; }
  bool operator==(const IntervalWitness&) const = default;
};

struct ProgressionWitness {
  Int first = 0;
  Int diff = 1;
  Int count = 0;
  bool homogeneous = false;
  Int term(Int i) const { return first + i * diff; }
  bool operator==(const ProgressionWitness&) const = default;
};

SumMask subset_sums(const ElementSet& a, std::optional<Int> cap = std::nullopt,
                    std::uint64_t bit_budget = kDefaultBitBudget);
// A subset (as element values) summing to target, or nothing when target is unreachable.
std::optional<std::vector<Int>> subset_sum_witness(const ElementSet& a, Int target,
                                                   std::uint64_t bit_budget = kDefaultBitBudget);
SumMask subset_sums_mod(const ElementSet& a, Int m, std::uint64_t bit_budget = kDefaultBitBudget);
BoundedSumTable subset_sums_bounded(const ElementSet& a, Int h, Int cap, SumMode mode,
                                    std::uint64_t bit_budget = kDefaultBitBudget);
// Fewest-element subset of at most h elements summing to target.
std::optional<std::vector<Int>> bounded_sum_witness(const ElementSet& a, Int h, Int target,
                                                    std::uint64_t bit_budget = kDefaultBitBudget);

IntervalWitness longest_interval(const SumMask& mask, std::optional<Int> from = std::nullopt);
std::optional<ProgressionWitness> find_homog_progression(const SumMask& mask, Int min_len);
bool validates(const IntervalWitness& w, const SumMask& mask);
bool validates(const ProgressionWitness& w, const SumMask& mask);

IntervalWitness graham_extend(const IntervalWitness& interval, const ElementSet& extras);
IntervalWitness lev_interval(const std::vector<std::vector<Int>>& parts, Int q, Int n);

// Subset of Z_m stored as a bitmap of length m.
struct ResidueSet {
  Int modulus = 1;
  Bitset bits;

  ResidueSet() : bits(1) {}
  explicit ResidueSet(Int m) : modulus(m), bits(static_cast<std::size_t>(m)) {}
  static ResidueSet of(Int m, const std::vector<Int>& values);
  static ResidueSet full(Int m);
  bool contains(Int r) const;
  void insert(Int r);
  std::size_t size() const { return bits.count(); }
  std::vector<Int> values() const;
  bool operator==(const ResidueSet&) const = default;
};

ResidueSet residue_sum(const ResidueSet& a, const ResidueSet& b);
ResidueSet residue_negate(const ResidueSet& a);
ResidueSet residue_shift(const ResidueSet& a, Int x);
// rA - sA with r, s counted with repetition; 0A = {0}.
ResidueSet iterated_sumset(const ResidueSet& a, Int r, Int s);
bool in_proper_coset(const ResidueSet& a);

ResidueSet almost_periods(const ResidueSet& a, Int d);
// Returns (|Sigma(A u {m})|, |Sigma(A)| + |Sigma_m(A)|).
std::pair<Int, Int> mod_growth_lower_bound(const ElementSet& a, Int m);

}  // namespace sumlab
