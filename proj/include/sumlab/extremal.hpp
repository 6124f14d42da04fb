#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sumlab/common.hpp"
#include "sumlab/structure.hpp"
#include "sumlab/sumset.hpp"

namespace sumlab::extremal {

struct HomogCertificate {
  std::vector<Int> input;    // A
  Int n = 0;
  Int d = 1;
  std::vector<Int> reduced;  // A', with d * A' inside A
  Int k_factor = 8;
  Int k = 0;                 // ceil(k_factor * n / |A|)
  IntervalWitness interval;  // in Sigma^{[k]}(A')
  ProgressionWitness progression;  // d * interval, inside Sigma(A)
  std::string nice_status;   // "nice", or "too_lossy" when A was used unreduced
};

struct HomogResult {
  HomogCertificate attempt;  // filled whether or not the length reaches n
  bool certified = false;
  std::string status;  // "ok" or "interval shorter than n"
};

HomogResult homog_pipeline(const ElementSet& a, Int n, Int k_factor = 8,
                           const structure::NiceParams& params = structure::NiceParams::desk(),
                           std::uint64_t bit_budget = kDefaultBitBudget);

// Fewest-element subset of A summing to each progression term, in term order.
std::vector<std::vector<Int>> term_witnesses(const HomogCertificate& c);

// Each term has a witness drawn from A, of at most k elements, all divisible by d.
bool validate(const HomogCertificate& c);

inline constexpr Int kExactGMaxN = 24;
inline constexpr Int kExactHMaxN = 12;
inline constexpr Int kExacthMaxN = 25;

struct GResult {
  Int value = 0;
  std::vector<Int> witness;
  std::uint64_t nodes = 0;  // varies with scheduling when threads > 1
};

// Top-level tasks are split by the largest chosen element; ties go to the earliest task.
GResult exact_g(Int n, Int m, unsigned threads = 1);

struct Construction {
  std::string name;  // "multiples+extras", "small-integers" or "interval"
  std::vector<Int> set;
  bool applicable = true;
  bool verified = false;
  std::string reason;  // why an inapplicable or rejected construction is empty
  Int size() const { return static_cast<Int>(set.size()); }
};

// force_interval runs the interval construction outside 8n < m < n log(n) / 8.
std::vector<Construction> g_constructions(Int n, Int m, bool force_interval = false);

struct HResult {
  Int value = 0;
  std::vector<Int> first;
  std::vector<Int> second;
};

HResult exact_H(Int n);

struct hResult {
  Int value = 0;
  std::vector<Int> witness;  // lexicographically smallest of maximum size
  std::uint64_t nodes = 0;
};

hResult exact_h(Int n);

struct StrausCheck {
  Int n = 0;
  Int h = 0;
  Int H = 0;
  bool holds = false;  // h <= 2H + 2
};

StrausCheck straus_check(Int n);

}  // namespace sumlab::extremal
