#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sumlab/certificate.hpp"
#include "sumlab/common.hpp"
#include "sumlab/completeness.hpp"
#include "sumlab/sumset.hpp"

namespace sumlab::ramsey {

inline constexpr Int kAsymptoticC = 3840;

struct RamseyBlock {
  Int x = 0;
  Rational eps;
  Int C = 0;
  Int w = 0;
  std::vector<Int> terms;  // i.i.d. draws, in draw order
  bool distinct = false;
  // [ceil(C x log x / 4), floor(7 C x log x / 8)]
  IntervalWitness target;
  std::uint64_t seed = 0;

  // ceil(eps * |S|), the smallest colour class any (1/eps)-colouring must contain.
  Int subset_size() const;
  ElementSet elements() const { return ElementSet::multiset(terms); }
};

// Default w is floor(log(x) / 2).
RamseyBlock sample_block(Int x, const Rational& eps, Int C, std::optional<Int> w, std::uint64_t seed);

enum class VerifyKind { exact, montecarlo, heuristic };

struct VerifyMode {
  VerifyKind kind = VerifyKind::exact;
  std::uint64_t trials = 0;       // montecarlo
  bool with_heuristic = true;     // montecarlo also runs the structured candidates
  std::uint64_t seed = 0;
  unsigned threads = 1;
  std::uint64_t exact_budget = 10'000'000;

  static VerifyMode exact() { return {}; }
  static VerifyMode montecarlo(std::uint64_t trials, std::uint64_t seed, bool heuristic = true) {
    return {VerifyKind::montecarlo, trials, heuristic, seed};
  }
  static VerifyMode heuristic() { return {VerifyKind::heuristic, 0, true, 0}; }
};

std::string kind_name(VerifyKind k);

// Checks that every examined s-subset S' has Sigma(S') covering target. The witness is the first failing
// subset in lexicographic order (exact) or trial order (heuristic candidates first, then samples).
Certificate verify_subsequences(const ElementSet& s_set, Int s, const IntervalWitness& target,
                                const VerifyMode& mode);

// Number of s-subsets of an n-set, saturating at UINT64_MAX.
std::uint64_t binomial_saturating(std::uint64_t n, std::uint64_t k);

struct DensityPoint {
  Int n = 0;
  Int count = 0;   // |A cap [n]|
  double ratio = 0;  // count / (r log^2 n)
};

struct ConcatPrefix {
  Int r = 0;
  Int x0 = 0;
  Int C = 0;
  std::vector<RamseyBlock> blocks;
  std::vector<Int> sequence;  // blocks concatenated, each sorted
  std::vector<DensityPoint> density;
  std::vector<bool> overlaps;  // y_{i+1}/4 < 7 y_i / 8
  bool all_overlap = false;
  IntervalWitness coverage;    // union of the block targets
};

ConcatPrefix concat_prefix(Int r, Int x0, Int blocks, Int C, std::uint64_t seed);

struct PolyBlock {
  completeness::BinomialPolynomial poly;  // the integer-valued L*P
  BigInt scale;                           // L
  Int x = 0;
  Int k = 0;
  Rational eps;
  Int C = 0;
  Int w = 0;
  std::vector<Int> domain;  // X: y in [x, (1+1/k)x) with (L*P)(y) free of primes <= w
  double density = 0;       // |X| / x
  double shape = 0;         // (log w)^{-k}, or 1 when w < 3
  std::vector<Int> terms;   // sampled y
  std::vector<Int> values;  // (L*P)(y)
  bool distinct = false;
  IntervalWitness target;   // [e P(x) |S'| / 9, 8 P(x) |S'| / 9]
  std::uint64_t seed = 0;
};

// Default w is floor(sqrt(log x)).
PolyBlock poly_block(const completeness::BinomialPolynomial& p, Int x, const Rational& eps, Int C,
                     std::optional<Int> w, std::uint64_t seed);

struct GrowthCheck {
  Int modulus = 0;  // P(m)
  Int copies = 0;   // 2^{k-1}
  Int count = 0;
  double exponent = 0;  // log(count / P(m)) / log(|T| / x)
};

// Residues of 2^{k-1} P(T) - 2^{k-1} P(T) modulo P(m).
GrowthCheck iterated_growth_check(const completeness::BinomialPolynomial& p, const ElementSet& t, Int m, Int k,
                                  Int x, std::uint64_t bit_budget = kDefaultBitBudget);

struct CoolCheck {
  Int exact = 0;       // |Sigma(S) cap [m]|
  double log2_bound = 0;  // log2 of 2^{m/q} prod (1 + 2^{-a/q})
  bool holds = false;
};

CoolCheck cool_bound(const std::vector<Int>& s, Int m, Int q);

struct HueColoring {
  Int r = 2;
  std::vector<Int> blue_levels;  // J

  Int hues() const { return r / 2; }
  bool blue(Int value) const;
  // Colour of the element at 1-based position index: hue + (blue ? r/2 : 0).
  Int color(Int index, Int value) const;
};

struct LevelReport {
  Int j = 0;
  Int red_max = 0;   // largest red same-hue sum under c_j
  bool red_strong = false;
  Int blue_count = 0;  // b(j)
  double log2_cool = 0;
  bool blue_strong = false;
  bool weak() const { return !red_strong && !blue_strong; }
};

struct MissedRange {
  Int j = 0;
  Int low = 0;   // exclusive
  Int high = 0;  // inclusive
  std::vector<Int> missed;
};

struct AdversaryReport {
  std::vector<LevelReport> levels;
  HueColoring coloring;
  std::vector<Int> colors;  // per element of A, in order
  std::vector<MissedRange> missed;
  std::string status;  // "ok" or "no witness at this scale"
};

// Levels j run from j_min while 2^j j <= max(A); below j = 3 the missed range is empty.
// Chosen levels satisfy j_h >= gap * j_{h-1}.
AdversaryReport adversary_coloring(const std::vector<Int>& a, Int r, Int gap = 2, Int j_min = 3,
                                   std::uint64_t bit_budget = kDefaultBitBudget);

}  // namespace sumlab::ramsey
