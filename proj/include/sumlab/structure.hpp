#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sumlab/common.hpp"
#include "sumlab/sumset.hpp"

namespace sumlab::structure {

struct DiversityReport {
  Int k = 1;
  bool diverse = true;
  // Smallest v >= 2 with fewer than k non-multiples.
  std::optional<Int> witness;
  // counts[v] = number of elements not divisible by v, for v in [2, max]; filled on request.
  std::vector<Int> counts;
};

DiversityReport is_k_diverse(const ElementSet& a, Int k, bool with_counts = false);

struct DecompositionStep {
  Int v = 1;
  std::vector<Int> removed;
};

enum class DecompositionStatus { diverse, stuck };

struct DecompositionTrace {
  std::vector<DecompositionStep> steps;
  ElementSet q;
  BigInt divisor = 1;
  DecompositionStatus status = DecompositionStatus::diverse;
};

// Each step divides by the qualifying v that removes the fewest elements, ties to the largest v.
DecompositionTrace diverse_decompose(const ElementSet& a, Int k, Int budget);

struct FullModReport {
  SumMask mask;
  // (d', holds) for every divisor d' >= 2 of d: at least d'-1 elements are not multiples of d'.
  std::vector<std::pair<Int, bool>> divisor_checks;
  bool hypotheses_hold = false;
  bool full = false;
  bool second_clause_applies = false;
  bool has_nonzero_subgroup = false;
};

FullModReport sigma_mod_full(const ElementSet& a, Int d);

struct NiceParams {
  Int ell = 1;
  double t1 = 0;
  double t2 = 1;
  double density = 1;

  static NiceParams asymptotic(Int n);
  static NiceParams desk() { return {}; }
};

struct NiceStep {
  std::string rule;  // "divisor" or "sparse-dyadic"
  Int d = 1;
  std::vector<Int> removed;
};

enum class NiceStatus { nice, too_lossy };

struct NiceTrace {
  ElementSet result;
  Int d = 1;
  std::vector<NiceStep> log;
  NiceParams params;
  NiceStatus status = NiceStatus::nice;
};

// Smallest d in [2, 8*ell*n/|A|] capturing all but t1 + t2*d elements, if any.
std::optional<Int> divisor_violation(const ElementSet& a, Int n, const NiceParams& params);
// Dyadic intervals [2^(j-1), 2^j) holding between 1 and density-1 elements.
std::vector<Int> sparse_dyadic_levels(const ElementSet& a, const NiceParams& params);
bool is_nice(const ElementSet& a, Int n, const NiceParams& params);
NiceTrace nice_decompose(const ElementSet& a, Int n, const NiceParams& params);

enum class Phase { growth, unsaturated, saturated };
const char* phase_name(Phase p);

struct PhaseParams {
  Rational split = Rational(3, 4);
  // Defaults to ceil(1280 b / |A|).
  std::optional<Int> k_cap;
  Int growth_div = 4;
  Int saturation_div = 4;
  std::uint64_t seed = 0;
};

struct PhaseStep {
  Int index = 0;
  Int d = 1;
  Phase phase = Phase::growth;
  Int chosen = 0;
  Int sigma_before = 0;
  Int sigma_after = 0;
};

struct PhaseLog {
  Int b = 0;
  std::vector<Int> first_part;   // A'
  std::vector<Int> second_part;  // A''
  std::vector<PhaseStep> steps;
  ResidueSet final_mask;
  Int k = 0;
  bool hypotheses_hold = false;
  // Set when the hypotheses hold and enough steps ran for the size bound to apply.
  std::optional<bool> bound_holds;
  Int bound = 0;
};

Int residue_gcd(Int b, const std::vector<Int>& residues);
Phase classify_phase(const ResidueSet& sigma, Int remaining, Int d, const PhaseParams& params);
bool structure_hypotheses(Int b, const std::vector<Int>& residues);
PhaseLog phase_process(Int b, const std::vector<Int>& residues, const PhaseParams& params);

}  // namespace sumlab::structure
