#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sumlab/certificate.hpp"
#include "sumlab/common.hpp"

namespace sumlab::mono {

enum class ClassKind { interval, prime, residue_high, residue_mid, leftover, trivial, search };

struct ColorClass {
  ClassKind kind = ClassKind::leftover;
  Int param = 0;  // k, p, s or a running index
  std::vector<Int> elements;  // increasing
  std::string label() const;
};

struct Coloring {
  Int n = 0;
  Int m = 0;
  int regime = 0;  // 1 small m, 2 large m, 0 trivial or searched
  Int r = 0;       // colour budget the construction was run with
  Int d = 1;       // step-3 modulus
  bool d_fallback = false;
  std::vector<ColorClass> classes;

  Int colors() const { return static_cast<Int>(classes.size()); }
};

struct BuildOptions {
  std::optional<Int> r;
  std::optional<Int> d;
  double kappa = 1.0;
  unsigned threads = 1;
};

// Regime 1 below n^{3/2} (log log n)^{1/2} / (log n)^{1/2}, regime 2 above.
double regime_threshold(Int n);

// The classes for a fixed even r, unverified.
Coloring construct_coloring(Int n, Int m, Int r, const BuildOptions& opt = {});

// Smallest fitting even r (doubling from 2, then an ascending scan), verified before return.
Coloring build_avoiding_coloring(Int n, Int m, const BuildOptions& opt = {});

// Per class: the capped DP must leave bit m clear. params["class_max"] lists, per class,
// the largest achievable sum at most m.
Certificate verify_coloring(const Coloring& c, unsigned threads = 1);

// Interval classes are written as runs [lo, hi], the rest as explicit lists.
std::string coloring_json(const Coloring& c);
// Inverse of coloring_json; labels determine class kinds.
Coloring parse_coloring_json(const std::string& text);

// Every element satisfies the defining predicate of its class label.
bool rules_hold(const Coloring& c);

struct ExactF {
  std::optional<Int> value;  // empty when more than r_max colours are needed
  Coloring witness;
  std::uint64_t nodes = 0;
};

inline constexpr Int kExactFMaxN = 14;

ExactF exact_f(Int n, Int m, Int r_max);

struct YReport {
  std::optional<Int> y;  // the largest qualifying y < n/2
  double y_low = 0;      // real endpoints of the y window
  double y_high = 0;
  bool large_enough = false;  // y >= max(r^2, n^{3/5})
  bool count_condition = false;  // 64 (m/phi(m)) tau(r,m) y / (r log r) > n^{1/4}
  std::string status;  // "ok" or "no y at this scale"
};

YReport find_y(Int n, Int m, Int r);

}  // namespace sumlab::mono
