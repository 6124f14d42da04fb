#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sumlab/common.hpp"
#include "sumlab/sumset.hpp"

namespace sumlab::completeness {

// Monomial coefficients c_0..c_k, parsed from "c_k x^k + ... + c_0" with integer or a/b coefficients.
std::vector<Rational> parse_polynomial(const std::string& text);
std::string format_polynomial(const std::vector<Rational>& monomial);

// P(x) = sum alpha_i C(x, i).
class BinomialPolynomial {
 public:
  BinomialPolynomial() = default;
  explicit BinomialPolynomial(std::vector<Rational> alpha);
  static BinomialPolynomial from_monomial(const std::vector<Rational>& coeffs);

  Int degree() const { return static_cast<Int>(alpha_.size()) - 1; }
  const std::vector<Rational>& alpha() const { return alpha_; }
  std::vector<Rational> to_monomial() const;
  Rational eval(const BigInt& x) const;
  // lcm of the denominators q_i.
  BigInt lcm_denominator() const;
  bool operator==(const BinomialPolynomial&) const = default;

 private:
  std::vector<Rational> alpha_;
};

struct GrahamVerdict {
  bool complete = false;
  // 0 when complete, else 1 (leading coefficient not positive) or 3 (numerator gcd above 1).
  int failing_condition = 0;
  BinomialPolynomial binomial;
  BigInt scale;                // L
  std::vector<BigInt> scaled;  // binomial coefficients of L*P
};

GrahamVerdict graham_complete_test(const std::vector<Rational>& monomial);

struct SequencePrefix {
  std::vector<BigInt> terms;
  std::string rule;
  std::map<std::string, std::string> params;
  std::optional<std::uint64_t> seed;

  bool strictly_increasing() const;
  std::size_t size() const { return terms.size(); }
};

SequencePrefix make_prefix(const std::vector<Int>& terms, std::string rule = "explicit");

struct Window {
  Int low = 0;
  Int high = 0;
  Int length() const { return high - low; }
};

Window prefix_completeness_window(const SequencePrefix& a, std::uint64_t bit_budget = kDefaultBitBudget);

struct GrowthProxy {
  double ratio = 0;   // log f_N / (log N)^2
  double target = 0;  // 1 / (2 log(1/eps))
  double relative() const { return ratio / target; }
};

struct FSequence {
  SequencePrefix prefix;
  std::optional<GrowthProxy> proxy;
};

FSequence gen_F(const Rational& eps, const std::vector<BigInt>& initial, Int n);

struct FriendlyReport {
  Int best_C = 0;                  // (i)
  bool gaps_grow = false;          // (ii) suffix minima of the gaps increase across quartiles
  std::optional<Int> gaps_monotone_from;
  bool dyadic_counts_grow = false; // (iii)
  std::optional<Int> dyadic_monotone_from;
  std::vector<double> dyadic_ratios;
  double best_c = 0;               // (iv)
  double best_c_tail = 0;
  bool strictly_increasing = false;  // (v)
  // Smallest n0 from which b_{floor(2n/c)+1} >= 2 b_{n+1} holds for every testable n >= n0.
  std::optional<Int> doubling_from;
  Int doubling_tested = 0;
};

FriendlyReport friendly_conditions(const std::vector<BigInt>& b, const Rational& eps);

struct FriendlySequence {
  SequencePrefix prefix;
  FriendlyReport report;
};

FriendlySequence gen_friendly(const Rational& eps, const std::vector<BigInt>& initial, Int n);

struct EpsWitness {
  std::vector<Int> indices;       // n_1 < n_2 < ... (1-based)
  std::vector<Int> slack;         // g(n_j)
  std::vector<Int> deleted;       // 1-based indices removed from A
  BigInt value;                   // a_{n_1}
  // "dp" when a bitmap over [0, value] fits the budget, else "sum" (kept elements below value sum to less).
  std::string method;
  bool certified = false;         // value is not a subset sum of A' below it
  bool density_ok = false;        // A'(a_{n_j}) >= eps * A(a_{n_j}) at every chosen n_j
};

struct EpsCheck {
  bool holds = false;
  Int best_C = 0;
  std::vector<Int> needed;  // least C per index
  std::optional<EpsWitness> witness;
};

EpsCheck eps_necessary_check(const SequencePrefix& a, const Rational& eps, Int c_max = 8);

SequencePrefix interlace_sample(const SequencePrefix& b, Int w, std::uint64_t seed);

}  // namespace sumlab::completeness
