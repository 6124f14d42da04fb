#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <shared_mutex>
#include <string>
#include <utility>
#include <vector>

#include "sumlab/common.hpp"
#include "sumlab/sumset.hpp"

namespace sumlab::nt {

// Process-wide prime list, grown on demand. Readers only ever see complete snapshots.
class PrimeTable {
 public:
  static PrimeTable& shared();

  // Snapshot containing at least every prime <= limit.
  std::shared_ptr<const std::vector<Int>> through(Int limit);
  // Snapshot containing at least the first count primes.
  std::shared_ptr<const std::vector<Int>> first(std::size_t count);
  Int sieve_limit() const;

 private:
  void extend_to(Int limit);

  mutable std::shared_mutex mu_;
  std::shared_ptr<const std::vector<Int>> primes_ = std::make_shared<const std::vector<Int>>();
  Int limit_ = 1;
};

std::vector<Int> primes_up_to(Int limit);
std::vector<Int> first_primes(std::size_t count);
// p_i with p_1 = 2.
Int nth_prime(std::size_t i);

std::vector<std::pair<Int, int>> factorize(Int n);
std::vector<Int> prime_divisors(Int n);
std::vector<Int> divisors(Int n);

struct Rate {
  Rational exact;
  double value() const { return to_double(exact); }
  std::string str() const { return to_string(exact); }
};

Int euler_phi(Int n);
Int snd(Int m);
Int s_formula(Int n, Int m);
Rate tau(Int rho, Int m);

struct RhoResult {
  Int rho = 1;
  // False when m lies outside [n, C(n,2)], where the definition is only advisory.
  bool in_range = true;
};
RhoResult rho_nm(Int n, Int m);

struct GrowthRates {
  double psi = 0;
  double r = 0;
  Int rho = 0;
  bool uses_rho = false;
  Rate m_over_phi;
};
GrowthRates R_nm(Int n, Int m);

ElementSet smooth_free_set(Int x, Int w);
bool has_prime_factor_at_most(Int t, Int w);

struct QuSet {
  ElementSet set;
  double lower = 0;
  double upper = 0;
};
QuSet qu_set(Int x, Int r, Int m, Int u_exp_denom = 16);

Int d_m(Int m, std::optional<double> threshold = std::nullopt);

struct SelbergCheck {
  Int count = 0;
  double bound_loglog = 0;
  std::optional<double> bound_product;
  bool holds = true;
};
// Counts members of the progression coprime to W(r)/gcd(W(r), m) and compares with both bounds.
SelbergCheck selberg_check(Int start, Int diff, Int length, Int r, Int m, Int n);

}  // namespace sumlab::nt
