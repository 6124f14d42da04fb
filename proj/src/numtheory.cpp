#include "sumlab/numtheory.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numeric>

namespace sumlab::nt {

PrimeTable& PrimeTable::shared() {
  static PrimeTable table;
  return table;
}

Int PrimeTable::sieve_limit() const {
  std::shared_lock lock(mu_);
  return limit_;
}

void PrimeTable::extend_to(Int limit) {
  std::unique_lock lock(mu_);
  if (limit <= limit_) return;
  limit = std::max(limit, 2 * limit_);
  std::vector<bool> composite(static_cast<std::size_t>(limit) + 1, false);
  auto primes = std::make_shared<std::vector<Int>>();
  for (Int i = 2; i <= limit; ++i) {
    if (composite[static_cast<std::size_t>(i)]) continue;
    primes->push_back(i);
    for (Int j = i * i; j <= limit; j += i) composite[static_cast<std::size_t>(j)] = true;
  }
  primes_ = std::move(primes);
  limit_ = limit;
}

std::shared_ptr<const std::vector<Int>> PrimeTable::through(Int limit) {
  {
    std::shared_lock lock(mu_);
    if (limit <= limit_) return primes_;
  }
  extend_to(limit);
  std::shared_lock lock(mu_);
  return primes_;
}

std::shared_ptr<const std::vector<Int>> PrimeTable::first(std::size_t count) {
  while (true) {
    std::shared_ptr<const std::vector<Int>> snap;
    Int lim = 0;
    {
      std::shared_lock lock(mu_);
      snap = primes_;
      lim = limit_;
    }
    if (snap->size() >= count) return snap;
    extend_to(std::max<Int>(64, 2 * lim));
  }
}

std::vector<Int> primes_up_to(Int limit) {
  if (limit < 2) return {};
  auto snap = PrimeTable::shared().through(limit);
  return {snap->begin(), std::upper_bound(snap->begin(), snap->end(), limit)};
}

std::vector<Int> first_primes(std::size_t count) {
  auto snap = PrimeTable::shared().first(count);
  return {snap->begin(), snap->begin() + static_cast<std::ptrdiff_t>(count)};
}

Int nth_prime(std::size_t i) {
  if (i == 0) throw InvalidArgument("primes are indexed from 1");
  return (*PrimeTable::shared().first(i))[i - 1];
}

std::vector<std::pair<Int, int>> factorize(Int n) {
  if (n < 1) throw InvalidArgument("factorize needs n >= 1");
  std::vector<std::pair<Int, int>> out;
  for (Int p = 2; p * p <= n; p += (p == 2 ? 1 : 2)) {
    if (n % p != 0) continue;
    int e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    out.emplace_back(p, e);
  }
  if (n > 1) out.emplace_back(n, 1);
  return out;
}

std::vector<Int> prime_divisors(Int n) {
  std::vector<Int> out;
  for (auto [p, e] : factorize(n)) out.push_back(p);
  return out;
}

std::vector<Int> divisors(Int n) {
  std::vector<Int> out{1};
  for (auto [p, e] : factorize(n)) {
    const std::size_t base = out.size();
    Int pk = 1;
    for (int k = 1; k <= e; ++k) {
      pk *= p;
      for (std::size_t i = 0; i < base; ++i) out.push_back(out[i] * pk);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

Int euler_phi(Int n) {
  Int phi = n;
  for (auto [p, e] : factorize(n)) phi = phi / p * (p - 1);
  return phi;
}

Int snd(Int m) {
  if (m < 1) throw InvalidArgument("snd needs m >= 1");
  Int k = 2;
  while (m % k == 0) ++k;
  return k;
}

Int s_formula(Int n, Int m) {
  const Int s = snd(m);
  return n / s + s - 2;
}

namespace {

// Distinct primes among the first rho primes and the prime divisors of m.
std::vector<Int> tau_primes(Int rho, Int m) {
  std::vector<Int> ps = first_primes(static_cast<std::size_t>(rho));
  for (Int p : prime_divisors(m))
    if (!std::binary_search(ps.begin(), ps.end(), p)) ps.push_back(p);
  std::sort(ps.begin(), ps.end());
  return ps;
}

}  // namespace

Rate tau(Int rho, Int m) {
  if (rho < 1 || m < 1) throw InvalidArgument("tau needs rho, m >= 1");
  BigInt num = 1;
  BigInt den = 1;
  for (Int p : tau_primes(rho, m)) {
    num *= p - 1;
    den *= p;
  }
  return {Rational(num, den)};
}

RhoResult rho_nm(Int n, Int m) {
  if (n < 1 || m < 1) throw InvalidArgument("rho needs n, m >= 1");
  RhoResult out;
  out.in_range = n <= m && 2 * m <= n * (n - 1);
  const Int phi = euler_phi(m);
  const long double target = static_cast<long double>(n) * static_cast<long double>(n);
  // rho/tau(rho, m) is increasing in rho; stop at the first rho with rho * phi >= n^2 * tau.
  // tau is tracked in floating point and recomputed exactly only near the boundary.
  long double t = 1;
  for (Int p : prime_divisors(m)) t *= static_cast<long double>(p - 1) / static_cast<long double>(p);
  for (std::size_t rho = 1;; ++rho) {
    const Int p = nth_prime(rho);
    if (m % p != 0) t *= static_cast<long double>(p - 1) / static_cast<long double>(p);
    const long double lhs = static_cast<long double>(rho) * static_cast<long double>(phi);
    const long double rhs = target * t;
    bool reached = lhs >= rhs;
    if (std::fabs(lhs - rhs) <= 1e-9L * rhs)
      reached = Rational(static_cast<Int>(rho)) * phi >= Rational(BigInt(n) * n) * tau(static_cast<Int>(rho), m).exact;
    if (reached) {
      out.rho = static_cast<Int>(rho);
      return out;
    }
  }
}

GrowthRates R_nm(Int n, Int m) {
  if (n < 3) throw InvalidArgument("R(n,m) needs n >= 3 so that log log n is defined");
  GrowthRates g;
  const Int phi = euler_phi(m);
  g.m_over_phi = {Rational(m, phi)};
  const double ln = std::log(static_cast<double>(n));
  g.psi = std::cbrt(static_cast<double>(m)) * g.m_over_phi.value() / (std::cbrt(ln) * std::pow(std::log(ln), 2.0 / 3.0));
  g.rho = rho_nm(n, m).rho;
  g.uses_rho = static_cast<double>(g.rho) < g.psi;
  g.r = std::min(g.psi, static_cast<double>(g.rho));
  return g;
}

ElementSet smooth_free_set(Int x, Int w) {
  if (x < 2) throw InvalidArgument("smooth_free_set needs x >= 2");
  std::vector<bool> hit(static_cast<std::size_t>(x), false);
  for (Int p : primes_up_to(w))
    for (Int t = (x + p - 1) / p * p; t < 2 * x; t += p) hit[static_cast<std::size_t>(t - x)] = true;
  std::vector<Int> out;
  for (Int i = 0; i < x; ++i)
    if (!hit[static_cast<std::size_t>(i)]) out.push_back(x + i);
  return ElementSet(std::move(out));
}

bool has_prime_factor_at_most(Int t, Int w) {
  for (Int p : primes_up_to(w)) {
    if (p > t) break;
    if (t % p == 0) return true;
  }
  return false;
}

QuSet qu_set(Int x, Int r, Int m, Int u_exp_denom) {
  if (x < 2) throw InvalidArgument("qu_set needs x >= 2");
  if (r < 1 || m < 1 || u_exp_denom < 1) throw InvalidArgument("qu_set needs r, m, exponent >= 1");
  const auto bad = tau_primes(r, m);
  std::vector<bool> member(static_cast<std::size_t>(x), false);
  for (Int u : divisors(m)) {
    // u <= x^(1/denom)  <=>  u^denom <= x
    BigInt pw = 1;
    for (Int i = 0; i < u_exp_denom && pw <= x; ++i) pw *= u;
    if (pw > x) break;
    const Int qlo = (x + u - 1) / u;
    const Int qhi = (2 * x + u - 1) / u;
    std::vector<bool> blocked(static_cast<std::size_t>(qhi - qlo), false);
    for (Int p : bad)
      for (Int q = (qlo + p - 1) / p * p; q < qhi; q += p) blocked[static_cast<std::size_t>(q - qlo)] = true;
    for (Int q = qlo; q < qhi; ++q)
      if (!blocked[static_cast<std::size_t>(q - qlo)]) member[static_cast<std::size_t>(q * u - x)] = true;
  }
  QuSet out;
  std::vector<Int> vals;
  for (Int i = 0; i < x; ++i)
    if (member[static_cast<std::size_t>(i)]) vals.push_back(x + i);
  out.set = ElementSet(std::move(vals));
  const double density = to_double(Rational(m, euler_phi(m)) * tau(r, m).exact) * static_cast<double>(x);
  out.lower = density / 8;
  out.upper = density * 8;
  return out;
}

Int d_m(Int m, std::optional<double> threshold) {
  if (m < 2) throw InvalidArgument("d_m needs m >= 2");
  const double t = threshold.value_or(std::log(static_cast<double>(m)) / 64);
  Int d = 1;
  if (t < 2) return d;
  for (Int p : primes_up_to(static_cast<Int>(std::floor(t))))
    if (m % p != 0) d *= p;
  return d;
}

SelbergCheck selberg_check(Int start, Int diff, Int length, Int r, Int m, Int n) {
  if (r < 2 || n < 3 || length < 0 || diff < 1) throw InvalidArgument("selberg_check parameters out of range");
  std::vector<Int> sieve;
  Rational prod = 1;
  for (Int p : first_primes(static_cast<std::size_t>(r)))
    if (m % p != 0) {
      sieve.push_back(p);
      prod *= Rational(p - 1, p);
    }
  SelbergCheck out;
  for (Int i = 0; i < length; ++i) {
    const Int t = start + i * diff;
    if (std::none_of(sieve.begin(), sieve.end(), [t](Int p) { return t % p == 0; })) ++out.count;
  }
  const double ln = std::log(static_cast<double>(n));
  out.bound_loglog = 256.0 * static_cast<double>(length) * std::log(ln) / std::log(static_cast<double>(r));
  out.holds = static_cast<double>(out.count) <= out.bound_loglog;
  if (diff == 1) {
    out.bound_product = 256.0 * static_cast<double>(length) * to_double(prod);
    out.holds = out.holds && static_cast<double>(out.count) <= *out.bound_product;
  }
  return out;
}

}  // namespace sumlab::nt
