#include "sumlab/completeness.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <deque>
#include <limits>
#include <sstream>

#include "sumlab/numtheory.hpp"
#include "sumlab/rng.hpp"

namespace sumlab::completeness {

namespace mp = boost::multiprecision;

namespace {

BigInt factorial(std::size_t n) {
  BigInt f = 1;
  for (std::size_t i = 2; i <= n; ++i) f *= i;
  return f;
}

// s2[j][i] = S(j, i), second kind.
std::vector<std::vector<BigInt>> stirling2(std::size_t k) {
  std::vector<std::vector<BigInt>> s(k + 1, std::vector<BigInt>(k + 1, 0));
  s[0][0] = 1;
  for (std::size_t j = 1; j <= k; ++j)
    for (std::size_t i = 1; i <= j; ++i) s[j][i] = BigInt(i) * s[j - 1][i] + s[j - 1][i - 1];
  return s;
}

// s1[i][j] = signed s(i, j), first kind: x(x-1)...(x-i+1) = sum_j s1[i][j] x^j.
std::vector<std::vector<BigInt>> stirling1(std::size_t k) {
  std::vector<std::vector<BigInt>> s(k + 1, std::vector<BigInt>(k + 1, 0));
  s[0][0] = 1;
  for (std::size_t i = 1; i <= k; ++i)
    for (std::size_t j = 1; j <= i; ++j) s[i][j] = s[i - 1][j - 1] - BigInt(i - 1) * s[i - 1][j];
  return s;
}

std::vector<Rational> trimmed(std::vector<Rational> v) {
  while (!v.empty() && v.back() == 0) v.pop_back();
  return v;
}

BigInt parse_digits(const std::string& s, std::size_t& pos) {
  const std::size_t start = pos;
  while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
  if (pos == start) throw InvalidArgument("expected digits at position " + std::to_string(start));
  return BigInt(s.substr(start, pos - start));
}

Int to_int(const BigInt& v, const char* what) {
  if (v > std::numeric_limits<Int>::max() || v < std::numeric_limits<Int>::min())
    throw ResourceError(std::string(what) + " does not fit in 64 bits");
  return v.convert_to<Int>();
}

// Least C >= 0 with b_n <= sum_{i <= floor(eps n) + C} b_i, per 1-based n.
std::vector<Int> needed_slack(const std::vector<BigInt>& b, const Rational& eps) {
  const std::size_t n_terms = b.size();
  std::vector<BigInt> prefix(n_terms + 1, 0);
  for (std::size_t i = 0; i < n_terms; ++i) prefix[i + 1] = prefix[i] + b[i];
  std::vector<Int> out(n_terms, 0);
  for (std::size_t n = 1; n <= n_terms; ++n) {
    const BigInt fl = mp::numerator(eps * Rational(n)) / mp::denominator(eps * Rational(n));
    const std::size_t base = std::min<std::size_t>(fl.convert_to<std::size_t>(), n_terms);
    // prefix is nondecreasing for positive terms; smallest t >= base with prefix[t] >= b_n.
    auto it = std::lower_bound(prefix.begin() + static_cast<std::ptrdiff_t>(base), prefix.end(), b[n - 1]);
    const std::size_t t = it == prefix.end() ? n_terms : static_cast<std::size_t>(it - prefix.begin());
    out[n - 1] = static_cast<Int>(t - base);
  }
  return out;
}

BigInt floor_of(const Rational& q) {
  BigInt num = mp::numerator(q);
  const BigInt den = mp::denominator(q);
  BigInt f = num / den;
  if (num < 0 && f * den != num) --f;
  return f;
}

void check_eps(const Rational& eps) {
  if (eps <= 0 || eps >= 1) throw InvalidArgument("eps must lie in (0, 1)");
}

BigInt random_below(Rng& rng, const BigInt& bound) {
  const std::size_t bits = mp::msb(bound) + 1;
  const std::size_t limbs = (bits + 63) / 64;
  for (;;) {
    BigInt v = 0;
    for (std::size_t i = 0; i < limbs; ++i) v = (v << 64) | BigInt(rng.next());
    v &= (BigInt(1) << bits) - 1;
    if (v < bound) return v;
  }
}

bool smooth_free(const BigInt& c, const std::vector<Int>& primes, Int w) {
  for (Int p : primes) {
    if (BigInt(p) * p > c) return !(c > 1 && c <= w);
    if (c % p == 0) return false;
  }
  return true;
}

}  // namespace

std::vector<Rational> parse_polynomial(const std::string& text) {
  std::string s;
  for (char ch : text)
    if (!std::isspace(static_cast<unsigned char>(ch))) s += ch;
  if (s.empty()) throw InvalidArgument("empty polynomial");
  std::vector<Rational> coeffs;
  std::size_t pos = 0;
  bool first = true;
  while (pos < s.size()) {
    int sign = 1;
    if (s[pos] == '+' || s[pos] == '-') {
      sign = s[pos] == '-' ? -1 : 1;
      ++pos;
    } else if (!first) {
      throw InvalidArgument("expected '+' or '-' at position " + std::to_string(pos));
    }
    first = false;
    std::optional<Rational> coef;
    if (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) {
      BigInt num = parse_digits(s, pos);
      BigInt den = 1;
      if (pos < s.size() && s[pos] == '/') {
        ++pos;
        den = parse_digits(s, pos);
        if (den == 0) throw InvalidArgument("zero denominator");
      }
      coef = Rational(num, den);
      if (pos < s.size() && s[pos] == '*') ++pos;
    }
    std::size_t power = 0;
    if (pos < s.size() && s[pos] == 'x') {
      ++pos;
      power = 1;
      if (pos < s.size() && s[pos] == '^') {
        ++pos;
        const BigInt p = parse_digits(s, pos);
        if (p > 64) throw InvalidArgument("degree above 64");
        power = p.convert_to<std::size_t>();
      }
    } else if (!coef) {
      throw InvalidArgument("unexpected character at position " + std::to_string(pos));
    }
    if (coeffs.size() <= power) coeffs.resize(power + 1, Rational(0));
    coeffs[power] += Rational(sign) * coef.value_or(Rational(1));
  }
  return trimmed(std::move(coeffs));
}

std::string format_polynomial(const std::vector<Rational>& monomial) {
  const auto c = trimmed(monomial);
  if (c.empty()) return "0";
  std::ostringstream out;
  bool first = true;
  for (std::size_t k = c.size(); k-- > 0;) {
    if (c[k] == 0) continue;
    const Rational mag = c[k] < 0 ? Rational(-c[k]) : c[k];
    if (first) {
      if (c[k] < 0) out << '-';
    } else {
      out << (c[k] < 0 ? " - " : " + ");
    }
    first = false;
    if (k == 0 || mag != 1) out << to_string(mag);
    if (k >= 1) out << 'x';
    if (k >= 2) out << '^' << k;
  }
  return out.str();
}

BinomialPolynomial::BinomialPolynomial(std::vector<Rational> alpha) : alpha_(trimmed(std::move(alpha))) {
  if (alpha_.empty()) throw InvalidArgument("zero polynomial");
}

BinomialPolynomial BinomialPolynomial::from_monomial(const std::vector<Rational>& coeffs) {
  const auto c = trimmed(coeffs);
  if (c.empty()) throw InvalidArgument("zero polynomial");
  const std::size_t k = c.size() - 1;
  const auto s2 = stirling2(k);
  std::vector<Rational> alpha(k + 1, Rational(0));
  for (std::size_t i = 0; i <= k; ++i) {
    const BigInt fi = factorial(i);
    for (std::size_t j = i; j <= k; ++j)
      if (s2[j][i] != 0) alpha[i] += c[j] * Rational(s2[j][i] * fi);
  }
  return BinomialPolynomial(std::move(alpha));
}

std::vector<Rational> BinomialPolynomial::to_monomial() const {
  const std::size_t k = alpha_.size() - 1;
  const auto s1 = stirling1(k);
  std::vector<Rational> c(k + 1, Rational(0));
  for (std::size_t i = 0; i <= k; ++i) {
    const BigInt fi = factorial(i);
    for (std::size_t j = 0; j <= i; ++j)
      if (s1[i][j] != 0) c[j] += alpha_[i] * Rational(s1[i][j], fi);
  }
  return trimmed(std::move(c));
}

Rational BinomialPolynomial::eval(const BigInt& x) const {
  Rational total = 0;
  BigInt falling = 1;
  for (std::size_t i = 0; i < alpha_.size(); ++i) {
    if (i > 0) falling *= x - BigInt(i - 1);
    total += alpha_[i] * Rational(falling, factorial(i));
  }
  return total;
}

BigInt BinomialPolynomial::lcm_denominator() const {
  BigInt l = 1;
  for (const auto& a : alpha_) l = mp::lcm(l, BigInt(mp::denominator(a)));
  return l;
}

GrahamVerdict graham_complete_test(const std::vector<Rational>& monomial) {
  GrahamVerdict v;
  v.binomial = BinomialPolynomial::from_monomial(monomial);
  v.scale = v.binomial.lcm_denominator();
  BigInt g = 0;
  for (const auto& a : v.binomial.alpha()) {
    g = mp::gcd(g, BigInt(mp::numerator(a)));
    const Rational s = a * Rational(v.scale);
    v.scaled.push_back(mp::numerator(s));
  }
  if (v.binomial.alpha().back() <= 0) {
    v.failing_condition = 1;
  } else if (g != 1) {
    v.failing_condition = 3;
  }
  v.complete = v.failing_condition == 0;
  return v;
}

bool SequencePrefix::strictly_increasing() const {
  for (std::size_t i = 1; i < terms.size(); ++i)
    if (terms[i] <= terms[i - 1]) return false;
  return true;
}

SequencePrefix make_prefix(const std::vector<Int>& terms, std::string rule) {
  SequencePrefix p;
  p.rule = std::move(rule);
  for (Int t : terms) p.terms.emplace_back(t);
  return p;
}

Window prefix_completeness_window(const SequencePrefix& a, std::uint64_t bit_budget) {
  if (a.terms.empty()) throw InvalidArgument("empty prefix");
  BigInt total = 0;
  std::vector<Int> vals;
  for (const auto& t : a.terms) {
    total += t;
    vals.push_back(to_int(t, "term"));
  }
  if (total + 1 > BigInt(bit_budget)) throw ResourceError("prefix total exceeds the bit budget");
  const auto mask = subset_sums(ElementSet(std::move(vals), true), std::nullopt, bit_budget);
  const auto run = longest_interval(mask);
  return {run.start, run.start + run.length - 1};
}

FSequence gen_F(const Rational& eps, const std::vector<BigInt>& initial, Int n) {
  check_eps(eps);
  if (initial.empty()) throw InvalidArgument("initial segment is empty");
  for (const auto& t : initial)
    if (t <= 0) throw InvalidArgument("initial terms must be positive");
  if (n < static_cast<Int>(initial.size())) throw InvalidArgument("N below the initial length");
  FSequence out;
  auto& f = out.prefix.terms;
  f = initial;
  out.prefix.rule = "F";
  out.prefix.params = {{"eps", to_string(eps)}, {"N", std::to_string(n)}};
  std::vector<BigInt> prefix{0};
  for (const auto& t : f) prefix.push_back(prefix.back() + t);
  for (Int k = static_cast<Int>(f.size()) + 1; k <= n; ++k) {
    const auto fl = floor_of(eps * Rational(k)).convert_to<std::size_t>();
    if (fl < 1) throw InvalidArgument("eps*n < 1 at the first extended index");
    f.push_back(prefix[fl]);
    prefix.push_back(prefix.back() + f.back());
  }
  if (n >= 16) {
    const double ln = std::log(static_cast<double>(n));
    GrowthProxy g;
    g.ratio = log_big(f.back()) / (ln * ln);
    g.target = 1.0 / (2.0 * std::log(1.0 / to_double(eps)));
    out.proxy = g;
  }
  return out;
}

FriendlyReport friendly_conditions(const std::vector<BigInt>& b, const Rational& eps) {
  FriendlyReport r;
  const std::size_t n = b.size();
  SequencePrefix tmp;
  tmp.terms = b;
  r.strictly_increasing = tmp.strictly_increasing();
  if (n == 0) return r;
  const auto need = needed_slack(b, eps);
  r.best_C = *std::max_element(need.begin(), need.end());

  // gap[i] = b_{i+2} - b_{i+1}, i.e. Delta b_{i+1}.
  std::vector<BigInt> gap;
  for (std::size_t i = 1; i < n; ++i) gap.push_back(b[i] - b[i - 1]);
  const std::size_t g = gap.size();
  if (g >= 4) {
    std::vector<BigInt> suffix_min(gap);
    for (std::size_t i = g - 1; i-- > 0;) suffix_min[i] = std::min(suffix_min[i], suffix_min[i + 1]);
    r.gaps_grow = true;
    for (std::size_t q = 1; q < 4; ++q)
      if (suffix_min[q * g / 4] <= suffix_min[(q - 1) * g / 4]) r.gaps_grow = false;
  }
  if (g > 0) {
    std::size_t from = g - 1;
    while (from > 0 && gap[from - 1] <= gap[from]) --from;
    r.gaps_monotone_from = static_cast<Int>(from + 1);
  }

  // B(x) counts terms <= x; ratio_i = (B(2^{i+1}) - B(2^i)) / i while 2^{i+1} <= b_N.
  if (r.strictly_increasing) {
    for (std::size_t i = 1; (BigInt(1) << (i + 1)) <= b.back(); ++i) {
      const auto lo = std::upper_bound(b.begin(), b.end(), BigInt(1) << i);
      const auto hi = std::upper_bound(b.begin(), b.end(), BigInt(1) << (i + 1));
      r.dyadic_ratios.push_back(static_cast<double>(hi - lo) / static_cast<double>(i));
    }
    const auto& d = r.dyadic_ratios;
    if (d.size() >= 2) r.dyadic_counts_grow = d.back() > d.front();
    if (!d.empty()) {
      std::size_t from = d.size() - 1;
      while (from > 0 && d[from - 1] <= d[from]) --from;
      r.dyadic_monotone_from = static_cast<Int>(from + 1);
    }
  }

  // Largest c with c*gap_i <= gap_j (i < j) and gap_j <= gap_i / c whenever b_j < 2 b_i.
  auto best_c_over = [&](std::size_t start) {
    double c = 1.0;
    if (g - start < 2) return c;
    std::vector<double> lg(g);
    for (std::size_t i = 0; i < g; ++i) lg[i] = gap[i] > 0 ? log_big(gap[i]) : -HUGE_VAL;
    double run_max = lg[start];
    std::deque<std::size_t> window;  // indices i < j with 2 b_i > b_j, increasing lg
    std::size_t left = start;
    for (std::size_t j = start + 1; j < g; ++j) {
      c = std::min(c, std::exp(lg[j] - run_max));
      run_max = std::max(run_max, lg[j]);
      const std::size_t i_new = j - 1;
      while (!window.empty() && lg[window.back()] >= lg[i_new]) window.pop_back();
      window.push_back(i_new);
      while (left < j && 2 * b[left] <= b[j]) ++left;
      while (!window.empty() && window.front() < left) window.pop_front();
      if (!window.empty()) c = std::min(c, std::exp(lg[window.front()] - lg[j]));
    }
    return std::max(c, 0.0);
  };
  if (r.strictly_increasing && g >= 2) {
    r.best_c = best_c_over(0);
    r.best_c_tail = best_c_over(g / 2);
  }

  if (r.best_c > 0) {
    std::optional<Int> last_fail;
    for (std::size_t k = 1;; ++k) {
      const double idx = std::floor(2.0 * static_cast<double>(k) / r.best_c) + 1;
      if (idx > static_cast<double>(n) || k + 1 > n) break;
      ++r.doubling_tested;
      if (b[static_cast<std::size_t>(idx) - 1] < 2 * b[k]) last_fail = static_cast<Int>(k);
    }
    if (r.doubling_tested > 0) r.doubling_from = last_fail ? *last_fail + 1 : 1;
  }
  return r;
}

FriendlySequence gen_friendly(const Rational& eps, const std::vector<BigInt>& initial, Int n) {
  check_eps(eps);
  if (initial.empty()) throw InvalidArgument("initial segment is empty");
  for (const auto& t : initial)
    if (t <= 0) throw InvalidArgument("initial terms must be positive");
  if (n < static_cast<Int>(initial.size())) throw InvalidArgument("N below the initial length");
  FriendlySequence out;
  auto& b = out.prefix.terms;
  b = initial;
  out.prefix.rule = "friendly";
  out.prefix.params = {{"eps", to_string(eps)}, {"N", std::to_string(n)}};
  std::vector<BigInt> prefix{0};
  for (const auto& t : b) prefix.push_back(prefix.back() + t);
  for (Int k = static_cast<Int>(b.size()) + 1; k <= n; ++k) {
    const Rational en = eps * Rational(k);
    const BigInt fl = floor_of(en);
    const Rational frac = en - Rational(fl);
    const BigInt ceil = frac == 0 ? fl : fl + 1;
    if (fl < 1 || ceil >= k) throw InvalidArgument("eps*n out of range at the first extended index");
    const auto flz = fl.convert_to<std::size_t>();
    const auto cz = ceil.convert_to<std::size_t>();
    b.push_back(floor_of(frac * Rational(b[cz - 1])) + prefix[flz]);
    prefix.push_back(prefix.back() + b.back());
  }
  out.report = friendly_conditions(b, eps);
  return out;
}

EpsCheck eps_necessary_check(const SequencePrefix& a, const Rational& eps, Int c_max) {
  EpsCheck out;
  if (a.terms.empty()) {
    out.holds = true;
    return out;
  }
  out.needed = needed_slack(a.terms, eps);
  out.best_C = *std::max_element(out.needed.begin(), out.needed.end());
  out.holds = out.best_C <= c_max;
  if (out.holds) return out;

  EpsWitness w;
  const Int n_terms = static_cast<Int>(a.terms.size());
  for (Int k = 1; k <= n_terms; ++k) {
    const Int g = out.needed[k - 1] - 1;
    if (g < c_max) continue;
    if (!w.indices.empty() && g <= w.indices.back()) continue;
    w.indices.push_back(k);
    w.slack.push_back(g);
  }
  std::vector<bool> keep(a.terms.size(), true);
  for (std::size_t j = 0; j < w.indices.size(); ++j) {
    const Int fl = floor_of(eps * Rational(w.indices[j])).convert_to<Int>();
    for (Int i = fl + w.slack[j] + 1; i <= w.indices[j]; ++i) {
      keep[i - 1] = false;
      w.deleted.push_back(i);
    }
  }
  w.density_ok = true;
  for (Int nj : w.indices) {
    Int kept = 0;
    for (Int i = 1; i <= nj; ++i) kept += keep[i - 1] ? 1 : 0;
    if (Rational(kept) < eps * Rational(nj)) w.density_ok = false;
  }

  const Int n1 = w.indices.front();
  w.value = a.terms[n1 - 1];
  std::vector<BigInt> below;
  BigInt kept_sum = 0;
  for (Int i = 1; i <= n_terms; ++i)
    if (keep[i - 1] && a.terms[i - 1] <= w.value) {
      below.push_back(a.terms[i - 1]);
      kept_sum += a.terms[i - 1];
    }
  if (w.value + 1 <= BigInt(kDefaultBitBudget)) {
    w.method = "dp";
    std::vector<Int> vals;
    for (const auto& t : below) vals.push_back(t.convert_to<Int>());
    const Int target = w.value.convert_to<Int>();
    w.certified = !subset_sums(ElementSet(std::move(vals), true), target).contains(target);
  } else {
    w.method = "sum";
    w.certified = kept_sum < w.value;
  }
  out.witness = std::move(w);
  return out;
}

SequencePrefix interlace_sample(const SequencePrefix& b, Int w, std::uint64_t seed) {
  if (!b.strictly_increasing()) throw InvalidArgument("B must be strictly increasing");
  if (w < 0) throw InvalidArgument("w must be nonnegative");
  const auto primes = w >= 2 ? nt::primes_up_to(w) : std::vector<Int>{};
  Rng rng(seed, "interlace_sample");
  SequencePrefix out;
  out.rule = "interlace";
  out.params = {{"w", std::to_string(w)}};
  out.seed = seed;
  constexpr Int kEnumerate = Int{1} << 20;
  constexpr int kAttempts = 4096;
  for (std::size_t j = 0; j + 1 < b.terms.size(); ++j) {
    const BigInt& lo = b.terms[j];
    const BigInt len = b.terms[j + 1] - lo;
    std::optional<BigInt> pick;
    if (len <= kEnumerate) {
      std::vector<BigInt> ok;
      for (Int i = 0; i < len; ++i)
        if (smooth_free(lo + i, primes, w)) ok.push_back(lo + i);
      if (!ok.empty()) pick = ok[rng.below(ok.size())];
    } else {
      for (int t = 0; t < kAttempts && !pick; ++t) {
        BigInt c = lo + random_below(rng, len);
        if (smooth_free(c, primes, w)) pick = c;
      }
    }
    out.terms.push_back(pick.value_or(lo));
    if (out.terms.back() < lo || out.terms.back() >= b.terms[j + 1])
      throw std::logic_error("interlace_sample left its interval");
  }
  return out;
}

}  // namespace sumlab::completeness
