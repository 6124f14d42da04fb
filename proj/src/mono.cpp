#include "sumlab/mono.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "json.hpp"

#include "sumlab/bitset.hpp"
#include "sumlab/numtheory.hpp"
#include "sumlab/parallel.hpp"

namespace sumlab::mono {

namespace {

Int ceil_div(Int a, Int b) { return (a + b - 1) / b; }

// Step-1 interval for k: [ceil(m/(k+1)), m-1] when k = 1, else [ceil(m/(k+1)), floor(m/k)].
std::pair<Int, Int> interval_bounds(Int m, Int k) {
  return {ceil_div(m, k + 1), k == 1 ? m - 1 : m / k};
}

// x in [1, d] with x = s^{-1} m (mod d).
Int residue_multiplier(Int s, Int d, Int m) {
  if (d == 1) return 1;
  Int inv = 0;
  for (Int v = 1; v < d; ++v)
    if ((s * v) % d == 1) {
      inv = v;
      break;
    }
  const Int x = static_cast<Int>((static_cast<__int128>(inv) * (m % d)) % d);
  return x == 0 ? d : x;
}

Int largest_prime_factor(Int v) {
  Int best = 1;
  for (auto [p, e] : nt::factorize(v)) best = std::max(best, p);
  return best;
}

struct DSearch {
  Int d = 1;
  bool fallback = true;
};

DSearch search_d(Int n, Int m, Int r, double kappa) {
  const double ll = std::log(std::log(static_cast<double>(n)));
  const double lo = kappa * static_cast<double>(nt::euler_phi(m)) / static_cast<double>(m) * static_cast<double>(r) *
                    ll / 64.0;
  const double hi = 2 * lo;
  if (!(hi >= 1)) return {};
  const Int dm = nt::d_m(m);
  const Int q = r / 4;
  const Int pmax = q >= 1 ? nt::nth_prime(static_cast<std::size_t>(q)) : 1;
  const Int top = static_cast<Int>(std::floor(hi));
  for (Int d = top / dm * dm; d >= 1 && static_cast<double>(d) >= lo; d -= dm) {
    if (std::gcd(d, m) != 1) continue;
    if (largest_prime_factor(d) > pmax) continue;
    return {d, false};
  }
  return {};
}

// First-fit decreasing into classes whose sum stays below m. A max-tree over the
// remaining room (m - 1 - sum) finds the leftmost bin that still fits in O(log n).
std::vector<std::vector<Int>> pack_leftover(std::vector<Int> rest, Int m) {
  std::sort(rest.rbegin(), rest.rend());
  std::size_t leaves = 1;
  while (leaves < std::max<std::size_t>(rest.size(), 1)) leaves *= 2;
  std::vector<Int> room(2 * leaves, m - 1);
  std::vector<std::vector<Int>> bins;
  for (Int t : rest) {
    std::size_t node = 1;
    while (node < leaves) node = room[2 * node] >= t ? 2 * node : 2 * node + 1;
    const std::size_t b = node - leaves;
    if (b == bins.size()) bins.emplace_back();
    bins[b].push_back(t);
    room[node] -= t;
    for (node /= 2; node >= 1; node /= 2) room[node] = std::max(room[2 * node], room[2 * node + 1]);
  }
  for (auto& bin : bins) std::sort(bin.begin(), bin.end());
  return bins;
}

std::vector<Int> primes_coprime_to(Int m, Int count) {
  std::vector<Int> out;
  for (std::size_t i = 1; static_cast<Int>(out.size()) < count; ++i) {
    const Int p = nt::nth_prime(i);
    if (m % p != 0) out.push_back(p);
  }
  return out;
}

struct ClassCheck {
  bool avoids = true;
  Int max_sum = 0;  // largest achievable sum <= m
};

ClassCheck check_class(const std::vector<Int>& elems, Int m) {
  Int total = 0;
  for (Int t : elems) total += t;
  if (total < m) return {true, total};
  // All sums are multiples of g, so run the DP on elems / g.
  Int g = 0;
  for (Int t : elems) g = std::gcd(g, t);
  const Int cap = m / g;
  if (static_cast<std::uint64_t>(cap) + 1 > kDefaultBitBudget)
    throw ResourceError("class DP exceeds the bit budget");
  Bitset b(static_cast<std::size_t>(cap) + 1);
  b.set(0);
  Int reach = 0;
  for (Int t : elems) {
    const Int s = t / g;
    if (s > cap) continue;
    reach = std::min(cap, reach + s);
    b.shift_or(static_cast<std::size_t>(s), static_cast<std::size_t>(reach));
  }
  const bool hit = m % g == 0 && b.test(static_cast<std::size_t>(cap));
  return {!hit, static_cast<Int>(b.highest()) * g};
}

std::string join(const std::vector<Int>& v) {
  std::ostringstream os;
  for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
  return os.str();
}

}  // namespace

std::string ColorClass::label() const {
  const std::string p = "(" + std::to_string(param) + ")";
  switch (kind) {
    case ClassKind::interval: return "S1" + p;
    case ClassKind::prime: return "S2" + p;
    case ClassKind::residue_high: return "Ss1" + p;
    case ClassKind::residue_mid: return "Ss2" + p;
    case ClassKind::leftover: return "leftover" + p;
    case ClassKind::trivial: return "trivial";
    case ClassKind::search: return "search" + p;
  }
  return "?";
}

double regime_threshold(Int n) {
  const double ln = std::log(static_cast<double>(n));
  const double ll = std::max(0.0, std::log(ln));
  return std::pow(static_cast<double>(n), 1.5) * std::sqrt(ll) / std::sqrt(ln);
}

Coloring construct_coloring(Int n, Int m, Int r, const BuildOptions& opt) {
  if (n < 2 || m < 1) throw InvalidArgument("construct_coloring needs n >= 2 and m >= 1");
  if (m <= n - 1) throw InvalidArgument("m lies in [1, n-1], so no colouring avoids it");
  if (r < 2 || r % 2 != 0) throw InvalidArgument("r must be even and at least 2");
  Coloring c;
  c.n = n;
  c.m = m;
  c.r = r;
  const Int top = n - 1;
  if (2 * m > n * (n - 1)) {
    std::vector<Int> all(static_cast<std::size_t>(top));
    std::iota(all.begin(), all.end(), Int{1});
    c.classes.push_back({ClassKind::trivial, 0, std::move(all)});
    return c;
  }
  std::vector<char> used(static_cast<std::size_t>(n), 0);
  auto take = [&](ClassKind kind, Int param, std::vector<Int> elems) {
    if (elems.empty()) return;
    for (Int t : elems) used[static_cast<std::size_t>(t)] = 1;
    c.classes.push_back({kind, param, std::move(elems)});
  };
  auto prime_classes = [&](Int count) {
    for (Int p : primes_coprime_to(m, count)) {
      if (p > top) break;
      std::vector<Int> elems;
      for (Int t = p; t <= top; t += p)
        if (!used[static_cast<std::size_t>(t)]) elems.push_back(t);
      take(ClassKind::prime, p, std::move(elems));
    }
  };

  c.regime = static_cast<double>(m) <= regime_threshold(n) ? 1 : 2;
  if (c.regime == 1) {
    for (Int k = 1; k <= r / 2; ++k) {
      auto [lo, hi] = interval_bounds(m, k);
      if (lo > top) continue;
      std::vector<Int> elems;
      for (Int t = lo; t <= std::min(hi, top); ++t)
        if (!used[static_cast<std::size_t>(t)]) elems.push_back(t);
      take(ClassKind::interval, k, std::move(elems));
    }
    prime_classes(r / 4);
    if (opt.d) {
      if (*opt.d < 1 || std::gcd(*opt.d, m) != 1) throw InvalidArgument("d must be positive and coprime to m");
      c.d = *opt.d;
      c.d_fallback = false;
    } else {
      const DSearch ds = search_d(n, m, r, opt.kappa);
      c.d = ds.d;
      c.d_fallback = ds.fallback;
    }
    const Int d = c.d;
    for (Int s = d == 1 ? 0 : 1; s < std::max<Int>(d, 1); ++s) {
      if (d > 1 && std::gcd(s, d) != 1) continue;
      const Int x = residue_multiplier(s, d, m);
      std::vector<Int> high, mid;
      for (Int t = s == 0 ? d : s; t <= top; t += d) {
        if (used[static_cast<std::size_t>(t)]) continue;
        if (t * x >= m)
          high.push_back(t);
        else if (t * (d + x) >= m)
          mid.push_back(t);
      }
      take(ClassKind::residue_high, s, std::move(high));
      take(ClassKind::residue_mid, s, std::move(mid));
    }
  } else {
    prime_classes(7 * r / 8);
  }
  std::vector<Int> rest;
  for (Int t = 1; t <= top; ++t)
    if (!used[static_cast<std::size_t>(t)]) rest.push_back(t);
  Int i = 0;
  for (auto& bin : pack_leftover(std::move(rest), m)) take(ClassKind::leftover, i++, std::move(bin));
  return c;
}

Coloring build_avoiding_coloring(Int n, Int m, const BuildOptions& opt) {
  auto finish = [&](Coloring c) {
    const Certificate cert = verify_coloring(c, opt.threads);
    if (!cert.pass) {
      const std::string bad = cert.params.count("failing_class") ? cert.params.at("failing_class") : "?";
      throw ConstructionError("class " + bad + " reaches " + std::to_string(m));
    }
    return c;
  };
  if (opt.r) return finish(construct_coloring(n, m, *opt.r, opt));
  // Any r >= n - 1 fits, since classes are nonempty and disjoint.
  Int hi = 2;
  while (construct_coloring(n, m, hi, opt).colors() > hi) hi *= 2;
  for (Int r = hi / 2 + 2; r < hi; r += 2) {
    Coloring c = construct_coloring(n, m, r, opt);
    if (c.colors() <= r) return finish(std::move(c));
  }
  return finish(construct_coloring(n, m, hi, opt));
}

Certificate verify_coloring(const Coloring& c, unsigned threads) {
  if (c.n < 1 || c.m < 1) throw InvalidArgument("coloring needs n, m >= 1");
  const Int top = c.n - 1;
  std::vector<char> seen(static_cast<std::size_t>(std::max<Int>(top, 0)) + 1, 0);
  for (const auto& cls : c.classes)
    for (Int t : cls.elements) {
      if (t < 1 || t > top) throw InvalidArgument("element " + std::to_string(t) + " outside [1, n-1]");
      if (seen[static_cast<std::size_t>(t)]++) throw InvalidArgument("element " + std::to_string(t) + " coloured twice");
    }
  for (Int t = 1; t <= top; ++t)
    if (!seen[static_cast<std::size_t>(t)]) throw InvalidArgument("element " + std::to_string(t) + " uncoloured");

  std::vector<ClassCheck> results(c.classes.size());
  parallel_for(c.classes.size(), threads, [&](std::uint64_t i) { results[i] = check_class(c.classes[i].elements, c.m); });

  Certificate cert;
  cert.claim = "coloring avoids m";
  cert.mode = "exact";
  cert.params["n"] = std::to_string(c.n);
  cert.params["m"] = std::to_string(c.m);
  cert.params["colors"] = std::to_string(c.colors());
  std::vector<Int> maxes;
  cert.pass = true;
  for (std::size_t i = 0; i < results.size(); ++i) {
    maxes.push_back(results[i].max_sum);
    ++cert.checked;
    if (!results[i].avoids) {
      cert.pass = false;
      cert.params["failing_class"] = c.classes[i].label();
      cert.witness = c.classes[i].elements;
      cert.missing = c.m;
      break;
    }
  }
  cert.params["class_max"] = join(maxes);
  cert.vacuous = c.classes.empty();
  return cert;
}

bool rules_hold(const Coloring& c) {
  const Int m = c.m;
  std::vector<Int> prime_labels;
  for (const auto& cls : c.classes)
    if (cls.kind == ClassKind::prime) prime_labels.push_back(cls.param);
  const Int kmax = c.r / 2;
  auto in_step1 = [&](Int t) {
    if (c.regime != 1) return false;
    // Interval k is [ceil(m/(k+1)), ...]; t lands in some k <= kmax iff t >= ceil(m/(kmax+1)).
    return t >= ceil_div(m, kmax + 1) && t <= m - 1;
  };
  auto in_prime = [&](Int t, Int below) {
    for (Int p : prime_labels)
      if (p < below && t % p == 0) return true;
    return false;
  };
  for (const auto& cls : c.classes) {
    for (Int t : cls.elements) {
      switch (cls.kind) {
        case ClassKind::interval: {
          const auto [lo, hi] = interval_bounds(m, cls.param);
          if (cls.param > kmax || t < lo || t > hi) return false;
          if (cls.param > 1 && t >= ceil_div(m, cls.param)) return false;
          break;
        }
        case ClassKind::prime: {
          const Int p = cls.param;
          if (t % p != 0 || m % p == 0 || nt::factorize(p).size() != 1 || nt::factorize(p)[0].second != 1) return false;
          if (in_step1(t) || in_prime(t, p)) return false;
          break;
        }
        case ClassKind::residue_high:
        case ClassKind::residue_mid: {
          const Int d = c.d;
          const Int s = cls.param;
          if (t % d != s % d || std::gcd(t, d) != 1 || in_step1(t) || in_prime(t, m + 1)) return false;
          const Int x = residue_multiplier(s, d, m);
          const bool high = t * x >= m;
          const bool mid = !high && t * (d + x) >= m;
          if (cls.kind == ClassKind::residue_high ? !high : !mid) return false;
          break;
        }
        case ClassKind::leftover: break;
        case ClassKind::trivial:
          if (2 * m <= c.n * (c.n - 1)) return false;
          break;
        case ClassKind::search: break;
      }
    }
    if (cls.kind == ClassKind::leftover) {
      const Int total = std::accumulate(cls.elements.begin(), cls.elements.end(), Int{0});
      if (total >= m) return false;
    }
  }
  return true;
}

namespace {

using Mask = unsigned __int128;

struct FSearch {
  Int m = 0;
  Mask limit = 0;  // bits 0..m
  Mask hit = 0;    // bit m
  std::vector<Int> order;
  std::vector<Mask> masks;
  std::vector<int> assign;
  std::uint64_t nodes = 0;

  bool dfs(std::size_t i, int used, int r) {
    ++nodes;
    if (i == order.size()) return true;
    const Int t = order[i];
    for (int k = 0; k < std::min(used + 1, r); ++k) {
      const Mask before = masks[static_cast<std::size_t>(k)];
      const Mask after = (before | (before << t)) & limit;
      if (after & hit) continue;
      masks[static_cast<std::size_t>(k)] = after;
      assign[i] = k;
      if (dfs(i + 1, std::max(used, k + 1), r)) return true;
      masks[static_cast<std::size_t>(k)] = before;
    }
    return false;
  }
};

}  // namespace

ExactF exact_f(Int n, Int m, Int r_max) {
  if (n < 1 || m < 1) throw InvalidArgument("exact_f needs n, m >= 1");
  if (n > kExactFMaxN) throw SizeError("exact_f is limited to n <= " + std::to_string(kExactFMaxN));
  ExactF out;
  out.witness.n = n;
  out.witness.m = m;
  if (n == 1) {
    out.value = 0;
    return out;
  }
  if (m <= n - 1 || r_max < 1) return out;
  if (2 * m > n * (n - 1)) {
    std::vector<Int> all(static_cast<std::size_t>(n - 1));
    std::iota(all.begin(), all.end(), Int{1});
    out.witness.classes.push_back({ClassKind::trivial, 0, std::move(all)});
    out.witness.r = 1;
    out.value = 1;
    return out;
  }
  FSearch fs;
  fs.m = m;
  fs.hit = Mask{1} << m;
  fs.limit = (fs.hit << 1) - 1;
  for (Int t = n - 1; t >= 1; --t) fs.order.push_back(t);
  for (Int r = 1; r <= r_max; ++r) {
    fs.masks.assign(static_cast<std::size_t>(r), Mask{1});
    fs.assign.assign(fs.order.size(), -1);
    const bool ok = fs.dfs(0, 0, static_cast<int>(r));
    if (!ok) continue;
    std::vector<std::vector<Int>> classes(static_cast<std::size_t>(r));
    for (std::size_t i = 0; i < fs.order.size(); ++i) classes[static_cast<std::size_t>(fs.assign[i])].push_back(fs.order[i]);
    Int idx = 0;
    for (auto& cls : classes) {
      if (cls.empty()) continue;
      std::sort(cls.begin(), cls.end());
      out.witness.classes.push_back({ClassKind::search, idx++, std::move(cls)});
    }
    out.witness.r = r;
    if (!verify_coloring(out.witness).pass) throw ConstructionError("exact_f witness failed verification");
    out.value = out.witness.colors();
    break;
  }
  out.nodes = fs.nodes;
  return out;
}

YReport find_y(Int n, Int m, Int r) {
  if (n < 3 || m < 1 || r < 2) throw InvalidArgument("find_y needs n >= 3, m >= 1, r >= 2");
  const Rational k = Rational(m, nt::euler_phi(m)) * nt::tau(r, m).exact;
  const Rational lo_sq = Rational(15 * r) * m / k;
  const Rational hi_sq = Rational(25 * r) * m / k;
  YReport out;
  out.y_low = std::sqrt(to_double(lo_sq));
  out.y_high = std::sqrt(to_double(hi_sq));
  out.status = "no y at this scale";
  for (Int y = (n - 1) / 2; y >= 1; --y) {
    const Rational y2 = Rational(y) * y;
    if (y2 < lo_sq) break;
    if (y2 > hi_sq) continue;
    out.y = y;
    out.status = "ok";
    const double nd = static_cast<double>(n);
    out.large_enough = static_cast<double>(y) >= std::max(static_cast<double>(r * r), std::pow(nd, 0.6));
    out.count_condition =
        64.0 * to_double(k) * static_cast<double>(y) / (static_cast<double>(r) * std::log(static_cast<double>(r))) >
        std::pow(nd, 0.25);
    break;
  }
  return out;
}

std::string coloring_json(const Coloring& c) {
  nlohmann::json classes = nlohmann::json::array();
  for (const auto& cls : c.classes) {
    nlohmann::json j{{"label", cls.label()}, {"param", cls.param}, {"size", cls.elements.size()}};
    if (cls.kind == ClassKind::interval || cls.kind == ClassKind::trivial) {
      nlohmann::json runs = nlohmann::json::array();
      for (std::size_t i = 0; i < cls.elements.size();) {
        std::size_t k = i;
        while (k + 1 < cls.elements.size() && cls.elements[k + 1] == cls.elements[k] + 1) ++k;
        runs.push_back({cls.elements[i], cls.elements[k]});
        i = k + 1;
      }
      j["runs"] = std::move(runs);
    } else {
      j["elements"] = cls.elements;
    }
    classes.push_back(std::move(j));
  }
  nlohmann::json out{{"n", c.n},           {"m", c.m},           {"regime", c.regime},
                     {"r", c.r},           {"d", c.d},           {"d_fallback", c.d_fallback},
                     {"colors", c.colors()}, {"classes", std::move(classes)}};
  return out.dump();
}

Coloring parse_coloring_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("coloring JSON: ") + e.what());
  }
  auto get = [&](const char* key, Int fallback) { return j.contains(key) ? j.at(key).get<Int>() : fallback; };
  if (!j.contains("n") || !j.contains("m") || !j.contains("classes")) throw InvalidArgument("coloring JSON needs n, m and classes");
  Coloring c;
  c.n = j.at("n").get<Int>();
  c.m = j.at("m").get<Int>();
  c.r = get("r", 0);
  c.d = get("d", 1);
  c.regime = static_cast<int>(get("regime", 0));
  c.d_fallback = j.value("d_fallback", false);
  static const std::pair<const char*, ClassKind> kinds[] = {
      {"S1", ClassKind::interval},      {"S2", ClassKind::prime},     {"Ss1", ClassKind::residue_high},
      {"Ss2", ClassKind::residue_mid},  {"leftover", ClassKind::leftover}, {"trivial", ClassKind::trivial},
      {"search", ClassKind::search}};
  for (const auto& cj : j.at("classes")) {
    ColorClass cls;
    const std::string label = cj.value("label", "leftover(" + std::to_string(c.classes.size()) + ")");
    const std::string head = label.substr(0, label.find('('));
    const auto it = std::find_if(std::begin(kinds), std::end(kinds), [&](const auto& k) { return head == k.first; });
    if (it == std::end(kinds)) throw InvalidArgument("unknown class label " + label);
    cls.kind = it->second;
    cls.param = cj.value("param", Int{0});
    if (cj.contains("runs")) {
      for (const auto& run : cj.at("runs"))
        for (Int t = run.at(0).get<Int>(); t <= run.at(1).get<Int>(); ++t) cls.elements.push_back(t);
    } else {
      cls.elements = cj.at("elements").get<std::vector<Int>>();
    }
    std::sort(cls.elements.begin(), cls.elements.end());
    c.classes.push_back(std::move(cls));
  }
  return c;
}

}  // namespace sumlab::mono
