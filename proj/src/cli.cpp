#include "sumlab/cli.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>

#include "sumlab/completeness.hpp"
#include "sumlab/extremal.hpp"
#include "sumlab/mono.hpp"
#include "sumlab/numtheory.hpp"
#include "sumlab/ramsey.hpp"
#include "sumlab/rng.hpp"
#include "sumlab/structure.hpp"
#include "sumlab/sumset.hpp"

namespace sumlab::cli {

using nlohmann::json;

namespace {

constexpr Int kJsonSafe = Int{1} << 53;

json jint(Int v) { return v > kJsonSafe || v < -kJsonSafe ? json(std::to_string(v)) : json(v); }

json jbig(const BigInt& v) {
  if (v <= kJsonSafe && v >= -kJsonSafe) return json(static_cast<Int>(v));
  return json(v.str());
}

json jints(const std::vector<Int>& v) {
  json a = json::array();
  for (Int x : v) a.push_back(jint(x));
  return a;
}

json jbigs(const std::vector<BigInt>& v) {
  json a = json::array();
  for (const auto& x : v) a.push_back(jbig(x));
  return a;
}

json jinterval(const IntervalWitness& w) { return {{"start", jint(w.start)}, {"length", jint(w.length)}}; }

std::optional<Int> parse_int(const std::string& s) {
  Int v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

std::optional<Rational> parse_rational(const std::string& s) {
  const auto slash = s.find('/');
  const auto num = parse_int(s.substr(0, slash));
  if (!num) return std::nullopt;
  if (slash == std::string::npos) return Rational(*num);
  const auto den = parse_int(s.substr(slash + 1));
  if (!den || *den == 0) return std::nullopt;
  return Rational(*num, *den);
}

std::optional<std::vector<Int>> parse_list(const std::string& s) {
  std::vector<Int> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto v = parse_int(item);
    if (!v) return std::nullopt;
    out.push_back(*v);
  }
  return out;
}

bool parse_flag(const std::string& s) { return s == "1" || s == "true" || s == "yes"; }

// Typed access to validated parameters.
class Params {
 public:
  explicit Params(const ExperimentConfig& c) : c_(c) {}

  bool has(const std::string& k) const { return c_.params.count(k) > 0; }
  Int integer(const std::string& k, std::optional<Int> fallback = std::nullopt) const {
    if (!has(k)) return need(k, fallback);
    return *parse_int(c_.params.at(k));
  }
  std::optional<Int> maybe(const std::string& k) const {
    return has(k) ? std::optional<Int>(*parse_int(c_.params.at(k))) : std::nullopt;
  }
  Rational rational(const std::string& k, std::optional<Rational> fallback = std::nullopt) const {
    if (!has(k)) return need(k, fallback);
    return *parse_rational(c_.params.at(k));
  }
  std::string text(const std::string& k, std::optional<std::string> fallback = std::nullopt) const {
    if (!has(k)) return need(k, fallback);
    return c_.params.at(k);
  }
  std::vector<Int> list(const std::string& k, std::optional<std::vector<Int>> fallback = std::nullopt) const {
    if (!has(k)) return need(k, fallback);
    return *parse_list(c_.params.at(k));
  }
  bool flag(const std::string& k) const { return has(k) && parse_flag(c_.params.at(k)); }
  std::uint64_t seed() const { return c_.seed.value_or(0); }
  unsigned threads() const { return c_.threads; }

 private:
  template <class T>
  static T need(const std::string& k, const std::optional<T>& fallback) {
    if (!fallback) throw ConfigError(k, "missing parameter " + k);
    return *fallback;
  }
  const ExperimentConfig& c_;
};

struct Output {
  std::vector<Certificate> certs;
  json result = json::object();
};

Certificate make_cert(std::string claim, bool pass, std::uint64_t checked = 1, std::string mode = "exact") {
  Certificate c;
  c.claim = std::move(claim);
  c.pass = pass;
  c.checked = checked;
  c.mode = std::move(mode);
  return c;
}

ElementSet input_or(const Params& p, const std::function<std::vector<Int>()>& fallback, bool multiset = false) {
  if (p.has("input")) return read_element_set(p.text("input"), multiset);
  return ElementSet(fallback(), multiset);
}

std::vector<Int> range(Int lo, Int hi, Int step = 1) {
  std::vector<Int> v;
  for (Int x = lo; x <= hi; x += step) v.push_back(x);
  return v;
}

std::vector<BigInt> to_big(const std::vector<Int>& v) { return {v.begin(), v.end()}; }

// ---- experiments ----

void run_sums(const Params& p, Output& o) {
  const ElementSet a = read_element_set(p.text("input"), p.flag("multiset"));
  const SumMask mask = subset_sums(a, p.maybe("cap"));
  const IntervalWitness w = longest_interval(mask);
  o.result = {{"size", a.size()}, {"cap", jint(mask.cap)}, {"count", mask.count()}, {"longest", jinterval(w)},
              {"mask_hex", mask.bits.to_hex()}};
  Certificate c = make_cert("longest interval lies in the subset sums", validates(w, mask), mask.count());
  c.params = {{"size", std::to_string(a.size())}, {"cap", std::to_string(mask.cap)},
              {"start", std::to_string(w.start)}, {"length", std::to_string(w.length)}};
  o.certs.push_back(c);
}

void run_interval(const Params& p, Output& o) {
  const ElementSet a = read_element_set(p.text("input"), p.flag("multiset"));
  const SumMask mask = subset_sums(a, p.maybe("cap"));
  const IntervalWitness w = longest_interval(mask, p.maybe("from"));
  o.result = {{"interval", jinterval(w)}};
  if (p.has("min_len")) {
    if (auto prog = find_homog_progression(mask, p.integer("min_len")))
      o.result["progression"] = {{"first", jint(prog->first)}, {"diff", jint(prog->diff)}, {"count", jint(prog->count)}};
  }
  Certificate c = make_cert("interval lies in the subset sums", validates(w, mask), static_cast<std::uint64_t>(w.length));
  c.params = {{"start", std::to_string(w.start)}, {"length", std::to_string(w.length)}};
  o.certs.push_back(c);
}

void run_homog(const Params& p, Output& o) {
  const Int n = p.integer("n");
  const std::string kind = p.text("set", "full");
  if (!p.has("input") && kind != "full" && kind != "even") throw ConfigError("set", "set must be full or even");
  const ElementSet a = input_or(p, [&] { return kind == "even" ? range(2, n, 2) : range(1, n); });
  const auto r = extremal::homog_pipeline(a, n, p.integer("k_factor", 8));
  const auto& h = r.attempt;
  o.result = {{"d", jint(h.d)},           {"k", jint(h.k)},
              {"k_factor", jint(h.k_factor)}, {"interval", jinterval(h.interval)},
              {"nice", h.nice_status},   {"status", r.status},
              {"reduced_size", h.reduced.size()}};
  const bool ok = r.certified && extremal::validate(h);
  Certificate c = make_cert("homogeneous progression of length at least n", ok, static_cast<std::uint64_t>(h.interval.length));
  c.params = {{"n", std::to_string(n)}, {"d", std::to_string(h.d)}, {"k", std::to_string(h.k)},
              {"first", std::to_string(h.progression.first)}, {"count", std::to_string(h.progression.count)}};
  o.certs.push_back(c);
}

void run_coloring_build(const Params& p, Output& o) {
  const Int n = p.integer("n");
  const Int m = p.integer("m");
  mono::BuildOptions opt;
  opt.r = p.maybe("r");
  opt.d = p.maybe("d");
  opt.kappa = to_double(p.rational("kappa", Rational(1)));
  opt.threads = p.threads();
  const mono::Coloring c = mono::build_avoiding_coloring(n, m, opt);
  o.result = {{"coloring", json::parse(mono::coloring_json(c))}, {"colors", jint(c.colors())}, {"rules_hold", mono::rules_hold(c)}};
  if (n >= 3) {
    const auto g = nt::R_nm(n, m);
    o.result["psi"] = g.psi;
    o.result["R"] = g.r;
    o.result["colors_over_psi"] = static_cast<double>(c.colors()) / g.psi;
  }
  o.certs.push_back(mono::verify_coloring(c, p.threads()));
}

void run_coloring_verify(const Params& p, Output& o) {
  std::ifstream in(p.text("input"));
  if (!in) throw ConfigError("input", "cannot open " + p.text("input"));
  std::stringstream ss;
  ss << in.rdbuf();
  const mono::Coloring c = mono::parse_coloring_json(ss.str());
  o.result = {{"colors", jint(c.colors())}, {"n", jint(c.n)}, {"m", jint(c.m)}};
  o.certs.push_back(mono::verify_coloring(c, p.threads()));
}

void run_f_exact(const Params& p, Output& o) {
  const Int n = p.integer("n");
  const Int m = p.integer("m");
  const Int r_max = p.integer("r_max", std::max<Int>(n, 1));
  const mono::ExactF f = mono::exact_f(n, m, r_max);
  o.result = {{"value", f.value ? json(jint(*f.value)) : json("> " + std::to_string(r_max))}, {"nodes", f.nodes}};
  bool ok = f.value.has_value();
  if (ok && !f.witness.classes.empty()) {
    o.result["coloring"] = json::parse(mono::coloring_json(f.witness));
    ok = mono::verify_coloring(f.witness).pass;
  }
  Certificate c = make_cert("f(n,m) is at most r_max", ok, f.nodes, "search");
  c.params = {{"n", std::to_string(n)}, {"m", std::to_string(m)}, {"r_max", std::to_string(r_max)},
              {"value", f.value ? std::to_string(*f.value) : "> " + std::to_string(r_max)}};
  o.certs.push_back(c);
}

void run_g_exact(const Params& p, Output& o) {
  const Int n = p.integer("n");
  const Int m = p.integer("m");
  const extremal::GResult g = extremal::exact_g(n, m, p.threads());
  o.result = {{"value", jint(g.value)}, {"witness", jints(g.witness)}, {"s_formula", jint(nt::s_formula(n, m))}};
  const bool ok = g.witness.empty() || !subset_sums(ElementSet(g.witness), m).contains(m);
  // Node counts depend on scheduling when threads > 1, so they stay out of the report.
  Certificate c = make_cert("witness of size g(n,m) avoids m", ok, 1, "search");
  c.params = {{"n", std::to_string(n)}, {"m", std::to_string(m)}, {"value", std::to_string(g.value)}};
  c.witness = g.witness;
  o.certs.push_back(c);
}

void run_g_constructions(const Params& p, Output& o) {
  const Int n = p.integer("n");
  const Int m = p.integer("m");
  json list = json::array();
  for (const auto& k : extremal::g_constructions(n, m, p.flag("force"))) {
    list.push_back({{"name", k.name},
                    {"set", jints(k.set)},
                    {"size", jint(k.size())},
                    {"applicable", k.applicable},
                    {"verified", k.verified},
                    {"reason", k.reason}});
    const bool ok = k.set.empty() || !subset_sums(ElementSet(k.set), m).contains(m);
    Certificate c = make_cert(k.name + " avoids m", ok, k.set.size());
    c.params = {{"n", std::to_string(n)}, {"m", std::to_string(m)}, {"size", std::to_string(k.size())}};
    c.witness = k.set;
    c.vacuous = k.set.empty();
    o.certs.push_back(c);
  }
  o.result = {{"constructions", list}, {"s_formula", jint(nt::s_formula(n, m))}};
}

void run_H_exact(const Params& p, Output& o) {
  const Int n = p.integer("n");
  const auto h = extremal::exact_H(n);
  o.result = {{"value", jint(h.value)}, {"first", jints(h.first)}, {"second", jints(h.second)}};
  bool ok = true;
  if (!h.first.empty()) {
    const SumMask a = subset_sums(ElementSet(h.first));
    const SumMask b = subset_sums(ElementSet(h.second));
    for (Int s : a.values()) ok = ok && (s == 0 || !b.contains(s));
  }
  Certificate c = make_cert("sum sets of the pair meet only at 0", ok);
  c.params = {{"n", std::to_string(n)}, {"value", std::to_string(h.value)}};
  c.vacuous = h.first.empty();
  o.certs.push_back(c);
}

void run_h_exact(const Params& p, Output& o) {
  const Int n = p.integer("n");
  const auto h = extremal::exact_h(n);
  o.result = {{"value", jint(h.value)}, {"witness", jints(h.witness)}, {"nodes", h.nodes}};
  // a is a mean of others iff some subset of the others, shifted by -a, sums to zero with >= 2 terms.
  bool ok = true;
  const auto& w = h.witness;
  for (std::size_t a = 0; a < w.size(); ++a) {
    std::vector<Int> others;
    for (std::size_t i = 0; i < w.size(); ++i)
      if (i != a) others.push_back(w[i]);
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << others.size()); ++mask) {
      if (std::popcount(mask) < 2) continue;
      Int sum = 0;
      for (std::size_t i = 0; i < others.size(); ++i)
        if (mask >> i & 1U) sum += others[i];
      if (sum == w[a] * std::popcount(mask)) ok = false;
    }
  }
  Certificate c = make_cert("witness is non-averaging", ok, h.nodes, "search");
  c.params = {{"n", std::to_string(n)}, {"value", std::to_string(h.value)}};
  c.witness = w;
  o.certs.push_back(c);
  if (n <= extremal::kExactHMaxN) {
    const auto s = extremal::straus_check(n);
    o.result["H"] = jint(s.H);
    Certificate st = make_cert("h(n) <= 2H(n) + 2", s.holds);
    st.params = {{"n", std::to_string(n)}, {"h", std::to_string(s.h)}, {"H", std::to_string(s.H)}};
    o.certs.push_back(st);
  }
}

ramsey::RamseyBlock block_from(const Params& p, std::uint64_t seed) {
  return ramsey::sample_block(p.integer("x"), p.rational("eps", Rational(1, 2)), p.integer("C", 2), p.maybe("w"), seed);
}

json block_json(const ramsey::RamseyBlock& b) {
  return {{"x", jint(b.x)},
          {"eps", to_string(b.eps)},
          {"C", jint(b.C)},
          {"w", jint(b.w)},
          {"terms", jints(b.terms)},
          {"distinct", b.distinct},
          {"subset_size", jint(b.subset_size())},
          {"target", {jint(b.target.start), jint(b.target.end() - 1)}},
          {"seed", std::to_string(b.seed)}};
}

void run_ramsey_sample(const Params& p, Output& o) {
  const auto b = block_from(p, p.seed());
  o.result = block_json(b);
  bool ok = true;
  for (Int t : b.terms) ok = ok && t >= b.x && t < 2 * b.x && !nt::has_prime_factor_at_most(t, b.w);
  Certificate c = make_cert("terms lie in [x, 2x) and avoid primes up to w", ok, b.terms.size());
  c.seed = p.seed();
  c.params = {{"x", std::to_string(b.x)}, {"w", std::to_string(b.w)}, {"size", std::to_string(b.terms.size())}};
  o.certs.push_back(c);
}

void run_ramsey_verify(const Params& p, Output& o) {
  const Int seeds = p.integer("seeds", 1);
  const std::string mode = p.text("mode", "auto");
  if (mode != "auto" && mode != "exact" && mode != "montecarlo" && mode != "heuristic")
    throw ConfigError("mode", "mode must be auto, exact, montecarlo or heuristic");
  const auto trials = static_cast<std::uint64_t>(p.integer("trials", 10000));
  json runs = json::array();
  for (Int i = 0; i < seeds; ++i) {
    const std::uint64_t seed = derive_seed(p.seed(), "ramsey-verify", static_cast<std::uint64_t>(i));
    const auto b = block_from(p, seed);
    const Int s = b.subset_size();
    ramsey::VerifyMode vm = ramsey::VerifyMode::exact();
    const bool small = ramsey::binomial_saturating(b.terms.size(), static_cast<std::uint64_t>(s)) <= 10'000'000;
    if (mode == "montecarlo" || (mode == "auto" && !small)) vm = ramsey::VerifyMode::montecarlo(trials, seed);
    if (mode == "heuristic") vm = ramsey::VerifyMode::heuristic();
    vm.threads = p.threads();
    Certificate c = ramsey::verify_subsequences(b.elements(), s, b.target, vm);
    c.params["block_seed"] = std::to_string(seed);
    o.certs.push_back(c);
    runs.push_back(block_json(b));
  }
  o.result = {{"blocks", runs}};
}

void run_ramsey_concat(const Params& p, Output& o) {
  const auto cp = ramsey::concat_prefix(p.integer("r", 2), p.integer("x0"), p.integer("blocks", 3), p.integer("C", 2), p.seed());
  json density = json::array();
  for (const auto& d : cp.density) density.push_back({{"n", jint(d.n)}, {"count", jint(d.count)}, {"ratio", d.ratio}});
  o.result = {{"sequence", jints(cp.sequence)}, {"density", density}, {"coverage", jinterval(cp.coverage)},
              {"overlaps", cp.overlaps}};
  Certificate c = make_cert("consecutive block targets overlap", cp.all_overlap, cp.blocks.size());
  c.seed = p.seed();
  c.params = {{"r", std::to_string(cp.r)}, {"x0", std::to_string(cp.x0)}, {"blocks", std::to_string(cp.blocks.size())}};
  o.certs.push_back(c);
}

void run_ramsey_lower(const Params& p, Output& o) {
  std::vector<Int> a;
  if (p.has("input")) {
    a = read_element_set(p.text("input")).elements();
  } else {
    const Int k = p.integer("powers", 20);
    for (Int i = 0; i <= k; ++i) a.push_back(Int{1} << i);
  }
  const auto rep = ramsey::adversary_coloring(a, p.integer("r", 4), p.integer("gap", 2), p.integer("j_min", 3));
  json levels = json::array();
  for (const auto& l : rep.levels)
    levels.push_back({{"j", jint(l.j)}, {"red_max", jint(l.red_max)}, {"red_strong", l.red_strong},
                      {"blue_count", jint(l.blue_count)}, {"blue_strong", l.blue_strong}});
  json missed = json::array();
  std::vector<Int> all_missed;
  for (const auto& mr : rep.missed) {
    missed.push_back({{"j", jint(mr.j)}, {"low", jint(mr.low)}, {"high", jint(mr.high)}, {"missed", jints(mr.missed)}});
    all_missed.insert(all_missed.end(), mr.missed.begin(), mr.missed.end());
  }
  o.result = {{"levels", levels}, {"blue_levels", jints(rep.coloring.blue_levels)}, {"colors", jints(rep.colors)},
              {"missed", missed}, {"status", rep.status}};
  Certificate c = make_cert("coloring leaves integers outside every monochromatic sum set",
                            rep.status == "ok" && !all_missed.empty(), rep.levels.size());
  c.params = {{"r", std::to_string(rep.coloring.r)}, {"status", rep.status}};
  if (!all_missed.empty()) c.missing = all_missed.front();
  o.certs.push_back(c);
}

void run_poly_complete(const Params& p, Output& o) {
  const auto mono = completeness::parse_polynomial(p.text("poly"));
  const auto v = completeness::graham_complete_test(mono);
  json alpha = json::array();
  for (const auto& a : v.binomial.alpha()) alpha.push_back(to_string(a));
  o.result = {{"poly", completeness::format_polynomial(mono)}, {"complete", v.complete},
              {"failing_condition", v.failing_condition}, {"alpha", alpha}, {"scale", jbig(v.scale)},
              {"scaled", jbigs(v.scaled)}};
  Certificate c = make_cert("polynomial is complete", v.complete);
  c.params = {{"poly", completeness::format_polynomial(mono)}, {"failing_condition", std::to_string(v.failing_condition)}};
  o.certs.push_back(c);
}

void run_birch_window(const Params& p, Output& o) {
  std::vector<Int> terms;
  if (p.has("input")) {
    terms = read_element_set(p.text("input"), true).elements();
  } else {
    const Int limit = p.integer("limit", 10000);
    for (Int a = 1; a <= limit; a *= 2)
      for (Int b = a; b <= limit; b *= 3) terms.push_back(b);
    std::sort(terms.begin(), terms.end());
  }
  const auto prefix = completeness::make_prefix(terms, p.has("input") ? "explicit" : "birch");
  const auto w = completeness::prefix_completeness_window(prefix);
  Int total = 0;
  for (Int t : terms) total += t;
  o.result = {{"size", terms.size()}, {"low", jint(w.low)}, {"high", jint(w.high)}, {"total", jint(total)}};
  Certificate c = make_cert("window is [0, total]", w.low == 0 && w.high == total, terms.size());
  c.params = {{"low", std::to_string(w.low)}, {"high", std::to_string(w.high)}, {"total", std::to_string(total)}};
  o.certs.push_back(c);
}

json friendly_json(const completeness::FriendlyReport& r) {
  json j = {{"best_C", jint(r.best_C)},
            {"gaps_grow", r.gaps_grow},
            {"dyadic_counts_grow", r.dyadic_counts_grow},
            {"dyadic_ratios", r.dyadic_ratios},
            {"best_c", r.best_c},
            {"best_c_tail", r.best_c_tail},
            {"strictly_increasing", r.strictly_increasing},
            {"doubling_tested", jint(r.doubling_tested)}};
  if (r.gaps_monotone_from) j["gaps_monotone_from"] = jint(*r.gaps_monotone_from);
  if (r.dyadic_monotone_from) j["dyadic_monotone_from"] = jint(*r.dyadic_monotone_from);
  if (r.doubling_from) j["doubling_from"] = jint(*r.doubling_from);
  return j;
}

void run_friendly(const Params& p, Output& o) {
  const auto f = completeness::gen_friendly(p.rational("eps"), to_big(p.list("initial")), p.integer("n"));
  o.result = {{"terms", jbigs(f.prefix.terms)}, {"report", friendly_json(f.report)}};
  Certificate c = make_cert("sequence is strictly increasing", f.report.strictly_increasing, f.prefix.size());
  c.params = {{"n", std::to_string(f.prefix.size())}, {"best_C", std::to_string(f.report.best_C)}};
  o.certs.push_back(c);
}

void run_f_seq(const Params& p, Output& o) {
  const auto f = completeness::gen_F(p.rational("eps", Rational(1, 2)), to_big(p.list("initial", std::vector<Int>{1})),
                                     p.integer("n"));
  const std::size_t shown = std::min<std::size_t>(f.prefix.size(), 64);
  o.result = {{"head", jbigs({f.prefix.terms.begin(), f.prefix.terms.begin() + static_cast<std::ptrdiff_t>(shown)})},
              {"last", jbig(f.prefix.terms.back())}};
  Certificate c;
  if (f.proxy) {
    o.result["ratio"] = f.proxy->ratio;
    o.result["target"] = f.proxy->target;
    o.result["relative"] = f.proxy->relative();
    c = make_cert("growth ratio within [0.5, 1.5] of the target", f.proxy->relative() >= 0.5 && f.proxy->relative() <= 1.5,
                  f.prefix.size());
  } else {
    c = make_cert("growth ratio within [0.5, 1.5] of the target", true, f.prefix.size());
    c.vacuous = true;
  }
  c.params = {{"n", std::to_string(f.prefix.size())}};
  o.certs.push_back(c);
}

void run_eps_check(const Params& p, Output& o) {
  std::vector<Int> terms;
  if (p.has("input")) {
    terms = read_element_set(p.text("input"), true).elements();
  } else {
    const Int base = p.integer("base", 2);
    const Int count = p.integer("count", 40);
    Int v = 1;
    for (Int i = 0; i <= count; ++i, v *= base) terms.push_back(v);
  }
  const auto chk = completeness::eps_necessary_check(completeness::make_prefix(terms), p.rational("eps"), p.integer("c_max", 8));
  o.result = {{"holds", chk.holds}, {"best_C", jint(chk.best_C)}, {"needed", jints(chk.needed)}};
  Certificate c = make_cert("eps-necessary condition holds", chk.holds, terms.size());
  c.params = {{"best_C", std::to_string(chk.best_C)}};
  if (chk.witness) {
    const auto& w = *chk.witness;
    o.result["witness"] = {{"indices", jints(w.indices)}, {"slack", jints(w.slack)}, {"deleted", jints(w.deleted)},
                           {"value", jbig(w.value)}, {"method", w.method}, {"certified", w.certified},
                           {"density_ok", w.density_ok}};
    c.witness = w.indices;
    c.params["method"] = w.method;
  }
  o.certs.push_back(c);
}

void run_phase(const Params& p, Output& o) {
  structure::PhaseParams pp;
  pp.split = p.rational("split", Rational(3, 4));
  pp.k_cap = p.maybe("k_cap");
  pp.growth_div = p.integer("growth_div", 4);
  pp.saturation_div = p.integer("saturation_div", 4);
  pp.seed = p.seed();
  const auto log = structure::phase_process(p.integer("b"), p.list("residues"), pp);
  json steps = json::array();
  for (const auto& s : log.steps)
    steps.push_back({{"index", jint(s.index)}, {"d", jint(s.d)}, {"phase", structure::phase_name(s.phase)},
                     {"chosen", jint(s.chosen)}, {"before", jint(s.sigma_before)}, {"after", jint(s.sigma_after)}});
  o.result = {{"first_part", jints(log.first_part)}, {"second_part", jints(log.second_part)}, {"steps", steps},
              {"k", jint(log.k)}, {"hypotheses_hold", log.hypotheses_hold}, {"bound", jint(log.bound)},
              {"final_size", log.final_mask.size()}};
  Certificate c = make_cert("final sum set meets the size bound", log.bound_holds.value_or(true), log.steps.size());
  c.vacuous = !log.bound_holds.has_value();
  c.seed = p.seed();
  o.certs.push_back(c);
}

structure::NiceParams nice_params(const Params& p) {
  structure::NiceParams np = structure::NiceParams::desk();
  np.ell = p.integer("ell", np.ell);
  np.t1 = to_double(p.rational("t1", Rational(0)));
  np.t2 = to_double(p.rational("t2", Rational(1)));
  np.density = to_double(p.rational("density", Rational(1)));
  return np;
}

void run_nice(const Params& p, Output& o) {
  const Int n = p.integer("n");
  const std::string kind = p.text("set", "full");
  const ElementSet a = input_or(p, [&] { return kind == "even" ? range(2, n, 2) : range(1, n); });
  const auto t = structure::nice_decompose(a, n, nice_params(p));
  json steps = json::array();
  for (const auto& s : t.log) steps.push_back({{"rule", s.rule}, {"d", jint(s.d)}, {"removed", jints(s.removed)}});
  const bool nice = t.status == structure::NiceStatus::nice;
  o.result = {{"result", jints(t.result.elements())}, {"d", jint(t.d)}, {"steps", steps}, {"nice", nice}};
  Certificate c = make_cert("decomposition ends in a nice set", nice, t.log.size());
  c.params = {{"d", std::to_string(t.d)}, {"size", std::to_string(t.result.size())}};
  o.certs.push_back(c);
}

void run_diverse(const Params& p, Output& o) {
  const ElementSet a = read_element_set(p.text("input"));
  const Int k = p.integer("k");
  const auto r = structure::is_k_diverse(a, k);
  o.result = {{"diverse", r.diverse}};
  if (r.witness) o.result["witness"] = jint(*r.witness);
  if (p.has("budget")) {
    const auto t = structure::diverse_decompose(a, k, p.integer("budget"));
    json steps = json::array();
    for (const auto& s : t.steps) steps.push_back({{"v", jint(s.v)}, {"removed", jints(s.removed)}});
    o.result["decomposition"] = {{"steps", steps}, {"q", jints(t.q.elements())}, {"divisor", jbig(t.divisor)},
                                 {"status", t.status == structure::DecompositionStatus::diverse ? "diverse" : "stuck"}};
  }
  Certificate c = make_cert("set is k-diverse", r.diverse, a.size());
  c.params = {{"k", std::to_string(k)}};
  if (r.witness) c.missing = *r.witness;
  o.certs.push_back(c);
}

void run_numtheory_table(const Params& p, Output& o) {
  const Int n = p.integer("n");
  const Int m = p.integer("m");
  const Int r = p.integer("r", 2);
  const auto g = nt::R_nm(n, m);
  const auto rho = nt::rho_nm(n, m);
  o.result = {{"phi", jint(nt::euler_phi(m))}, {"snd", jint(nt::snd(m))}, {"s_formula", jint(nt::s_formula(n, m))},
              {"tau", nt::tau(r, m).str()}, {"rho", jint(rho.rho)}, {"rho_in_range", rho.in_range},
              {"psi", g.psi}, {"R", g.r}, {"uses_rho", g.uses_rho}, {"m_over_phi", g.m_over_phi.str()},
              {"d_m", jint(nt::d_m(std::max<Int>(m, 2)))}};
  Certificate c = make_cert("R(n,m) is the smaller of psi and rho", g.r == std::min(g.psi, static_cast<double>(g.rho)));
  c.params = {{"n", std::to_string(n)}, {"m", std::to_string(m)}};
  o.certs.push_back(c);
}

void run_growth_check(const Params& p, Output& o) {
  const auto poly = completeness::BinomialPolynomial::from_monomial(completeness::parse_polynomial(p.text("poly")));
  const Int x = p.integer("x");
  const ElementSet t = input_or(p, [&] { return range(p.integer("lo", x), p.integer("hi", 2 * x - 1)); });
  const auto g = ramsey::iterated_growth_check(poly, t, p.integer("m"), p.integer("k", poly.degree()), x);
  o.result = {{"modulus", jint(g.modulus)}, {"copies", jint(g.copies)}, {"count", jint(g.count)}, {"exponent", g.exponent}};
  Certificate c = make_cert("residue count is at most the modulus", g.count >= 1 && g.count <= g.modulus, t.size());
  c.params = {{"modulus", std::to_string(g.modulus)}, {"count", std::to_string(g.count)}};
  o.certs.push_back(c);
}

using Runner = void (*)(const Params&, Output&);

struct Entry {
  ExperimentInfo info;
  Runner runner;
};

const std::vector<Entry>& registry() {
  using T = ParamType;
  auto P = [](std::string k, T t, bool req = false) { return ParamSpec{std::move(k), t, req, ""}; };
  static const std::vector<Entry> entries = {
      {{"sums", false, {P("input", T::path, true), P("cap", T::integer), P("multiset", T::flag)}, "subset sums of a file"},
       run_sums},
      {{"interval", false,
        {P("input", T::path, true), P("cap", T::integer), P("from", T::integer), P("min_len", T::integer),
         P("multiset", T::flag)},
        "longest interval of subset sums"},
       run_interval},
      {{"homog", false, {P("n", T::integer, true), P("input", T::path), P("set", T::text), P("k_factor", T::integer)},
        "homogeneous progression pipeline"},
       run_homog},
      {{"coloring-build", false,
        {P("n", T::integer, true), P("m", T::integer, true), P("r", T::integer), P("d", T::integer),
         P("kappa", T::rational)},
        "explicit colouring avoiding m"},
       run_coloring_build},
      {{"coloring-verify", false, {P("input", T::path, true)}, "verify a colouring file"}, run_coloring_verify},
      {{"f-exact", false, {P("n", T::integer, true), P("m", T::integer, true), P("r_max", T::integer)}, "exact f(n,m)"},
       run_f_exact},
      {{"g-exact", false, {P("n", T::integer, true), P("m", T::integer, true)}, "exact g(n,m)"}, run_g_exact},
      {{"g-constructions", false, {P("n", T::integer, true), P("m", T::integer, true), P("force", T::flag)},
        "lower-bound constructions for g(n,m)"},
       run_g_constructions},
      {{"H-exact", false, {P("n", T::integer, true)}, "exact H(n)"}, run_H_exact},
      {{"h-exact", false, {P("n", T::integer, true)}, "exact h(n) and the Straus check"}, run_h_exact},
      {{"ramsey-sample", true,
        {P("x", T::integer, true), P("eps", T::rational), P("C", T::integer), P("w", T::integer)},
        "sample a random block"},
       run_ramsey_sample},
      {{"ramsey-verify", true,
        {P("x", T::integer, true), P("eps", T::rational), P("C", T::integer), P("w", T::integer), P("mode", T::text),
         P("trials", T::integer), P("seeds", T::integer)},
        "sample blocks and verify their subsequences"},
       run_ramsey_verify},
      {{"ramsey-concat", true,
        {P("r", T::integer), P("x0", T::integer, true), P("blocks", T::integer), P("C", T::integer)},
        "concatenated block prefix"},
       run_ramsey_concat},
      {{"ramsey-lower", false,
        {P("input", T::path), P("powers", T::integer), P("r", T::integer), P("gap", T::integer), P("j_min", T::integer)},
        "adversary colouring"},
       run_ramsey_lower},
      {{"poly-complete", false, {P("poly", T::text, true)}, "completeness test for a polynomial"}, run_poly_complete},
      {{"birch-window", false, {P("limit", T::integer), P("input", T::path)}, "completeness window of a prefix"},
       run_birch_window},
      {{"friendly", false, {P("eps", T::rational, true), P("initial", T::list, true), P("n", T::integer, true)},
        "friendly sequence and its conditions"},
       run_friendly},
      {{"F-seq", false, {P("eps", T::rational), P("initial", T::list), P("n", T::integer, true)}, "the F sequence"},
       run_f_seq},
      {{"eps-check", false,
        {P("input", T::path), P("base", T::integer), P("count", T::integer), P("eps", T::rational, true),
         P("c_max", T::integer)},
        "eps-necessary condition"},
       run_eps_check},
      {{"phase", true,
        {P("b", T::integer, true), P("residues", T::list, true), P("split", T::rational), P("k_cap", T::integer),
         P("growth_div", T::integer), P("saturation_div", T::integer)},
        "phase process over Z_b"},
       run_phase},
      {{"nice", false,
        {P("n", T::integer, true), P("input", T::path), P("set", T::text), P("ell", T::integer), P("t1", T::rational),
         P("t2", T::rational), P("density", T::rational)},
        "nice-set decomposition"},
       run_nice},
      {{"diverse", false, {P("input", T::path, true), P("k", T::integer, true), P("budget", T::integer)},
        "k-diversity"},
       run_diverse},
      {{"numtheory-table", false, {P("n", T::integer, true), P("m", T::integer, true), P("r", T::integer)},
        "arithmetic quantities for (n, m)"},
       run_numtheory_table},
      {{"growth-check", false,
        {P("poly", T::text, true), P("x", T::integer, true), P("m", T::integer, true), P("k", T::integer),
         P("lo", T::integer), P("hi", T::integer), P("input", T::path)},
        "iterated sumset growth modulo P(m)"},
       run_growth_check},
  };
  return entries;
}

const Entry& entry(const std::string& name) {
  for (const auto& e : registry())
    if (e.info.name == name) return e;
  throw ConfigError("experiment", "unknown experiment " + name);
}

std::string scalar_string(const json& v, const std::string& key) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_integer()) return std::to_string(v.get<Int>());
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  if (v.is_array()) {
    std::string out;
    for (const auto& x : v) out += (out.empty() ? "" : ",") + scalar_string(x, key);
    return out;
  }
  throw ConfigError(key, "value of " + key + " must be an integer, string or list");
}

json config_json(const ExperimentConfig& c) {
  json j = {{"experiment", c.experiment}, {"params", c.params}, {"threads", c.threads}, {"out", c.out_dir}};
  if (c.seed) j["seed"] = std::to_string(*c.seed);
  return j;
}

json certs_json(const Report& r) {
  json a = json::array();
  for (const auto& c : r.certificates) a.push_back(json::parse(to_json(c)));
  return a;
}

}  // namespace

const std::vector<ExperimentInfo>& experiments() {
  static const std::vector<ExperimentInfo> infos = [] {
    std::vector<ExperimentInfo> out;
    for (const auto& e : registry()) out.push_back(e.info);
    return out;
  }();
  return infos;
}

const ExperimentInfo& experiment(const std::string& name) { return entry(name).info; }

void validate(const ExperimentConfig& config) {
  const ExperimentInfo& info = experiment(config.experiment);
  for (const auto& [key, value] : config.params) {
    const auto it = std::find_if(info.params.begin(), info.params.end(), [&](const ParamSpec& s) { return s.key == key; });
    if (it == info.params.end()) throw ConfigError(key, "unknown parameter " + key + " for " + config.experiment);
    bool ok = true;
    switch (it->type) {
      case ParamType::integer: ok = parse_int(value).has_value(); break;
      case ParamType::rational: ok = parse_rational(value).has_value(); break;
      case ParamType::list: ok = parse_list(value).has_value(); break;
      case ParamType::path: ok = !value.empty(); break;
      case ParamType::flag:
        ok = value == "1" || value == "0" || value == "true" || value == "false" || value == "yes" || value == "no";
        break;
      case ParamType::text: break;
    }
    if (!ok) throw ConfigError(key, "bad value '" + value + "' for " + key);
  }
  for (const auto& spec : info.params)
    if (spec.required && !config.params.count(spec.key)) throw ConfigError(spec.key, "missing parameter " + spec.key);
  if (info.randomized && !config.seed) throw ConfigError("seed", config.experiment + " needs a seed");
  if (config.threads < 1) throw ConfigError("threads", "threads must be at least 1");
}

ExperimentConfig parse_config(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw ConfigError("config", std::string("config is not JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config", "config must be a JSON object");
  ExperimentConfig c;
  for (const auto& [key, value] : j.items()) {
    if (key == "experiment") {
      c.experiment = value.get<std::string>();
    } else if (key == "seed") {
      const auto s = parse_int(scalar_string(value, key));
      if (!s || *s < 0) throw ConfigError("seed", "seed must be a non-negative integer");
      c.seed = static_cast<std::uint64_t>(*s);
    } else if (key == "threads") {
      c.threads = static_cast<unsigned>(value.get<Int>());
    } else if (key == "out") {
      c.out_dir = value.get<std::string>();
    } else if (key == "params") {
      for (const auto& [k, v] : value.items()) c.params[k] = scalar_string(v, k);
    } else {
      throw ConfigError(key, "unknown config key " + key);
    }
  }
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config", "cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

ExperimentConfig merge(const ExperimentConfig& file, const ExperimentConfig& flags) {
  ExperimentConfig out = file;
  if (!flags.experiment.empty()) out.experiment = flags.experiment;
  if (flags.seed) out.seed = flags.seed;
  if (flags.threads != 1) out.threads = flags.threads;
  if (!flags.out_dir.empty()) out.out_dir = flags.out_dir;
  for (const auto& [k, v] : flags.params) out.params[k] = v;
  return out;
}

bool Report::all_pass() const { return !first_failure().has_value(); }

std::optional<std::size_t> Report::first_failure() const {
  for (std::size_t i = 0; i < certificates.size(); ++i)
    if (!certificates[i].pass) return i;
  return std::nullopt;
}

Report run(const ExperimentConfig& config) {
  validate(config);
  const auto start = std::chrono::steady_clock::now();
  Output out;
  try {
    entry(config.experiment).runner(Params(config), out);
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw std::runtime_error(config.experiment + ": " + e.what());
  }
  Report r;
  r.config = config;
  r.certificates = std::move(out.certs);
  r.result = std::move(out.result);
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

std::string report_json(const Report& report, bool with_timing) {
  json j = {{"version", report.version},
            {"config", config_json(report.config)},
            {"certificates", certs_json(report)},
            {"result", report.result},
            {"all_pass", report.all_pass()}};
  if (with_timing) j["seconds"] = report.seconds;
  return j.dump();
}

std::string payload_json(const Report& report) {
  return json{{"certificates", certs_json(report)}, {"result", report.result}}.dump();
}

std::string report_tsv(const Report& report) {
  std::ostringstream os;
  os << "index\tclaim\tmode\tchecked\tpass\tvacuous\n";
  for (std::size_t i = 0; i < report.certificates.size(); ++i) {
    const auto& c = report.certificates[i];
    os << i << '\t' << c.claim << '\t' << c.mode << '\t' << c.checked << '\t' << (c.pass ? "PASS" : "FAIL") << '\t'
       << (c.vacuous ? "yes" : "no") << '\n';
  }
  return os.str();
}

std::string emit(const Report& report, const std::string& format) {
  if (format != "json" && format != "tsv") throw ConfigError("format", "format must be json or tsv");
  const std::filesystem::path dir = report.config.out_dir.empty() ? "." : report.config.out_dir;
  std::filesystem::create_directories(dir);
  const std::filesystem::path path = dir / (report.config.experiment + "." + format);
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << (format == "json" ? report_json(report, true) + "\n" : report_tsv(report));
  if (!out) throw std::runtime_error("write failed for " + path.string());
  return path.string();
}

}  // namespace sumlab::cli
