#include <filesystem>
#include <fstream>
#include <set>

#include "doctest.h"
#include "json.hpp"
#include "sumlab/cli.hpp"
#include "sumlab/extremal.hpp"
#include "sumlab/mono.hpp"
#include "sumlab/numtheory.hpp"
#include "sumlab/ramsey.hpp"
#include "sumlab/sumset.hpp"

using namespace sumlab;
using namespace sumlab::cli;
using nlohmann::json;

namespace {

ExperimentConfig config(std::string name, std::map<std::string, std::string> params,
                        std::optional<std::uint64_t> seed = std::nullopt, unsigned threads = 1) {
  ExperimentConfig c;
  c.experiment = std::move(name);
  c.params = std::move(params);
  c.seed = seed;
  c.threads = threads;
  c.out_dir = (std::filesystem::temp_directory_path() / "sumlab_test_cli").string();
  return c;
}

std::string write_temp(const std::string& name, const std::string& text) {
  const auto path = std::filesystem::temp_directory_path() / name;
  std::ofstream(path) << text;
  return path.string();
}

}  // namespace

TEST_CASE("every experiment is registered once") {
  std::set<std::string> names;
  for (const auto& e : experiments()) CHECK(names.insert(e.name).second);
  CHECK(names.size() == 24);
  CHECK_THROWS_AS(experiment("nope"), ConfigError);
}

TEST_CASE("f-exact wraps the library") {
  const Report r = run(config("f-exact", {{"n", "4"}, {"m", "4"}}));
  REQUIRE(r.certificates.size() == 1);
  CHECK(r.all_pass());
  CHECK(r.result["value"] == 2);
  CHECK(r.result["value"] == *mono::exact_f(4, 4, 4).value);
}

TEST_CASE("f-exact fails when the bound is too small") {
  const Report r = run(config("f-exact", {{"n", "4"}, {"m", "4"}, {"r_max", "1"}}));
  CHECK_FALSE(r.all_pass());
  CHECK(r.first_failure() == 0);
}

TEST_CASE("g-exact and H-exact wrap the library") {
  const Report g = run(config("g-exact", {{"n", "10"}, {"m", "20"}}));
  const auto direct = extremal::exact_g(10, 20);
  CHECK(g.result["value"] == direct.value);
  CHECK(g.result["witness"].get<std::vector<Int>>() == direct.witness);
  CHECK(g.certificates[0].witness == direct.witness);
  const Report h = run(config("H-exact", {{"n", "5"}}));
  CHECK(h.result["value"] == 2);
  CHECK(h.all_pass());
}

TEST_CASE("sums wraps the library") {
  const std::string path = write_temp("sumlab_cli_sums.txt", "1\n2\n4\n9\n");
  const Report r = run(config("sums", {{"input", path}}));
  const SumMask mask = subset_sums(read_element_set(path));
  const IntervalWitness w = longest_interval(mask);
  CHECK(r.result["longest"]["start"] == w.start);
  CHECK(r.result["longest"]["length"] == w.length);
  CHECK(r.result["count"] == mask.count());
  CHECK(r.all_pass());
}

TEST_CASE("numtheory-table wraps the library") {
  const Report r = run(config("numtheory-table", {{"n", "1000"}, {"m", "1000"}}));
  CHECK(r.result["phi"] == nt::euler_phi(1000));
  CHECK(r.result["s_formula"] == nt::s_formula(1000, 1000));
  CHECK(r.result["R"].get<double>() == doctest::Approx(nt::R_nm(1000, 1000).r));
}

TEST_CASE("coloring-build output parses back and verifies") {
  const Report r = run(config("coloring-build", {{"n", "2000"}, {"m", "2000"}}));
  REQUIRE(r.all_pass());
  const auto c = mono::parse_coloring_json(r.result["coloring"].dump());
  CHECK(c.colors() == r.result["colors"]);
  const std::string path = write_temp("sumlab_cli_coloring.json", r.result["coloring"].dump());
  CHECK(run(config("coloring-verify", {{"input", path}})).all_pass());
}

TEST_CASE("reports do not depend on thread count") {
  const std::vector<ExperimentConfig> configs = {
      config("coloring-build", {{"n", "3000"}, {"m", "4500"}}),
      config("g-exact", {{"n", "18"}, {"m", "40"}}),
      config("ramsey-verify", {{"x", "400"}, {"C", "2"}, {"seeds", "2"}, {"mode", "montecarlo"}, {"trials", "200"}}, 11),
      config("ramsey-concat", {{"x0", "100"}, {"blocks", "3"}}, 5),
  };
  for (auto c : configs) {
    c.threads = 1;
    const std::string one = payload_json(run(c));
    c.threads = 4;
    CHECK_MESSAGE(payload_json(run(c)) == one, c.experiment);
  }
}

TEST_CASE("seeded experiments repeat under the same seed") {
  const auto c = config("ramsey-sample", {{"x", "1000"}}, 42);
  CHECK(payload_json(run(c)) == payload_json(run(c)));
  const auto direct = ramsey::sample_block(1000, Rational(1, 2), 2, std::nullopt, 42);
  CHECK(run(c).result["terms"].get<std::vector<Int>>() == direct.terms);
}

TEST_CASE("report JSON parses back") {
  const Report r = run(config("g-constructions", {{"n", "20"}, {"m", "12"}}));
  const json j = json::parse(report_json(r));
  CHECK(j["version"] == kVersion);
  CHECK(j["config"]["experiment"] == "g-constructions");
  CHECK(j["certificates"].size() == r.certificates.size());
  CHECK(j["all_pass"] == r.all_pass());
  CHECK_FALSE(j.contains("seconds"));
  CHECK(json::parse(report_json(r, true)).contains("seconds"));
  // Keys come out sorted.
  CHECK(report_json(r).find("\"all_pass\"") == 1);
}

TEST_CASE("TSV has one row per certificate") {
  const Report r = run(config("g-constructions", {{"n", "20"}, {"m", "12"}}));
  const std::string tsv = report_tsv(r);
  CHECK(std::count(tsv.begin(), tsv.end(), '\n') == static_cast<long>(r.certificates.size()) + 1);
  const std::string path = emit(r, "tsv");
  CHECK(std::filesystem::exists(path));
  CHECK_THROWS_AS(emit(r, "xml"), ConfigError);
}

TEST_CASE("validation names the offending key") {
  auto key_of = [](const ExperimentConfig& c) {
    try {
      validate(c);
    } catch (const ConfigError& e) {
      return e.key();
    }
    return std::string();
  };
  CHECK(key_of(config("sums", {{"input", "x"}, {"bogus", "1"}})) == "bogus");
  CHECK(key_of(config("f-exact", {{"n", "4"}})) == "m");
  CHECK(key_of(config("f-exact", {{"n", "four"}, {"m", "4"}})) == "n");
  CHECK(key_of(config("ramsey-sample", {{"x", "100"}})) == "seed");
  CHECK(key_of(config("friendly", {{"eps", "1/0"}, {"initial", "1"}, {"n", "3"}})) == "eps");
  CHECK(key_of(config("nope", {})) == "experiment");
  CHECK(key_of(config("f-exact", {{"n", "4"}, {"m", "4"}})).empty());
}

TEST_CASE("config files parse and merge under flags") {
  const auto file = parse_config(R"({"experiment": "f-exact", "seed": 7, "threads": 2,
                                     "params": {"n": 5, "m": "5"}})");
  CHECK(file.experiment == "f-exact");
  CHECK(file.seed == 7u);
  CHECK(file.threads == 2u);
  CHECK(file.params.at("n") == "5");
  ExperimentConfig flags;
  flags.params["n"] = "4";
  const auto merged = merge(file, flags);
  CHECK(merged.params.at("n") == "4");
  CHECK(merged.params.at("m") == "5");
  CHECK(merged.threads == 2u);
  CHECK_THROWS_AS(parse_config(R"({"experiment": "f-exact", "colour": 1})"), ConfigError);
  CHECK_THROWS_AS(parse_config("not json"), ConfigError);
  const auto list = parse_config(R"({"experiment": "phase", "params": {"residues": [1, 5, 7]}})");
  CHECK(list.params.at("residues") == "1,5,7");
}
