#include "sumlab/certificate.hpp"

#include "json.hpp"

namespace sumlab {

namespace {

constexpr Int kJsonSafe = Int{1} << 53;

nlohmann::json int_value(Int v) {
  if (v > kJsonSafe || v < -kJsonSafe) return std::to_string(v);
  return v;
}

}  // namespace

std::string to_json(const Certificate& c) {
  nlohmann::json j;
  j["claim"] = c.claim;
  j["params"] = c.params;
  j["mode"] = c.mode;
  j["checked"] = c.checked > static_cast<std::uint64_t>(kJsonSafe) ? nlohmann::json(std::to_string(c.checked))
                                                                   : nlohmann::json(c.checked);
  if (c.witness) {
    auto arr = nlohmann::json::array();
    for (Int v : *c.witness) arr.push_back(int_value(v));
    j["witness"] = arr;
  }
  if (c.missing) j["missing"] = int_value(*c.missing);
  if (c.seed) j["seed"] = std::to_string(*c.seed);
  j["pass"] = c.pass;
  j["vacuous"] = c.vacuous;
  return j.dump();
}

}  // namespace sumlab
