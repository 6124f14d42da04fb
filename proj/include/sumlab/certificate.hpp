#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sumlab/common.hpp"

namespace sumlab {

// A checked claim. Params are stored as strings so the record serializes canonically.
struct Certificate {
  std::string claim;
  std::map<std::string, std::string> params;
  std::string mode;
  std::uint64_t checked = 0;
  std::optional<std::vector<Int>> witness;
  std::optional<Int> missing;  // a target integer the witness cannot reach
  std::optional<std::uint64_t> seed;
  bool pass = false;
  bool vacuous = false;
  bool operator==(const Certificate&) const = default;
};

// Canonical JSON: sorted keys, no whitespace, integers beyond 2^53 as strings.
std::string to_json(const Certificate& c);

}  // namespace sumlab
