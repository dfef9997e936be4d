#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "residua/ordinal.h"

namespace residua {

inline constexpr const char* kVersion = "0.1.0";

namespace exit_code {
inline constexpr int ok = 0;
inline constexpr int usage = 1;  // bad arguments or expression syntax
inline constexpr int fail = 2;
inline constexpr int inconclusive = 3;
inline constexpr int unregistered = 4;
inline constexpr int not_materializable = 5;
inline constexpr int cap_exceeded = 6;
}  // namespace exit_code

struct RunConfig {
  std::uint64_t seed = 0;
  std::size_t probes = 64;
  std::uint64_t levels = 4;
  CardinalBound kappa = CardinalBound::aleph0();
  std::string format = "text";  // text | json | dot
  std::string out;               // empty: stdout

  nlohmann::json to_json() const;
};

/// Runs one command. `args` excludes the program name. The artifact goes to
/// `out` (or the --out file), diagnostics to `err`. RESIDUA_SEED, when set,
/// replaces the default seed.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace residua
