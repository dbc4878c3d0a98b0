#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "severi/construct.hpp"

namespace severi::cli {

enum class Format { Json, Csv, Table };

/// Name of the environment variable holding the default seed.
inline constexpr const char* kSeedEnv = "SEVERILAB_SEED";

struct RunConfig {
  std::uint64_t prime = 10007;
  std::uint64_t prime2 = 31013;
  std::uint64_t seed = 1;
  int retries = 64;
  std::string out;
  Format format = Format::Table;

  /// Throws InputError unless both primes are odd primes >= 5, distinct, and retries >= 1.
  void validate() const;
  nlohmann::json to_json() const;
};

struct RunReport {
  std::string command;
  RunConfig config;
  std::vector<construct::Check> checks;
  double wall_time = 0;
  std::vector<std::string> artifacts;
  std::vector<std::string> notes;

  bool all_pass() const;
  std::vector<std::string> failing() const;
  nlohmann::json to_json() const;
  std::string render(Format f) const;
};

/// Runs `severilab <args...>` (args excludes the program name). Exit codes:
/// 0 all checks pass, 1 a check failed (its ID goes to err), 2 bad configuration or input.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// "a..b" or "a" into an inclusive range; throws InputError.
std::pair<int, int> parse_range(const std::string& text);

}  // namespace severi::cli
