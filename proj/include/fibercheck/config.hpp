#pragma once

#include <algorithm>
#include <cstdlib>
#include <optional>
#include <string>
#include <thread>

#include "fibercheck/quotients.hpp"

namespace fibercheck {

inline int default_threads() {
  return std::max(1u, std::thread::hardware_concurrency());
}

// Runtime knobs shared by the CLI subcommands.
struct Config {
  int max_degree = 6;
  long long max_order = 120;
  long long budget_nodes = 10'000'000;
  int threads = default_threads();
  std::string output = "text";  // "text" or "json"
  std::optional<std::string> cache_path;

  EnumerationOptions enumeration() const {
    EnumerationOptions e;
    e.max_degree = max_degree;
    e.max_order = max_order;
    e.budget_nodes = budget_nodes;
    return e;
  }
};

// FIBERCHECK_CACHE in the environment takes precedence over the --cache flag.
inline std::optional<std::string> resolve_cache_path(const std::optional<std::string>& flag) {
  if (const char* env = std::getenv("FIBERCHECK_CACHE"); env && *env) return std::string(env);
  return flag;
}

}  // namespace fibercheck
