#pragma once

#include <cstdint>
#include <thread>

namespace isect {

/// Size limits and worker count shared by every enumeration in the library.
struct Config {
  std::uint64_t enumeration_cap = 2'000'000;  // vectors touched by a full scan
  std::uint64_t census_cap = 2048;            // vertices for a full maximum-family census
  std::uint64_t search_cap = 10'000;          // vertices for a size-only search
  std::uint64_t verify_cap = 200'000;         // vertices for spectrum verification
  std::uint64_t full_check_cap = 10'000;      // group size for exhaustive intersection numbers
  unsigned threads = 0;                       // 0 picks hardware_concurrency

  unsigned worker_count() const {
    if (threads != 0) return threads;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
  }
};

inline const Config& default_config() {
  static const Config cfg{};
  return cfg;
}

}  // namespace isect
