#pragma once

// Deterministic random streams for scenario generation, rollouts and init.
//
// std::mt19937_64 output is fully specified by the standard, but the
// <random> distribution adaptors are not. The mappings below are explicit
// so that identical seeds reproduce identical runs on any toolchain.

#include <cmath>
#include <cstdint>
#include <random>
#include <sstream>
#include <string>
#include <string_view>

namespace connav {

class Rng {
 public:
  explicit Rng(uint64_t seed = 0) : gen_(seed) {}

  /// Uniform double in [0, 1).
  double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform integer in [lo, hi], bounds inclusive.
  int uniform_int(int lo, int hi) {
    const uint64_t span = static_cast<uint64_t>(hi - lo) + 1;
    return lo + static_cast<int>(gen_() % span);
  }

  /// Standard normal via Box-Muller (two uniforms per draw, no cached spare).
  double normal() {
    const double u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log1p(-u1));
    return r * std::cos(2.0 * M_PI * u2);
  }

  std::string save_state() const {
    std::ostringstream oss;
    oss << gen_;
    return oss.str();
  }

  void load_state(const std::string& state) {
    std::istringstream iss(state);
    iss >> gen_;
  }

  /// Derives an independent stream seed from a base seed and a tag, so e.g.
  /// training maps and evaluation maps never share a sequence.
  static uint64_t derive(uint64_t seed, std::string_view stream) {
    uint64_t h = 1469598103934665603ull;  // FNV-1a over the tag
    for (const char ch : stream) {
      h ^= static_cast<unsigned char>(ch);
      h *= 1099511628211ull;
    }
    uint64_t z = seed + 0x9e3779b97f4a7c15ull + h;  // splitmix64 finalizer
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

 private:
  std::mt19937_64 gen_;
};

}  // namespace connav
