#pragma once

#include <cstdint>
#include <cmath>
#include <string_view>

namespace lathom {

// splitmix64: the mixing function used to derive all substreams.
inline uint64_t splitmix64(uint64_t& state) {
  uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline uint64_t fnv1a(std::string_view s) {
  uint64_t h = 0xcbf29ce484222325ULL;
  for (char c : s) {
    h ^= static_cast<uint8_t>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

// Counter-based stream: every (master, name, counter) triple opens an
// independent deterministic stream, so per-edge / per-path sampling does not
// depend on iteration order or thread count.
class RngStream {
 public:
  RngStream(uint64_t master, std::string_view name, uint64_t counter) {
    uint64_t s = master;
    s = splitmix64(s) ^ fnv1a(name);
    s = splitmix64(s) ^ counter;
    (void)splitmix64(s);
    state_ = s;
  }
  explicit RngStream(uint64_t raw_state) : state_(raw_state) {}

  uint64_t next_u64() { return splitmix64(state_); }

  // uniform in (0,1); never returns 0 or 1 exactly
  double uniform01() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

  double uniform(double a, double b) { return a + (b - a) * uniform01(); }

  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = uniform01(), u2 = uniform01();
    double r = std::sqrt(-2.0 * std::log(u1));
    double t = 6.283185307179586476925286766559 * u2;
    spare_ = r * std::sin(t);
    have_spare_ = true;
    return r * std::cos(t);
  }

  double exponential(double rate) { return -std::log(uniform01()) / rate; }

  // integer in [0, n)
  uint64_t below(uint64_t n) { return next_u64() % n; }

 private:
  uint64_t state_ = 0;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace lathom
