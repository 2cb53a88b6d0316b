#pragma once
#include <cmath>
#include <cstdint>
#include <random>

namespace wavecb {

inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

/// Mix an arbitrary list of 64-bit values into one stream seed.
inline std::uint64_t mix_seed(std::initializer_list<std::uint64_t> parts) {
  std::uint64_t s = 0x243f6a8885a308d3ull;
  for (std::uint64_t p : parts) {
    s ^= p + 0x9e3779b97f4a7c15ull + (s << 6) + (s >> 2);
    splitmix64(s);
  }
  return splitmix64(s);
}

/// Deterministic normal generator (explicit Box-Muller so the sequence does
/// not depend on the standard library implementation).
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed) : eng_(seed) {}

  double uniform() {  // in (0,1)
    const std::uint64_t x = eng_();
    return (static_cast<double>(x >> 11) + 0.5) * 0x1.0p-53;
  }

  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const double u1 = uniform(), u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * 3.14159265358979323846 * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

 private:
  std::mt19937_64 eng_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace wavecb
