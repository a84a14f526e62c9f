#ifndef NEURWIN_RNG_HPP
#define NEURWIN_RNG_HPP

#include <cmath>
#include <cstdint>
#include <initializer_list>

namespace neurwin {

// Counter-based generator (SplitMix64). The draw sequence is a pure
// function of (seed, counter), so results are identical on every
// platform and streams can be re-wound by construction.
class RngStream {
 public:
  explicit RngStream(uint64_t seed) : seed_(seed), counter_(0) {}
  RngStream(uint64_t base_seed, uint64_t stream_id)
      : RngStream(mix64(base_seed ^ mix64(stream_id + kGamma))) {}

  uint64_t next_u64() {
    uint64_t z = seed_ + (++counter_) * kGamma;
    return mix64(z);
  }

  // Uniform on [0, 1), 53-bit resolution.
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Uniform on {0, 1, ..., n-1}.
  int next_int(int n) { return static_cast<int>(next_u64() % static_cast<uint64_t>(n)); }

  bool bernoulli(double p) { return next_double() < p; }

  // Standard normal via Box-Muller; consumes exactly two uniforms per
  // call so the counter advances deterministically.
  double next_gaussian() {
    double u1 = next_double();
    double u2 = next_double();
    while (u1 <= 0.0) u1 = next_double();  // guard log(0)
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * kPi * u2);
  }

  uint64_t seed() const { return seed_; }
  uint64_t counter() const { return counter_; }

  static uint64_t mix64(uint64_t z) {
    z ^= z >> 30;
    z *= 0xbf58476d1ce4e5b9ULL;
    z ^= z >> 27;
    z *= 0x94d049bb133111ebULL;
    z ^= z >> 31;
    return z;
  }

 private:
  static constexpr uint64_t kGamma = 0x9e3779b97f4a7c15ULL;
  static constexpr double kPi = 3.14159265358979323846;

  uint64_t seed_;
  uint64_t counter_;
};

// Derives an independent seed from a base seed and a list of tags.
// Used everywhere a component needs its own stream (per run, per arm,
// per mini-batch, per episode).
inline uint64_t mix_seed(uint64_t base, std::initializer_list<uint64_t> tags) {
  uint64_t s = RngStream::mix64(base + 0x9e3779b97f4a7c15ULL);
  for (uint64_t t : tags) s = RngStream::mix64(s ^ (t + 0x9e3779b97f4a7c15ULL));
  return s;
}

}  // namespace neurwin

#endif  // NEURWIN_RNG_HPP
