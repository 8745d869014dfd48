#ifndef PACEKIT_RNG_HPP
#define PACEKIT_RNG_HPP

#include <cstdint>

namespace pacekit {

// Counter-based splittable generator built on the splitmix64 finalizer.
// Forked streams are keyed by (parent state, tag) so that, e.g., the trace
// substream of a trial never changes when the request substream is consumed
// differently. Pure integer arithmetic: draws are bit-identical across
// platforms for a fixed seed and generator version (see kGeneratorVersion).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(mix(seed + kGamma)) {}

  // Independent stream derived from this one; does not advance *this.
  Rng fork(std::uint64_t tag) const {
    return Rng(FromState{}, mix(state_ ^ mix(tag + kGamma)));
  }

  std::uint64_t next_u64() {
    state_ += kGamma;
    return mix(state_);
  }

  // Uniform double in [0, 1), 53 random bits.
  double next_unit() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  double next_uniform(double lo, double hi) {
    return lo + next_unit() * (hi - lo);
  }

  // Uniform integer in [0, n).
  std::uint64_t next_below(std::uint64_t n) { return next_u64() % n; }

 private:
  struct FromState {};
  Rng(FromState, std::uint64_t state) : state_(state) {}

  static constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ull;

  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  std::uint64_t state_;
};

// Fixed domain tags keeping the per-trial substreams disjoint.
namespace rng_domain {
inline constexpr std::uint64_t kTrace = 0x7472616365ull;    // "trace"
inline constexpr std::uint64_t kStream = 0x73747265616dull; // "stream"
inline constexpr std::uint64_t kPerturb = 0x70657274ull;    // "pert"
}  // namespace rng_domain

}  // namespace pacekit

#endif  // PACEKIT_RNG_HPP
