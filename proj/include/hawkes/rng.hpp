#ifndef HAWKES_RNG_HPP
#define HAWKES_RNG_HPP

#include <cmath>
#include <cstdint>

namespace hawkes {

// SplitMix64 output function (Steele, Lea & Flood 2014).
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// Counter-based generator: draw i of stream (seed, stream) is a pure function
// of (seed, stream, i). Replica r of a run with master seed s uses
// CounterRng(s, r), so replicas are independent of scheduling.
class CounterRng {
public:
  explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0) noexcept
      : key_(mix64(seed ^ mix64(stream + 0x632BE59BD9B4E019ULL))),
        seed_(seed), stream_(stream) {}

  std::uint64_t next_u64() noexcept {
    ++counter_;
    return mix64(key_ + counter_ * 0x9E3779B97F4A7C15ULL);
  }

  // Uniform on the open interval (0, 1).
  double uniform() noexcept {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

  // Exp(1) by inversion.
  double exponential() noexcept { return -std::log(uniform()); }

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t stream() const noexcept { return stream_; }
  std::uint64_t counter() const noexcept { return counter_; }

  // Independent child stream, e.g. for a sub-experiment.
  CounterRng split(std::uint64_t child) const noexcept {
    return CounterRng(mix64(seed_ ^ 0xA0761D6478BD642FULL) ^ stream_, child);
  }

private:
  std::uint64_t key_;
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t counter_ = 0;
};

} // namespace hawkes

#endif // HAWKES_RNG_HPP
