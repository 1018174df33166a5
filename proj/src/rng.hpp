#pragma once

#include <cstdint>

namespace bandtest {

// Deterministic stream RNG. Every (seed, stream) pair yields an independent,
// reproducible sequence regardless of which thread draws it, so Monte-Carlo
// trials can be farmed out in any order.
class Rng {
  public:
    Rng(std::uint64_t seed, std::uint64_t stream);

    std::uint64_t next_u64();

    // Uniform on [0, 1).
    double uniform01();
    double uniform(double lo, double hi);

    // Standard normal via Box-Muller; the spare deviate is cached.
    double gaussian();
    double gaussian(double mean, double sd) { return mean + sd * gaussian(); }

  private:
    std::uint64_t state_[4];
    double spare_ = 0.0;
    bool have_spare_ = false;
};

// Stream id for Monte-Carlo trial `trial` under hypothesis h (0 or 1).
constexpr std::uint64_t trial_stream(int hypothesis, std::uint64_t trial) {
    return (static_cast<std::uint64_t>(hypothesis) << 32) + trial;
}

// Streams reserved for non-trial draws (band construction, null-CDF fitting, ...).
inline constexpr std::uint64_t kBandStream = (1ULL << 40);
inline constexpr std::uint64_t kNullCdfStream = (1ULL << 40) + 1;

}  // namespace bandtest
