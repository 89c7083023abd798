#pragma once

#include <cstdint>
#include <random>

#include "ransomgame/game_core.hpp"

namespace ransomgame {

// Seeded generator whose output does not depend on the standard library's
// distribution implementations, so CSV artifacts match across toolchains.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    // Independent stream for (seed, index), e.g. one per victim.
    static Rng stream(std::uint64_t seed, std::uint64_t index);

    std::uint64_t next() { return engine_(); }
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }  // [0,1)
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    // Uniform integer in [0, bound).
    std::uint64_t below(std::uint64_t bound);
    bool bernoulli(double p) { return uniform() < p; }

  private:
    std::mt19937_64 engine_;
};

std::uint64_t splitmix64(std::uint64_t x);

// Random valid instance: values in (0, max_value], losses sorted
// non-increasing, sale profits below the matching loss.
GameInstance random_instance(Rng& rng, int n, double max_value = 1000.0);
Reputation random_reputation(Rng& rng, int n);

}  // namespace ransomgame
