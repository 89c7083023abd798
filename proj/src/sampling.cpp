#include "ransomgame/sampling.hpp"

#include <algorithm>
#include <functional>

namespace ransomgame {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

Rng Rng::stream(std::uint64_t seed, std::uint64_t index) {
    return Rng(splitmix64(splitmix64(seed) ^ splitmix64(index + 0x632be59bd9b4e019ULL)));
}

std::uint64_t Rng::below(std::uint64_t bound) {
    if (bound <= 1) return 0;
    // Rejection sampling keeps the draw unbiased.
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    std::uint64_t x;
    do {
        x = engine_();
    } while (x >= limit);
    return x % bound;
}

namespace {

// Uniform on (0, max]: 1 - u lies in (0, 1].
double positive(Rng& rng, double max_value) { return max_value * (1.0 - rng.uniform()); }

}  // namespace

GameInstance random_instance(Rng& rng, int n, double max_value) {
    GameInstance inst;
    inst.n = n;
    inst.ransoms.resize(static_cast<size_t>(n));
    inst.losses.resize(static_cast<size_t>(n));
    inst.sale_profits.resize(static_cast<size_t>(n));
    for (auto& r : inst.ransoms) r = positive(rng, max_value);
    inst.data_value = positive(rng, max_value);
    inst.recovery_cost = 0.1 * positive(rng, max_value);
    for (auto& l : inst.losses) l = positive(rng, max_value);
    std::sort(inst.losses.begin(), inst.losses.end(), std::greater<>());
    for (int i = 0; i < n; ++i) inst.sale_profits[i] = rng.uniform() * inst.losses[i];
    return inst;
}

Reputation random_reputation(Rng& rng, int n) {
    Reputation rep;
    rep.beta_r = rng.uniform();
    rep.betas.resize(static_cast<size_t>(n));
    for (auto& b : rep.betas) b = rng.uniform();
    return rep;
}

}  // namespace ransomgame
