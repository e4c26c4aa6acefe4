#include "gwcp/random.hpp"

#include <algorithm>

namespace gwcp {

std::uint64_t mix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) noexcept {
    return mix64(mix64(seed) ^ mix64(index + 0x632be59bd9b4e019ULL));
}

Engine trial_engine(std::uint64_t seed, std::uint64_t trial) {
    const std::uint64_t s = derive_seed(seed, trial);
    std::seed_seq seq{static_cast<std::uint32_t>(s), static_cast<std::uint32_t>(s >> 32)};
    return Engine(seq);
}

std::vector<std::size_t> sample_multinomial(std::size_t n, std::span<const double> probs,
                                            Engine& engine) {
    std::vector<std::size_t> counts(probs.size(), 0);
    std::size_t last = probs.size();
    for (std::size_t k = 0; k < probs.size(); ++k) {
        if (probs[k] > 0.0) last = k;
    }
    if (last == probs.size()) {
        return counts;
    }
    std::size_t remaining = n;
    double remaining_mass = 1.0;
    for (std::size_t k = 0; k < last && remaining > 0; ++k) {
        if (probs[k] <= 0.0) {
            continue;
        }
        const double p = std::clamp(probs[k] / remaining_mass, 0.0, 1.0);
        std::binomial_distribution<std::size_t> draw(remaining, p);
        counts[k] = draw(engine);
        remaining -= counts[k];
        remaining_mass -= probs[k];
    }
    counts[last] += remaining;
    return counts;
}

std::size_t sample_categorical(std::span<const double> probs, Engine& engine) {
    std::discrete_distribution<std::size_t> draw(probs.begin(), probs.end());
    return draw(engine);
}

}  // namespace gwcp
