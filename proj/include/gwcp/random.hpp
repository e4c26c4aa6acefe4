#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace gwcp {

using Engine = std::mt19937_64;

/// SplitMix64 finalizer.
std::uint64_t mix64(std::uint64_t x) noexcept;

/// Seed for substream `index` of `seed`; distinct indices give unrelated streams.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) noexcept;

/// Engine for one independent trial, derived from (seed, trial index) only.
Engine trial_engine(std::uint64_t seed, std::uint64_t trial);

/// Counts ~ Multinomial(n; probs), drawn by sequential conditional binomials.
std::vector<std::size_t> sample_multinomial(std::size_t n, std::span<const double> probs,
                                            Engine& engine);

/// Index k with probability probs[k].
std::size_t sample_categorical(std::span<const double> probs, Engine& engine);

}  // namespace gwcp
