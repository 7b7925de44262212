#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <string_view>

namespace egucb {

using Rng = std::mt19937_64;

// Stable stream derivation: the same (master, label) pair always yields the
// same seed, and different labels give unrelated streams.
std::uint64_t derive_seed(std::uint64_t master, std::string_view label);

inline Rng make_rng(std::uint64_t master, std::string_view label) { return Rng(derive_seed(master, label)); }

// Uniform on [0, 1) with 53 random bits.
inline double uniform01(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

// Uniform integer in [0, n), n >= 1.
inline std::size_t uniform_index(Rng& rng, std::size_t n) {
  return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
}

}  // namespace egucb
