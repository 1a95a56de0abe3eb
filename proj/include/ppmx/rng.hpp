#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace ppmx {

// All randomness goes through mt19937_64 plus the helpers below, which only
// use raw engine output. std:: distributions are implementation-defined and
// would make artifacts differ between standard libraries.
using Rng = std::mt19937_64;

// SplitMix64 finalizer; derives independent stream seeds from (seed, stream).
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream);

inline Rng make_rng(std::uint64_t seed, std::uint64_t stream = 0) {
  return Rng(mix_seed(seed, stream));
}

// Uniform in [0, 1) with 53 random bits.
double uniform01(Rng& rng);

// Uniform integer in [0, n). n must be > 0.
std::size_t uniform_index(Rng& rng, std::size_t n);

double normal(Rng& rng, double mean = 0.0, double stddev = 1.0);

bool bernoulli(Rng& rng, double p);

template <typename T>
void shuffle(std::span<T> values, Rng& rng) {
  for (std::size_t i = values.size(); i > 1; --i) {
    std::size_t j = uniform_index(rng, i);
    std::swap(values[i - 1], values[j]);
  }
}

template <typename T>
void shuffle(std::vector<T>& values, Rng& rng) {
  shuffle(std::span<T>(values), rng);
}

// Sorted sample of `count` distinct indices from [0, n) (all of them when
// count >= n).
std::vector<std::size_t> sample_indices(std::size_t n, std::size_t count, Rng& rng);

}  // namespace ppmx
