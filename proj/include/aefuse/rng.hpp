#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

#include "aefuse/matrix.hpp"

namespace aefuse {

/// Seedable pseudo-random source.
///
/// The engine is std::mt19937_64, whose output sequence is fixed by the C++
/// standard. Uniform reals take the top 53 bits of one draw; normals use the
/// Box-Muller transform on two uniforms. Streams are reproducible from the
/// seed alone. An Rng must not be shared between threads.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : seed_(seed), engine_(seed) {}

    std::uint64_t seed() const noexcept { return seed_; }

    std::uint64_t next_u64() { return engine_(); }
    /// Uniform in [0, 1).
    double uniform();
    /// Standard normal.
    double normal();
    /// Uniform integer in [0, n). n must be positive.
    std::size_t below(std::size_t n);

    /// Fisher-Yates permutation of 0..n-1.
    std::vector<std::size_t> permutation(std::size_t n);

private:
    std::uint64_t seed_;
    std::mt19937_64 engine_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

/// rows×cols matrix of U[lo, hi) draws. Throws ConfigError when lo > hi.
Matrix rng_uniform(Rng& rng, double lo, double hi, std::size_t rows, std::size_t cols);

/// rows×cols matrix of N(mean, sd²) draws. Throws ConfigError when sd < 0.
Matrix rng_normal(Rng& rng, double mean, double sd, std::size_t rows, std::size_t cols);

}  // namespace aefuse
