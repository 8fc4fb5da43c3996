#include "aefuse/rng.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

#include "aefuse/error.hpp"

namespace aefuse {

double Rng::uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double Rng::normal() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    // 1 - u keeps the log argument in (0, 1].
    const double u1 = 1.0 - uniform();
    const double u2 = uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    spare_ = radius * std::sin(angle);
    has_spare_ = true;
    return radius * std::cos(angle);
}

std::size_t Rng::below(std::size_t n) {
    if (n == 0) throw ConfigError("Rng::below: n must be positive");
    // Rejection sampling removes modulo bias.
    const std::uint64_t bound = static_cast<std::uint64_t>(n);
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                std::numeric_limits<std::uint64_t>::max() % bound;
    std::uint64_t draw;
    do {
        draw = engine_();
    } while (draw >= limit);
    return static_cast<std::size_t>(draw % bound);
}

std::vector<std::size_t> Rng::permutation(std::size_t n) {
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    for (std::size_t i = n; i > 1; --i) std::swap(idx[i - 1], idx[below(i)]);
    return idx;
}

Matrix rng_uniform(Rng& rng, double lo, double hi, std::size_t rows, std::size_t cols) {
    if (!(lo <= hi)) throw ConfigError("rng_uniform: lo must not exceed hi");
    Matrix out(rows, cols);
    for (double& v : out.data()) {
        v = lo + (hi - lo) * rng.uniform();
        if (v >= hi && hi > lo) v = std::nextafter(hi, lo);
    }
    return out;
}

Matrix rng_normal(Rng& rng, double mean, double sd, std::size_t rows, std::size_t cols) {
    if (!(sd >= 0.0)) throw ConfigError("rng_normal: sd must be non-negative");
    Matrix out(rows, cols);
    for (double& v : out.data()) v = mean + sd * rng.normal();
    return out;
}

}  // namespace aefuse
