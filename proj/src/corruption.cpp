#include "aefuse/corruption.hpp"

#include <cmath>
#include <numeric>

#include "aefuse/error.hpp"

namespace aefuse {

namespace {

// Partial Fisher-Yates: the first k entries of `idx` become a uniform sample
// without replacement.
void choose_positions(std::vector<std::size_t>& idx, std::size_t k, Rng& rng) {
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    for (std::size_t i = 0; i < k; ++i) std::swap(idx[i], idx[i + rng.below(idx.size() - i)]);
}

void corrupt_row(const Corruption& kind, std::span<double> row, Rng& rng,
                 std::vector<std::size_t>& scratch) {
    switch (kind.type) {
        case CorruptionType::None: return;
        case CorruptionType::Gaussian:
            if (kind.level == 0.0) return;
            for (double& v : row) v += kind.level * rng.normal();
            return;
        case CorruptionType::Masking:
        case CorruptionType::SaltPepper: {
            const std::size_t k = corrupted_count(kind.level, row.size());
            scratch.resize(row.size());
            choose_positions(scratch, k, rng);
            for (std::size_t i = 0; i < k; ++i) {
                double& v = row[scratch[i]];
                if (kind.type == CorruptionType::Masking)
                    v = 0.0;
                else
                    v = (rng.next_u64() >> 63) ? kind.max_val : kind.min_val;
            }
            return;
        }
    }
}

}  // namespace

void Corruption::validate() const {
    switch (type) {
        case CorruptionType::None: return;
        case CorruptionType::Gaussian:
            if (!(level >= 0.0)) throw ConfigError("gaussian corruption sd must be non-negative");
            return;
        case CorruptionType::Masking:
        case CorruptionType::SaltPepper:
            if (!(level >= 0.0 && level <= 1.0))
                throw ConfigError("corruption fraction must lie in [0,1]");
            if (type == CorruptionType::SaltPepper && !(min_val <= max_val))
                throw ConfigError("salt-and-pepper min must not exceed max");
            return;
    }
}

std::size_t corrupted_count(double fraction, std::size_t d) {
    // The small slack absorbs representation error, e.g. 0.29 * 100.
    const double exact = fraction * static_cast<double>(d);
    return std::min(d, static_cast<std::size_t>(std::floor(exact + 1e-9)));
}

std::vector<double> corrupt(const Corruption& kind, std::span<const double> x, Rng& rng) {
    kind.validate();
    std::vector<double> out(x.begin(), x.end());
    std::vector<std::size_t> scratch;
    corrupt_row(kind, out, rng, scratch);
    return out;
}

Matrix corrupt(const Corruption& kind, const Matrix& x, Rng& rng) {
    kind.validate();
    Matrix out = x;
    std::vector<std::size_t> scratch;
    for (std::size_t r = 0; r < out.rows(); ++r) corrupt_row(kind, out.row(r), rng, scratch);
    return out;
}

std::string to_string(CorruptionType type) {
    switch (type) {
        case CorruptionType::None: return "none";
        case CorruptionType::Masking: return "masking";
        case CorruptionType::Gaussian: return "gaussian";
        case CorruptionType::SaltPepper: return "saltpepper";
    }
    return "none";
}

Corruption parse_corruption(std::string_view name, double level) {
    Corruption c;
    if (name == "none")
        c = Corruption::none();
    else if (name == "masking")
        c = Corruption::masking(level);
    else if (name == "gaussian")
        c = Corruption::gaussian(level);
    else if (name == "saltpepper")
        c = Corruption::salt_pepper(level);
    else
        throw ConfigError("unknown corruption '" + std::string(name) +
                          "' (expected masking, gaussian or saltpepper)");
    c.validate();
    return c;
}

}  // namespace aefuse
