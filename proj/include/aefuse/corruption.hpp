#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "aefuse/matrix.hpp"
#include "aefuse/rng.hpp"

namespace aefuse {

enum class CorruptionType { None, Masking, Gaussian, SaltPepper };

/// Stochastic input corruption q(x̃|x) for denoising autoencoders.
///
/// Masking and SaltPepper touch exactly floor(level·d) distinct positions per
/// sample; `level` is the fraction ν. For Gaussian, `level` is the noise sd.
struct Corruption {
    CorruptionType type = CorruptionType::None;
    double level = 0.0;
    double min_val = 0.0;
    double max_val = 1.0;

    static Corruption none() { return {}; }
    static Corruption masking(double fraction) { return {CorruptionType::Masking, fraction}; }
    static Corruption gaussian(double sd) { return {CorruptionType::Gaussian, sd}; }
    static Corruption salt_pepper(double fraction, double lo = 0.0, double hi = 1.0) {
        return {CorruptionType::SaltPepper, fraction, lo, hi};
    }

    void validate() const;
    bool active() const noexcept { return type != CorruptionType::None; }

    friend bool operator==(const Corruption&, const Corruption&) = default;
};

/// Number of positions changed by Masking/SaltPepper on a d-length sample.
std::size_t corrupted_count(double fraction, std::size_t d);

std::vector<double> corrupt(const Corruption& kind, std::span<const double> x, Rng& rng);
/// Row-wise corruption of a batch, rows processed in order.
Matrix corrupt(const Corruption& kind, const Matrix& x, Rng& rng);

/// Textual names: none, masking, gaussian, saltpepper.
std::string to_string(CorruptionType type);
Corruption parse_corruption(std::string_view name, double level);

}  // namespace aefuse
