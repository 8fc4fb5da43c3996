#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "aefuse/matrix.hpp"

namespace aefuse {

enum class LossType { MSE, CrossEntropy, Correntropy };

/// Per-instance reconstruction loss L(u, v) between target u and reconstruction v.
///
///   MSE          ||u - v||^2
///   CrossEntropy -sum u log v + (1 - u) log(1 - v), v clamped to [eps, 1 - eps]
///   Correntropy  -sum K(u - v), K(a) = exp(-a^2 / (2 sigma^2)) / (sqrt(2 pi) sigma)
struct Loss {
    LossType type = LossType::MSE;
    double kernel_sigma = 0.2;

    static Loss mse() { return {LossType::MSE}; }
    static Loss cross_entropy() { return {LossType::CrossEntropy}; }
    /// Throws ConfigError unless sigma > 0.
    static Loss correntropy(double sigma = 0.2);

    friend bool operator==(const Loss&, const Loss&) = default;
};

/// Clamp applied to v inside the cross-entropy logarithms.
inline constexpr double kCrossEntropyEps = 1e-7;

/// Gaussian kernel K_sigma(a).
double correntropy_kernel(double a, double sigma);

double loss(const Loss& kind, std::span<const double> u, std::span<const double> v);
/// dL/dv.
std::vector<double> loss_grad(const Loss& kind, std::span<const double> u,
                              std::span<const double> v);

/// Sum over rows of the per-instance loss between targets and outputs.
double batch_loss(const Loss& kind, const Matrix& targets, const Matrix& outputs);
/// Row-wise dL/dv for a batch.
Matrix batch_loss_grad(const Loss& kind, const Matrix& targets, const Matrix& outputs);

/// Textual names: mse, xent, corr.
std::string to_string(const Loss& kind);
Loss parse_loss(std::string_view name, double kernel_sigma = 0.2);

}  // namespace aefuse
