#include "aefuse/losses.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "aefuse/error.hpp"

namespace aefuse {

namespace {

void check_lengths(std::span<const double> u, std::span<const double> v) {
    if (u.size() != v.size())
        throw ShapeError("loss: length mismatch (" + std::to_string(u.size()) + " vs " +
                         std::to_string(v.size()) + ")");
}

void check_unit_interval(std::span<const double> u) {
    for (double t : u)
        if (!(t >= 0.0 && t <= 1.0))
            throw DataError("cross-entropy targets must lie in [0,1], got " + std::to_string(t));
}

double clamp_prob(double v) { return std::clamp(v, kCrossEntropyEps, 1.0 - kCrossEntropyEps); }

double row_loss(const Loss& kind, const double* u, const double* v, std::size_t d) {
    double total = 0.0;
    switch (kind.type) {
        case LossType::MSE:
            for (std::size_t k = 0; k < d; ++k) {
                const double e = u[k] - v[k];
                total += e * e;
            }
            break;
        case LossType::CrossEntropy:
            for (std::size_t k = 0; k < d; ++k) {
                const double p = clamp_prob(v[k]);
                total -= u[k] * std::log(p) + (1.0 - u[k]) * std::log1p(-p);
            }
            break;
        case LossType::Correntropy:
            for (std::size_t k = 0; k < d; ++k)
                total -= correntropy_kernel(u[k] - v[k], kind.kernel_sigma);
            break;
    }
    return total;
}

void row_grad(const Loss& kind, const double* u, const double* v, double* g, std::size_t d) {
    switch (kind.type) {
        case LossType::MSE:
            for (std::size_t k = 0; k < d; ++k) g[k] = 2.0 * (v[k] - u[k]);
            break;
        case LossType::CrossEntropy:
            for (std::size_t k = 0; k < d; ++k) {
                const double p = clamp_prob(v[k]);
                g[k] = -u[k] / p + (1.0 - u[k]) / (1.0 - p);
            }
            break;
        case LossType::Correntropy: {
            const double s2 = kind.kernel_sigma * kind.kernel_sigma;
            for (std::size_t k = 0; k < d; ++k) {
                const double a = u[k] - v[k];
                g[k] = -a * correntropy_kernel(a, kind.kernel_sigma) / s2;
            }
            break;
        }
    }
}

}  // namespace

Loss Loss::correntropy(double sigma) {
    if (!(sigma > 0.0)) throw ConfigError("correntropy kernel sigma must be positive");
    return {LossType::Correntropy, sigma};
}

double correntropy_kernel(double a, double sigma) {
    return std::exp(-a * a / (2.0 * sigma * sigma)) /
           (std::sqrt(2.0 * std::numbers::pi) * sigma);
}

double loss(const Loss& kind, std::span<const double> u, std::span<const double> v) {
    check_lengths(u, v);
    if (kind.type == LossType::CrossEntropy) check_unit_interval(u);
    return row_loss(kind, u.data(), v.data(), u.size());
}

std::vector<double> loss_grad(const Loss& kind, std::span<const double> u,
                              std::span<const double> v) {
    check_lengths(u, v);
    if (kind.type == LossType::CrossEntropy) check_unit_interval(u);
    std::vector<double> g(u.size());
    row_grad(kind, u.data(), v.data(), g.data(), u.size());
    return g;
}

double batch_loss(const Loss& kind, const Matrix& targets, const Matrix& outputs) {
    require_same_shape(targets, outputs, "batch_loss");
    if (kind.type == LossType::CrossEntropy) check_unit_interval(targets.data());
    double total = 0.0;
    for (std::size_t i = 0; i < targets.rows(); ++i)
        total += row_loss(kind, targets.row(i).data(), outputs.row(i).data(), targets.cols());
    return total;
}

Matrix batch_loss_grad(const Loss& kind, const Matrix& targets, const Matrix& outputs) {
    require_same_shape(targets, outputs, "batch_loss_grad");
    if (kind.type == LossType::CrossEntropy) check_unit_interval(targets.data());
    Matrix g(targets.rows(), targets.cols());
    for (std::size_t i = 0; i < targets.rows(); ++i)
        row_grad(kind, targets.row(i).data(), outputs.row(i).data(), g.row(i).data(),
                 targets.cols());
    return g;
}

std::string to_string(const Loss& kind) {
    switch (kind.type) {
        case LossType::MSE: return "mse";
        case LossType::CrossEntropy: return "xent";
        case LossType::Correntropy: return "corr";
    }
    return "mse";
}

Loss parse_loss(std::string_view name, double kernel_sigma) {
    if (name == "mse") return Loss::mse();
    if (name == "xent") return Loss::cross_entropy();
    if (name == "corr") return Loss::correntropy(kernel_sigma);
    throw ConfigError("unknown loss '" + std::string(name) + "' (expected mse, xent or corr)");
}

}  // namespace aefuse
