#include "aefuse/regularizers.hpp"

#include <algorithm>
#include <cmath>

#include "aefuse/error.hpp"

namespace aefuse {

void RegularizerConfig::validate() const {
    if (!(decay_lambda >= 0.0)) throw ConfigError("weight decay lambda must be non-negative");
    if (!(sparse_weight >= 0.0)) throw ConfigError("sparse weight must be non-negative");
    if (!(contractive_weight >= 0.0)) throw ConfigError("contractive weight must be non-negative");
    if (sparse && !(rho_target > 0.0 && rho_target < 1.0))
        throw ConfigError("sparsity target rho must lie strictly inside (0,1)");
}

PenaltyGrad weight_decay(const Matrix& weights, double lambda) {
    if (!(lambda >= 0.0)) throw ConfigError("weight decay lambda must be non-negative");
    return {lambda * sum_squares(weights), scale(weights, 2.0 * lambda)};
}

std::pair<double, double> sparsity_rescale(const Activation& act) {
    switch (act.type) {
        case ActivationType::Sigmoid: return {0.0, 1.0};
        case ActivationType::Tanh: return {1.0, 0.5};
        default:
            throw ConfigError("sparsity requires a sigmoid or tanh encoding activation, got " +
                              to_string(act));
    }
}

std::vector<double> mean_activation(const Matrix& encodings, const Activation& act) {
    if (encodings.rows() == 0) throw DataError("mean_activation: empty batch");
    const auto [offset, factor] = sparsity_rescale(act);
    const Matrix means = column_means(encodings);
    std::vector<double> rho_hat(encodings.cols());
    for (std::size_t i = 0; i < rho_hat.size(); ++i)
        rho_hat[i] = (means(0, i) + offset) * factor;
    return rho_hat;
}

KlResult kl_sparsity(double rho, std::span<const double> rho_hat) {
    if (!(rho > 0.0 && rho < 1.0)) throw ConfigError("sparsity target rho must lie in (0,1)");
    KlResult out;
    out.grad.resize(rho_hat.size());
    for (std::size_t i = 0; i < rho_hat.size(); ++i) {
        const double q = std::clamp(rho_hat[i], kSparsityEps, 1.0 - kSparsityEps);
        out.penalty += rho * std::log(rho / q) + (1.0 - rho) * std::log((1.0 - rho) / (1.0 - q));
        out.grad[i] = -rho / q + (1.0 - rho) / (1.0 - q);
    }
    return out;
}

void require_contractive_activation(const Activation& act) {
    if (act.type != ActivationType::Sigmoid && act.type != ActivationType::Tanh)
        throw ConfigError("contractive requires shallow sigmoid/tanh encoder, got activation " +
                          to_string(act));
}

ContractiveResult contractive_penalty(const Matrix& weights, const Matrix& inputs,
                                      const Matrix& pre_activations, const Activation& act) {
    require_contractive_activation(act);
    const std::size_t n = inputs.rows();
    const std::size_t c = weights.rows();
    if (inputs.cols() != weights.cols() || pre_activations.rows() != n ||
        pre_activations.cols() != c)
        throw ShapeError("contractive_penalty: weights " + weights.shape_string() + ", inputs " +
                         inputs.shape_string() + ", pre-activations " +
                         pre_activations.shape_string());

    // Row norms of W.
    std::vector<double> row_norm(c, 0.0);
    for (std::size_t i = 0; i < c; ++i)
        for (double w : weights.row(i)) row_norm[i] += w * w;

    ContractiveResult out;
    // coeff(x, i) = 2 s'(z_i) s''(z_i) ||W_i||^2 multiplies x_j in dP/dW_ij and
    // is dP/db_i directly; sq_sum(i) = sum_x s'(z_i)^2 multiplies 2 W_ij.
    Matrix coeff(n, c);
    std::vector<double> sq_sum(c, 0.0);
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t i = 0; i < c; ++i) {
            const double z = pre_activations(r, i);
            double d1 = 0.0;
            double d2 = 0.0;
            if (act.type == ActivationType::Sigmoid) {
                const double h = activate(act, z);
                d1 = h * (1.0 - h);
                d2 = d1 * (1.0 - 2.0 * h);
            } else {
                const double h = std::tanh(z);
                d1 = 1.0 - h * h;
                d2 = -2.0 * h * d1;
            }
            out.penalty += d1 * d1 * row_norm[i];
            sq_sum[i] += d1 * d1;
            coeff(r, i) = 2.0 * d1 * d2 * row_norm[i];
        }
    }
    out.grad_weights = matmul_tn(coeff, inputs);
    for (std::size_t i = 0; i < c; ++i) {
        auto g = out.grad_weights.row(i);
        auto w = weights.row(i);
        for (std::size_t j = 0; j < g.size(); ++j) g[j] += 2.0 * sq_sum[i] * w[j];
    }
    out.grad_bias = column_sums(coeff);
    return out;
}

}  // namespace aefuse
