#pragma once

#include <span>
#include <vector>

#include "aefuse/activations.hpp"
#include "aefuse/matrix.hpp"

namespace aefuse {

/// Penalty terms added to the reconstruction objective.
///
/// `rho_target` is expressed on the [0,1] scale that encodings are mapped to
/// before the KL term: a tanh target of -0.7 corresponds to 0.15.
struct RegularizerConfig {
    double decay_lambda = 0.0;
    bool sparse = false;
    double rho_target = 0.15;
    double sparse_weight = 1.0;
    bool contractive = false;
    double contractive_weight = 0.1;

    /// Throws ConfigError on negative weights or rho outside (0,1).
    void validate() const;

    friend bool operator==(const RegularizerConfig&, const RegularizerConfig&) = default;
};

/// Default weight-decay lambda when decay is switched on.
inline constexpr double kDefaultDecayLambda = 0.01;
/// Clamp applied to rho_hat inside the KL divergence.
inline constexpr double kSparsityEps = 1e-7;

struct PenaltyGrad {
    double penalty = 0.0;
    Matrix grad;
};

/// lambda * sum w^2 and its gradient 2 lambda w.
PenaltyGrad weight_decay(const Matrix& weights, double lambda);

/// Affine map (offset, scale) taking the activation's output range onto [0,1]:
/// rescaled = (a + offset) * scale. Throws ConfigError for unbounded activations.
std::pair<double, double> sparsity_rescale(const Activation& act);

/// Per-unit mean of the rescaled encodings over the batch rows.
std::vector<double> mean_activation(const Matrix& encodings, const Activation& act);

struct KlResult {
    double penalty = 0.0;
    std::vector<double> grad;  // d penalty / d rho_hat_i
};

/// sum_i KL(rho || rho_hat_i) for Bernoulli distributions.
KlResult kl_sparsity(double rho, std::span<const double> rho_hat);

struct ContractiveResult {
    double penalty = 0.0;
    Matrix grad_weights;  // c×d
    Matrix grad_bias;     // 1×c
};

/// Sum over batch rows of ||J_f(x)||_F^2 for a single dense encoder layer
/// h = s(x Wᵀ + b), where J_f = diag(s'(z)) W, so the squared norm is
/// sum_i s'(z_i)^2 sum_j W_ij^2. Gradients include the dependence of z on W and b.
///
/// `inputs` is n×d, `weights` c×d, `pre_activations` n×c. Only sigmoid and tanh
/// encoders are supported.
ContractiveResult contractive_penalty(const Matrix& weights, const Matrix& inputs,
                                      const Matrix& pre_activations, const Activation& act);

/// Throws ConfigError unless the activation admits the contractive closed form.
void require_contractive_activation(const Activation& act);

}  // namespace aefuse
