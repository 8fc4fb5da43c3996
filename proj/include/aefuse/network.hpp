#pragma once

#include <cstddef>
#include <vector>

#include "aefuse/activations.hpp"
#include "aefuse/corruption.hpp"
#include "aefuse/losses.hpp"
#include "aefuse/matrix.hpp"
#include "aefuse/regularizers.hpp"
#include "aefuse/rng.hpp"

namespace aefuse {

/// Dense layer computing s(x Wᵀ + b) on a batch x of rows.
struct Layer {
    Matrix weights;  // out×in
    Matrix bias;     // 1×out
    Activation activation;

    std::size_t in_dim() const noexcept { return weights.cols(); }
    std::size_t out_dim() const noexcept { return weights.rows(); }

    friend bool operator==(const Layer&, const Layer&) = default;
};

/// Feed-forward autoencoder. Layers [0, split) form the encoder, the rest the
/// decoder. In a tied network the decoder layer L-1-k holds the transpose of
/// encoder layer k's weights; biases are never tied.
class Network {
public:
    Network() = default;
    /// Throws ShapeError if dimensions do not chain or the output width differs
    /// from the input width; ConfigError for an invalid split or tie layout.
    Network(std::vector<Layer> layers, std::size_t split, bool tied);

    const std::vector<Layer>& layers() const noexcept { return layers_; }
    Layer& layer(std::size_t i) { return layers_.at(i); }
    const Layer& layer(std::size_t i) const { return layers_.at(i); }
    std::size_t depth() const noexcept { return layers_.size(); }
    std::size_t split() const noexcept { return split_; }
    bool tied() const noexcept { return tied_; }

    std::size_t input_dim() const { return layers_.front().in_dim(); }
    std::size_t encoding_dim() const { return layers_[split_ - 1].out_dim(); }
    const Activation& encoding_activation() const { return layers_[split_ - 1].activation; }

    /// True when layer i's weights are the transpose of an encoder layer's.
    bool is_tied_decoder(std::size_t i) const noexcept { return tied_ && i >= split_; }
    /// Rewrites every tied decoder matrix from its encoder mirror.
    void sync_tied();
    /// Same weights with every decoder matrix trained independently.
    Network untied() const { return Network(layers_, split_, false); }

    /// Trainable parameters in a fixed order: per layer, W (omitted for tied
    /// decoders) then b.
    std::vector<Matrix*> parameters();
    std::vector<const Matrix*> parameters() const;
    std::size_t parameter_count() const;

    friend bool operator==(const Network&, const Network&) = default;

private:
    std::vector<Layer> layers_;
    std::size_t split_ = 0;
    bool tied_ = false;
};

/// Architecture and taxonomy switches of an autoencoder.
struct AeConfig {
    std::size_t input_dim = 784;
    std::size_t encoding_dim = 36;
    /// Encoder widths between input and encoding; the decoder mirrors them.
    std::vector<std::size_t> hidden_dims;
    Activation enc_activation = Activation::tanh();
    Activation out_activation = Activation::sigmoid();
    bool tied = false;
    RegularizerConfig regularizers;
    Corruption corruption;
    Loss loss = Loss::cross_entropy();

    /// Rejects inconsistent dimensions and unsupported combinations
    /// (sparse or contractive with unbounded activations, contractive on a
    /// deep encoder, cross-entropy without a sigmoid output).
    void validate() const;
};

/// Symmetric d→…→c→…→d network, Glorot-uniform weights, zero biases.
Network build_autoencoder(const AeConfig& cfg, Rng& rng);

/// Pre- and post-activation values of every layer for one batch.
struct ForwardCache {
    Matrix input;
    std::vector<Matrix> pre;
    std::vector<Matrix> post;

    const Matrix& output() const { return post.back(); }
    /// Input seen by layer i.
    const Matrix& layer_input(std::size_t i) const { return i == 0 ? input : post[i - 1]; }
};

ForwardCache forward(const Network& net, const Matrix& x);

/// Per-layer gradients of the objective, before tied weights are merged.
struct Gradients {
    std::vector<Matrix> weights;
    std::vector<Matrix> biases;
};

/// Objective terms for one batch: `loss` is the batch sum of per-instance
/// losses; `penalty` is the regularization contribution on the objective scale.
struct ObjectiveValue {
    double loss = 0.0;
    double penalty = 0.0;
};

/// Batch objective minimized by training:
///
///   J = (1/n) sum_x L(x, r(x̃)) + lambda sum w^2 + beta sum_i KL(rho || rho_hat_i)
///       + (gamma/n) sum_x ||J_f(x̃)||_F^2
///
/// where x̃ is the (possibly corrupted) input held by `cache` and x the clean
/// target. Tied decoders are not counted twice by the decay term.
double objective(const Network& net, const Matrix& input, const Matrix& targets, const Loss& loss,
                 const RegularizerConfig& regs, ObjectiveValue* parts = nullptr);

/// Exact gradients of `objective` for every layer.
Gradients backward(const Network& net, const ForwardCache& cache, const Matrix& targets,
                   const Loss& loss, const RegularizerConfig& regs,
                   ObjectiveValue* value = nullptr);

/// Gradients in `net.parameters()` order; a tied matrix receives its encoder
/// gradient plus the transposed decoder gradient.
std::vector<Matrix> flatten_gradients(const Network& net, const Gradients& grads);

/// Throws ConfigError when the regularizers cannot be applied to this network.
void check_regularizers(const Network& net, const RegularizerConfig& regs);

/// Output of the encoder layers. Never corrupts.
Matrix encode(const Network& net, const Matrix& x);
/// Runs the decoder layers on codes.
Matrix decode(const Network& net, const Matrix& codes);
/// Full pass, decode(encode(x)).
Matrix reconstruct(const Network& net, const Matrix& x);

/// Mean per-instance loss between `targets` and the reconstruction of `inputs`.
double mean_loss(const Network& net, const Matrix& inputs, const Matrix& targets,
                 const Loss& loss);
inline double mean_loss(const Network& net, const Matrix& x, const Loss& loss) {
    return mean_loss(net, x, x, loss);
}

/// Per-sample ||J_f(x)||_F^2 averaged over rows, for a shallow sigmoid/tanh encoder.
double mean_jacobian_norm(const Network& net, const Matrix& x);

}  // namespace aefuse
