#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "aefuse/data.hpp"
#include "aefuse/network.hpp"
#include "aefuse/optim.hpp"

namespace aefuse {

struct TrainConfig {
    OptimizerKind optimizer = RmsProp{};
    std::size_t epochs = 60;
    std::size_t batch_size = 128;
    std::uint64_t seed = 1;
    bool shuffle = true;

    void validate() const;
};

struct TrainReport {
    /// Mean per-instance reconstruction loss of each epoch, measured on the
    /// training batches as they were optimized.
    std::vector<double> loss;
    /// Mean per-batch regularization penalty of each epoch.
    std::vector<double> penalty;
    double seconds = 0.0;
};

/// Instrumentation points. `before_loss` sees each batch's network input and
/// the targets the loss is evaluated against.
struct TrainHooks {
    std::function<void(const Matrix& inputs, const Matrix& targets)> before_loss;
    std::function<void(std::size_t epoch, double loss, double penalty)> on_epoch;
};

/// Mini-batch training of `net` on the rows of `x` with the loss, regularizers
/// and corruption of `ae`. Each epoch reshuffles (when enabled) and redraws
/// corruption from an Rng seeded with `cfg.seed`; targets are always the clean
/// rows. Performs epochs × ceil(n / batch_size) optimizer steps. Throws
/// DataError on an empty dataset and Error if parameters become non-finite.
TrainReport train(Network& net, const Matrix& x, const TrainConfig& cfg, const AeConfig& ae,
                  const TrainHooks& hooks = {});

inline TrainReport train(Network& net, const Dataset& data, const TrainConfig& cfg,
                         const AeConfig& ae, const TrainHooks& hooks = {}) {
    return train(net, data.x, cfg, ae, hooks);
}

/// Greedy layer-wise pretraining.
///
/// For dims = [d, h1, ..., c], trains a shallow AE d→h1→d on `x`, encodes `x`
/// with it, trains h1→h2→h1 on those codes, and so on. The first AE uses
/// `layer_cfg`'s output activation and loss; inner AEs reconstruct hidden codes,
/// so they use the hidden activation at their output and switch cross-entropy
/// to MSE unless that activation is sigmoid. Denoising and contraction apply to
/// every stage; weights are initialized from `rng` in stage order.
///
/// The result is the unrolled network d→h1→…→c→…→h1→d whose decoder weights
/// are the transposes of the trained encoder weights and whose decoder biases
/// are zero. A two-element `dims` returns the trained shallow AE itself.
Network stack_pretrain(std::span<const std::size_t> dims, const Matrix& x,
                       const AeConfig& layer_cfg, const TrainConfig& train_cfg, Rng& rng);

}  // namespace aefuse
