#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "aefuse/matrix.hpp"

namespace aefuse {

struct Sgd {
    double lr = 0.01;
};

struct AdaGrad {
    double lr = 0.01;
    double eps = 1e-8;
};

struct RmsProp {
    double lr = 0.001;
    double decay = 0.9;
    double eps = 1e-8;
};

struct Adam {
    double lr = 0.001;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
};

using OptimizerKind = std::variant<Sgd, AdaGrad, RmsProp, Adam>;

/// Per-parameter accumulators. `first` holds Adam's first moment; `second`
/// holds squared-gradient sums (AdaGrad), running averages (RMSProp) or
/// Adam's second moment. Lazily shaped on the first step.
struct OptimizerState {
    std::vector<Matrix> first;
    std::vector<Matrix> second;
    std::size_t t = 0;
};

/// Throws ConfigError for non-positive rates or decay factors outside (0,1).
void validate(const OptimizerKind& kind);

/// Applies one update to every parameter in place.
void step(const OptimizerKind& kind, OptimizerState& state, std::span<Matrix* const> params,
          std::span<const Matrix> grads);

double learning_rate(const OptimizerKind& kind);

/// Textual names: sgd, adagrad, rmsprop, adam. `lr` overrides the default rate.
OptimizerKind parse_optimizer(std::string_view name, std::optional<double> lr = std::nullopt);
std::string to_string(const OptimizerKind& kind);

}  // namespace aefuse
