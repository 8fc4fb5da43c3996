#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "aefuse/network.hpp"

namespace aefuse {

struct GradCheckOptions {
    double eps = 1e-6;
    /// Lower bound on the relative-error denominator, so parameters whose
    /// gradient is at round-off level are compared absolutely.
    double denominator_floor = 1e-4;
    /// Test hook: mutates the analytic gradients before comparison.
    std::function<void(std::vector<Matrix>&)> tamper;
};

struct GradCheckResult {
    double max_rel_error = 0.0;
    std::size_t worst_parameter = 0;
    std::size_t worst_index = 0;
    std::size_t checked = 0;
};

/// Compares backpropagated gradients of `objective(net, x, x, ...)` against
/// central differences (J(w + eps) - J(w - eps)) / (2 eps) for every trainable
/// parameter entry. Relative error is |a - n| / max(|a|, |n|, floor).
GradCheckResult grad_check(const Network& net, const Matrix& x, const Loss& loss,
                           const RegularizerConfig& regs, const GradCheckOptions& options = {});

/// One configuration of the standard gradient-check suite.
struct GradCheckCase {
    Loss loss;
    std::string regularizer_set;  // none, decay, sparse, contractive, decay+sparse
    RegularizerConfig regularizers;
    Activation activation;

    /// 20→8→20 net using `activation` in every layer, except a sigmoid output
    /// under cross-entropy.
    AeConfig config() const;
};

/// Every valid (loss × regularizer set × activation) combination. Sparse and
/// contractive sets are paired only with sigmoid and tanh encoders.
std::vector<GradCheckCase> gradcheck_suite();

/// Worst relative error of `c` over `seeds` random nets and samples.
double run_gradcheck_case(const GradCheckCase& c, std::size_t seeds,
                          const GradCheckOptions& options = {});

}  // namespace aefuse
