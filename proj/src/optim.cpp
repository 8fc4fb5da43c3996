#include "aefuse/optim.hpp"

#include <cmath>

#include "aefuse/error.hpp"

namespace aefuse {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

bool in_open_unit(double v) { return v > 0.0 && v < 1.0; }

void ensure_state(OptimizerState& state, std::span<Matrix* const> params, bool need_first) {
    auto init = [&](std::vector<Matrix>& acc) {
        if (acc.empty()) {
            for (const Matrix* p : params) acc.emplace_back(p->rows(), p->cols());
        } else if (acc.size() != params.size()) {
            throw ShapeError("optimizer: state holds " + std::to_string(acc.size()) +
                             " parameters, got " + std::to_string(params.size()));
        }
        for (std::size_t i = 0; i < params.size(); ++i)
            require_same_shape(acc[i], *params[i], "optimizer state");
    };
    init(state.second);
    if (need_first) init(state.first);
}

}  // namespace

void validate(const OptimizerKind& kind) {
    std::visit(overloaded{
                   [](const Sgd& o) {
                       if (!(o.lr > 0.0)) throw ConfigError("sgd: learning rate must be positive");
                   },
                   [](const AdaGrad& o) {
                       if (!(o.lr > 0.0 && o.eps > 0.0))
                           throw ConfigError("adagrad: learning rate and eps must be positive");
                   },
                   [](const RmsProp& o) {
                       if (!(o.lr > 0.0 && o.eps > 0.0 && in_open_unit(o.decay)))
                           throw ConfigError("rmsprop: need lr > 0, eps > 0, decay in (0,1)");
                   },
                   [](const Adam& o) {
                       if (!(o.lr > 0.0 && o.eps > 0.0 && in_open_unit(o.beta1) &&
                             in_open_unit(o.beta2)))
                           throw ConfigError("adam: need lr > 0, eps > 0, betas in (0,1)");
                   },
               },
               kind);
}

void step(const OptimizerKind& kind, OptimizerState& state, std::span<Matrix* const> params,
          std::span<const Matrix> grads) {
    if (params.size() != grads.size())
        throw ShapeError("optimizer: " + std::to_string(params.size()) + " parameters but " +
                         std::to_string(grads.size()) + " gradients");
    for (std::size_t i = 0; i < params.size(); ++i)
        require_same_shape(*params[i], grads[i], "optimizer step");
    ensure_state(state, params, std::holds_alternative<Adam>(kind));
    ++state.t;

    for (std::size_t p = 0; p < params.size(); ++p) {
        auto w = params[p]->data();
        auto g = grads[p].data();
        auto acc = state.second[p].data();
        std::visit(
            overloaded{
                [&](const Sgd& o) {
                    for (std::size_t i = 0; i < w.size(); ++i) w[i] -= o.lr * g[i];
                },
                [&](const AdaGrad& o) {
                    for (std::size_t i = 0; i < w.size(); ++i) {
                        acc[i] += g[i] * g[i];
                        w[i] -= o.lr * g[i] / (std::sqrt(acc[i]) + o.eps);
                    }
                },
                [&](const RmsProp& o) {
                    for (std::size_t i = 0; i < w.size(); ++i) {
                        acc[i] = o.decay * acc[i] + (1.0 - o.decay) * g[i] * g[i];
                        w[i] -= o.lr * g[i] / (std::sqrt(acc[i]) + o.eps);
                    }
                },
                [&](const Adam& o) {
                    auto m = state.first[p].data();
                    const double t = static_cast<double>(state.t);
                    const double c1 = 1.0 - std::pow(o.beta1, t);
                    const double c2 = 1.0 - std::pow(o.beta2, t);
                    for (std::size_t i = 0; i < w.size(); ++i) {
                        m[i] = o.beta1 * m[i] + (1.0 - o.beta1) * g[i];
                        acc[i] = o.beta2 * acc[i] + (1.0 - o.beta2) * g[i] * g[i];
                        const double m_hat = m[i] / c1;
                        const double v_hat = acc[i] / c2;
                        w[i] -= o.lr * m_hat / (std::sqrt(v_hat) + o.eps);
                    }
                },
            },
            kind);
    }
}

double learning_rate(const OptimizerKind& kind) {
    return std::visit([](const auto& o) { return o.lr; }, kind);
}

OptimizerKind parse_optimizer(std::string_view name, std::optional<double> lr) {
    OptimizerKind kind;
    if (name == "sgd")
        kind = Sgd{};
    else if (name == "adagrad")
        kind = AdaGrad{};
    else if (name == "rmsprop")
        kind = RmsProp{};
    else if (name == "adam")
        kind = Adam{};
    else
        throw ConfigError("unknown optimizer '" + std::string(name) +
                          "' (expected sgd, adagrad, rmsprop or adam)");
    if (lr) std::visit([&](auto& o) { o.lr = *lr; }, kind);
    validate(kind);
    return kind;
}

std::string to_string(const OptimizerKind& kind) {
    return std::visit(overloaded{
                          [](const Sgd&) { return std::string("sgd"); },
                          [](const AdaGrad&) { return std::string("adagrad"); },
                          [](const RmsProp&) { return std::string("rmsprop"); },
                          [](const Adam&) { return std::string("adam"); },
                      },
                      kind);
}

}  // namespace aefuse
