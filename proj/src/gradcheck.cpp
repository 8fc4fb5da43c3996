#include "aefuse/gradcheck.hpp"

#include <algorithm>
#include <cmath>

#include "aefuse/error.hpp"

namespace aefuse {

GradCheckResult grad_check(const Network& net, const Matrix& x, const Loss& loss,
                           const RegularizerConfig& regs, const GradCheckOptions& options) {
    if (!(options.eps > 0.0)) throw ConfigError("grad_check: eps must be positive");
    const ForwardCache cache = forward(net, x);
    std::vector<Matrix> analytic = flatten_gradients(net, backward(net, cache, x, loss, regs));
    if (options.tamper) options.tamper(analytic);

    Network probe = net;
    std::vector<Matrix*> params = probe.parameters();
    GradCheckResult result;
    for (std::size_t p = 0; p < params.size(); ++p) {
        auto values = params[p]->data();
        for (std::size_t i = 0; i < values.size(); ++i) {
            const double saved = values[i];
            values[i] = saved + options.eps;
            probe.sync_tied();
            const double plus = objective(probe, x, x, loss, regs);
            values[i] = saved - options.eps;
            probe.sync_tied();
            const double minus = objective(probe, x, x, loss, regs);
            values[i] = saved;
            probe.sync_tied();

            const double numeric = (plus - minus) / (2.0 * options.eps);
            const double a = analytic[p].data()[i];
            const double denom =
                std::max({std::abs(a), std::abs(numeric), options.denominator_floor});
            const double err = std::abs(a - numeric) / denom;
            if (err > result.max_rel_error || !std::isfinite(err)) {
                result.max_rel_error = std::isfinite(err) ? err : INFINITY;
                result.worst_parameter = p;
                result.worst_index = i;
            }
            ++result.checked;
        }
    }
    return result;
}

AeConfig GradCheckCase::config() const {
    AeConfig cfg;
    cfg.input_dim = 20;
    cfg.encoding_dim = 8;
    cfg.enc_activation = activation;
    cfg.out_activation = loss.type == LossType::CrossEntropy ? Activation::sigmoid() : activation;
    cfg.loss = loss;
    cfg.regularizers = regularizers;
    return cfg;
}

std::vector<GradCheckCase> gradcheck_suite() {
    const Loss losses[] = {Loss::mse(), Loss::cross_entropy(), Loss::correntropy()};
    const Activation activations[] = {Activation::linear(), Activation::sigmoid(), Activation::tanh(),
                                      Activation::relu(), Activation::selu()};
    std::vector<std::pair<std::string, RegularizerConfig>> sets;
    sets.emplace_back("none", RegularizerConfig{});
    RegularizerConfig decay;
    decay.decay_lambda = kDefaultDecayLambda;
    sets.emplace_back("decay", decay);
    RegularizerConfig sparse;
    sparse.sparse = true;
    sets.emplace_back("sparse", sparse);
    RegularizerConfig contractive;
    contractive.contractive = true;
    sets.emplace_back("contractive", contractive);
    RegularizerConfig both = sparse;
    both.decay_lambda = kDefaultDecayLambda;
    sets.emplace_back("decay+sparse", both);

    std::vector<GradCheckCase> out;
    for (const Loss& loss : losses)
        for (const auto& [name, regs] : sets)
            for (const Activation& act : activations) {
                const bool bounded = act.type == ActivationType::Sigmoid ||
                                     act.type == ActivationType::Tanh;
                if ((regs.sparse || regs.contractive) && !bounded) continue;
                out.push_back({loss, name, regs, act});
            }
    return out;
}

double run_gradcheck_case(const GradCheckCase& c, std::size_t seeds,
                          const GradCheckOptions& options) {
    const AeConfig cfg = c.config();
    double worst = 0.0;
    for (std::size_t s = 1; s <= seeds; ++s) {
        Rng rng(s);
        const Network net = build_autoencoder(cfg, rng);
        const Matrix x = rng_uniform(rng, 0.05, 0.95, 1, cfg.input_dim);
        worst = std::max(worst, grad_check(net, x, c.loss, c.regularizers, options).max_rel_error);
    }
    return worst;
}

}  // namespace aefuse
