#include "aefuse/train.hpp"

#include <chrono>
#include <numeric>

#include "aefuse/error.hpp"

namespace aefuse {

void TrainConfig::validate() const {
    if (epochs > 0 && batch_size < 1) throw ConfigError("batch size must be at least 1");
    aefuse::validate(optimizer);
}

TrainReport train(Network& net, const Matrix& x, const TrainConfig& cfg, const AeConfig& ae,
                  const TrainHooks& hooks) {
    cfg.validate();
    ae.corruption.validate();
    check_regularizers(net, ae.regularizers);
    if (x.rows() == 0) throw DataError("train: empty dataset");
    if (x.cols() != net.input_dim())
        throw ShapeError("train: data has " + std::to_string(x.cols()) +
                         " columns but the network expects " + std::to_string(net.input_dim()));
    for (const Layer& l : net.layers())
        if (l.activation.type == ActivationType::Binary) {
            warn("binary activation has zero derivative; layers using it receive no gradient");
            break;
        }

    TrainReport report;
    if (cfg.epochs == 0) return report;

    const auto start = std::chrono::steady_clock::now();
    Rng rng(cfg.seed);
    OptimizerState state;
    const std::size_t n = x.rows();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});

    for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
        if (cfg.shuffle) order = rng.permutation(n);
        double loss_sum = 0.0;
        double penalty_sum = 0.0;
        std::size_t batches = 0;
        for (std::size_t begin = 0; begin < n; begin += cfg.batch_size) {
            const std::size_t end = std::min(n, begin + cfg.batch_size);
            const Matrix clean =
                x.select_rows(std::span<const std::size_t>(order.data() + begin, end - begin));
            const Matrix input = ae.corruption.active() ? corrupt(ae.corruption, clean, rng) : clean;
            if (hooks.before_loss) hooks.before_loss(input, clean);

            const ForwardCache cache = forward(net, input);
            ObjectiveValue value;
            const Gradients grads = backward(net, cache, clean, ae.loss, ae.regularizers, &value);
            const std::vector<Matrix> flat = flatten_gradients(net, grads);
            const std::vector<Matrix*> params = net.parameters();
            step(cfg.optimizer, state, params, flat);
            net.sync_tied();

            loss_sum += value.loss;
            penalty_sum += value.penalty;
            ++batches;
        }
        for (const Matrix* p : std::as_const(net).parameters())
            if (!all_finite(*p))
                throw Error("training diverged: non-finite parameters after epoch " +
                            std::to_string(epoch + 1));
        report.loss.push_back(loss_sum / static_cast<double>(n));
        report.penalty.push_back(penalty_sum / static_cast<double>(batches));
        if (hooks.on_epoch) hooks.on_epoch(epoch + 1, report.loss.back(), report.penalty.back());
    }
    report.seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return report;
}

Network stack_pretrain(std::span<const std::size_t> dims, const Matrix& x,
                       const AeConfig& layer_cfg, const TrainConfig& train_cfg, Rng& rng) {
    if (dims.size() < 2) throw ConfigError("stack_pretrain needs at least two dimensions");
    if (dims.front() != x.cols())
        throw ShapeError("stack_pretrain: data has " + std::to_string(x.cols()) +
                         " columns but dims start with " + std::to_string(dims.front()));

    std::vector<Network> stages;
    Matrix codes = x;
    for (std::size_t k = 0; k + 1 < dims.size(); ++k) {
        AeConfig cfg = layer_cfg;
        cfg.input_dim = dims[k];
        cfg.encoding_dim = dims[k + 1];
        cfg.hidden_dims.clear();
        if (k > 0) {
            cfg.out_activation = layer_cfg.enc_activation;
            if (cfg.loss.type == LossType::CrossEntropy &&
                cfg.out_activation.type != ActivationType::Sigmoid)
                cfg.loss = Loss::mse();
        }
        Network stage = build_autoencoder(cfg, rng);
        train(stage, codes, train_cfg, cfg);
        codes = encode(stage, codes);
        stages.push_back(std::move(stage));
    }
    if (stages.size() == 1) return std::move(stages.front());

    std::vector<Layer> layers;
    for (const Network& s : stages) layers.push_back(s.layer(0));
    for (std::size_t k = stages.size(); k-- > 0;) {
        Layer dec;
        dec.weights = transpose(stages[k].layer(0).weights);
        dec.bias = Matrix(1, dec.weights.rows());
        dec.activation = k == 0 ? layer_cfg.out_activation : layer_cfg.enc_activation;
        layers.push_back(std::move(dec));
    }
    return Network(std::move(layers), stages.size(), layer_cfg.tied);
}

}  // namespace aefuse
