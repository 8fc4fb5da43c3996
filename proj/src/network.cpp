#include "aefuse/network.hpp"

#include <cmath>

#include "aefuse/error.hpp"

namespace aefuse {

Network::Network(std::vector<Layer> layers, std::size_t split, bool tied)
    : layers_(std::move(layers)), split_(split), tied_(tied) {
    if (layers_.empty()) throw ConfigError("network needs at least one layer");
    if (split_ < 1 || split_ >= layers_.size())
        throw ConfigError("encoder split " + std::to_string(split_) + " out of range for " +
                          std::to_string(layers_.size()) + " layers");
    for (std::size_t i = 0; i < layers_.size(); ++i) {
        const Layer& l = layers_[i];
        if (l.bias.rows() != 1 || l.bias.cols() != l.out_dim())
            throw ShapeError("layer " + std::to_string(i) + ": bias " + l.bias.shape_string() +
                             " does not match weights " + l.weights.shape_string());
        if (i > 0 && l.in_dim() != layers_[i - 1].out_dim())
            throw ShapeError("layer " + std::to_string(i) + " expects " +
                             std::to_string(l.in_dim()) + " inputs but layer " +
                             std::to_string(i - 1) + " produces " +
                             std::to_string(layers_[i - 1].out_dim()));
    }
    if (layers_.back().out_dim() != layers_.front().in_dim())
        throw ShapeError("reconstruction width " + std::to_string(layers_.back().out_dim()) +
                         " differs from input width " + std::to_string(layers_.front().in_dim()));
    if (tied_) {
        if (layers_.size() != 2 * split_)
            throw ConfigError("tied weights need a decoder mirroring the encoder");
        for (std::size_t k = 0; k < split_; ++k) {
            const Matrix& enc = layers_[k].weights;
            const Matrix& dec = layers_[layers_.size() - 1 - k].weights;
            if (dec.rows() != enc.cols() || dec.cols() != enc.rows())
                throw ShapeError("tied decoder layer " +
                                 std::to_string(layers_.size() - 1 - k) +
                                 " is not shaped as the transpose of encoder layer " +
                                 std::to_string(k));
        }
        sync_tied();
    }
}

void Network::sync_tied() {
    if (!tied_) return;
    for (std::size_t k = 0; k < split_; ++k)
        layers_[layers_.size() - 1 - k].weights = transpose(layers_[k].weights);
}

std::vector<Matrix*> Network::parameters() {
    std::vector<Matrix*> out;
    for (std::size_t i = 0; i < layers_.size(); ++i) {
        if (!is_tied_decoder(i)) out.push_back(&layers_[i].weights);
        out.push_back(&layers_[i].bias);
    }
    return out;
}

std::vector<const Matrix*> Network::parameters() const {
    std::vector<const Matrix*> out;
    for (std::size_t i = 0; i < layers_.size(); ++i) {
        if (!is_tied_decoder(i)) out.push_back(&layers_[i].weights);
        out.push_back(&layers_[i].bias);
    }
    return out;
}

std::size_t Network::parameter_count() const {
    std::size_t n = 0;
    for (const Matrix* p : parameters()) n += p->size();
    return n;
}

void AeConfig::validate() const {
    if (input_dim < 1 || encoding_dim < 1)
        throw ConfigError("input and encoding dimensions must be at least 1");
    for (std::size_t h : hidden_dims)
        if (h < 1) throw ConfigError("hidden dimensions must be at least 1");
    regularizers.validate();
    corruption.validate();
    if (regularizers.sparse) sparsity_rescale(enc_activation);
    if (regularizers.contractive) {
        if (!hidden_dims.empty())
            throw ConfigError("contractive requires shallow sigmoid/tanh encoder, got " +
                              std::to_string(hidden_dims.size() + 1) + " encoder layers");
        require_contractive_activation(enc_activation);
    }
    if (loss.type == LossType::CrossEntropy && out_activation.type != ActivationType::Sigmoid)
        throw ConfigError("cross-entropy loss requires a sigmoid output activation, got " +
                          to_string(out_activation));
    if (loss.type == LossType::Correntropy && !(loss.kernel_sigma > 0.0))
        throw ConfigError("correntropy kernel sigma must be positive");
}

Network build_autoencoder(const AeConfig& cfg, Rng& rng) {
    cfg.validate();
    std::vector<std::size_t> dims{cfg.input_dim};
    dims.insert(dims.end(), cfg.hidden_dims.begin(), cfg.hidden_dims.end());
    dims.push_back(cfg.encoding_dim);
    const std::size_t split = dims.size() - 1;
    for (std::size_t k = split; k-- > 0;) dims.push_back(dims[k]);

    std::vector<Layer> layers;
    const std::size_t depth = dims.size() - 1;
    for (std::size_t i = 0; i < depth; ++i) {
        const std::size_t in = dims[i];
        const std::size_t out = dims[i + 1];
        Layer layer;
        layer.activation = i + 1 == depth ? cfg.out_activation : cfg.enc_activation;
        if (cfg.tied && i >= split) {
            layer.weights = Matrix(out, in);  // filled by sync_tied
        } else {
            const double r = std::sqrt(6.0 / static_cast<double>(in + out));
            layer.weights = rng_uniform(rng, -r, r, out, in);
        }
        layer.bias = Matrix(1, out);
        layers.push_back(std::move(layer));
    }
    return Network(std::move(layers), split, cfg.tied);
}

ForwardCache forward(const Network& net, const Matrix& x) {
    if (x.cols() != net.input_dim())
        throw ShapeError("forward: input " + x.shape_string() + " but network expects " +
                         std::to_string(net.input_dim()) + " columns");
    ForwardCache cache;
    cache.input = x;
    cache.pre.reserve(net.depth());
    cache.post.reserve(net.depth());
    for (std::size_t i = 0; i < net.depth(); ++i) {
        const Layer& l = net.layer(i);
        cache.pre.push_back(add_row_broadcast(matmul_nt(cache.layer_input(i), l.weights), l.bias));
        cache.post.push_back(activate(l.activation, cache.pre.back()));
    }
    return cache;
}

void check_regularizers(const Network& net, const RegularizerConfig& regs) {
    regs.validate();
    if (regs.sparse) sparsity_rescale(net.encoding_activation());
    if (regs.contractive) {
        if (net.split() != 1)
            throw ConfigError("contractive requires shallow sigmoid/tanh encoder, got " +
                              std::to_string(net.split()) + " encoder layers");
        require_contractive_activation(net.layer(0).activation);
    }
}

namespace {

double decay_penalty(const Network& net, double lambda) {
    if (lambda == 0.0) return 0.0;
    double total = 0.0;
    for (std::size_t i = 0; i < net.depth(); ++i)
        if (!net.is_tied_decoder(i)) total += weight_decay(net.layer(i).weights, lambda).penalty;
    return total;
}

}  // namespace

double objective(const Network& net, const Matrix& input, const Matrix& targets, const Loss& loss,
                 const RegularizerConfig& regs, ObjectiveValue* parts) {
    check_regularizers(net, regs);
    const ForwardCache cache = forward(net, input);
    const double n = static_cast<double>(input.rows());
    ObjectiveValue v;
    v.loss = batch_loss(loss, targets, cache.output());
    v.penalty = decay_penalty(net, regs.decay_lambda);
    if (regs.sparse) {
        const std::size_t enc = net.split() - 1;
        const auto rho_hat = mean_activation(cache.post[enc], net.layer(enc).activation);
        v.penalty += regs.sparse_weight * kl_sparsity(regs.rho_target, rho_hat).penalty;
    }
    if (regs.contractive) {
        const Layer& l = net.layer(0);
        v.penalty += regs.contractive_weight / n *
                     contractive_penalty(l.weights, input, cache.pre[0], l.activation).penalty;
    }
    if (parts) *parts = v;
    return v.loss / n + v.penalty;
}

Gradients backward(const Network& net, const ForwardCache& cache, const Matrix& targets,
                   const Loss& loss, const RegularizerConfig& regs, ObjectiveValue* value) {
    check_regularizers(net, regs);
    const std::size_t depth = net.depth();
    if (cache.post.size() != depth) throw ShapeError("backward: cache does not match network");
    require_same_shape(targets, cache.output(), "backward targets");
    const std::size_t batch = targets.rows();
    if (batch == 0) throw DataError("backward: empty batch");
    const double inv_n = 1.0 / static_cast<double>(batch);

    ObjectiveValue v;
    v.loss = batch_loss(loss, targets, cache.output());

    Gradients g;
    g.weights.resize(depth);
    g.biases.resize(depth);

    // delta holds d J / d (post-activation of layer i).
    Matrix delta = scale(batch_loss_grad(loss, targets, cache.output()), inv_n);
    const std::size_t enc = net.split() - 1;
    for (std::size_t i = depth; i-- > 0;) {
        const Layer& l = net.layer(i);
        if (i == enc && regs.sparse) {
            const auto rho_hat = mean_activation(cache.post[enc], l.activation);
            const auto kl = kl_sparsity(regs.rho_target, rho_hat);
            v.penalty += regs.sparse_weight * kl.penalty;
            const double factor = sparsity_rescale(l.activation).second;
            for (std::size_t r = 0; r < batch; ++r) {
                auto row = delta.row(r);
                for (std::size_t c = 0; c < row.size(); ++c)
                    row[c] += regs.sparse_weight * kl.grad[c] * factor * inv_n;
            }
        }
        Matrix dz = hadamard(delta, activate_deriv(l.activation, cache.pre[i], cache.post[i]));
        g.weights[i] = matmul_tn(dz, cache.layer_input(i));
        g.biases[i] = column_sums(dz);
        if (i > 0) delta = matmul(dz, l.weights);
    }

    if (regs.decay_lambda > 0.0) {
        for (std::size_t i = 0; i < depth; ++i) {
            if (net.is_tied_decoder(i)) continue;
            auto wd = weight_decay(net.layer(i).weights, regs.decay_lambda);
            v.penalty += wd.penalty;
            axpy(g.weights[i], 1.0, wd.grad);
        }
    }
    if (regs.contractive) {
        const Layer& l = net.layer(0);
        auto cp = contractive_penalty(l.weights, cache.input, cache.pre[0], l.activation);
        const double w = regs.contractive_weight * inv_n;
        v.penalty += w * cp.penalty;
        axpy(g.weights[0], w, cp.grad_weights);
        axpy(g.biases[0], w, cp.grad_bias);
    }
    if (value) *value = v;
    return g;
}

std::vector<Matrix> flatten_gradients(const Network& net, const Gradients& grads) {
    const std::size_t depth = net.depth();
    if (grads.weights.size() != depth || grads.biases.size() != depth)
        throw ShapeError("flatten_gradients: gradient count does not match network depth");
    std::vector<Matrix> out;
    for (std::size_t i = 0; i < depth; ++i) {
        if (!net.is_tied_decoder(i)) {
            Matrix w = grads.weights[i];
            if (net.tied() && i < net.split())
                axpy(w, 1.0, transpose(grads.weights[depth - 1 - i]));
            out.push_back(std::move(w));
        }
        out.push_back(grads.biases[i]);
    }
    return out;
}

Matrix encode(const Network& net, const Matrix& x) {
    if (x.cols() != net.input_dim())
        throw ShapeError("encode: input " + x.shape_string() + " but network expects " +
                         std::to_string(net.input_dim()) + " columns");
    Matrix a = x;
    for (std::size_t i = 0; i < net.split(); ++i) {
        const Layer& l = net.layer(i);
        a = activate(l.activation, add_row_broadcast(matmul_nt(a, l.weights), l.bias));
    }
    return a;
}

Matrix decode(const Network& net, const Matrix& codes) {
    if (codes.cols() != net.encoding_dim())
        throw ShapeError("decode: codes " + codes.shape_string() + " but network encodes to " +
                         std::to_string(net.encoding_dim()) + " units");
    Matrix a = codes;
    for (std::size_t i = net.split(); i < net.depth(); ++i) {
        const Layer& l = net.layer(i);
        a = activate(l.activation, add_row_broadcast(matmul_nt(a, l.weights), l.bias));
    }
    return a;
}

Matrix reconstruct(const Network& net, const Matrix& x) { return decode(net, encode(net, x)); }

double mean_loss(const Network& net, const Matrix& inputs, const Matrix& targets,
                 const Loss& loss) {
    if (inputs.rows() == 0) throw DataError("mean_loss: empty dataset");
    return batch_loss(loss, targets, reconstruct(net, inputs)) / static_cast<double>(inputs.rows());
}

double mean_jacobian_norm(const Network& net, const Matrix& x) {
    if (net.split() != 1)
        throw ConfigError("contractive requires shallow sigmoid/tanh encoder, got " +
                          std::to_string(net.split()) + " encoder layers");
    if (x.rows() == 0) throw DataError("mean_jacobian_norm: empty dataset");
    const Layer& l = net.layer(0);
    const Matrix z = add_row_broadcast(matmul_nt(x, l.weights), l.bias);
    return contractive_penalty(l.weights, x, z, l.activation).penalty /
           static_cast<double>(x.rows());
}

}  // namespace aefuse
