#include "aefuse/activations.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>

#include "aefuse/error.hpp"

namespace aefuse {

namespace {

double sigmoid(double z) {
    if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
    const double e = std::exp(z);
    return e / (1.0 + e);
}

double parse_real(std::string_view text, std::string_view context) {
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size())
        throw ConfigError("invalid number '" + std::string(text) + "' in " + std::string(context));
    return value;
}

}  // namespace

Activation Activation::selu(double lambda, double alpha) {
    if (!(lambda > 1.0)) throw ConfigError("selu: lambda must be greater than 1");
    return {ActivationType::SELU, lambda, alpha};
}

double activate(const Activation& act, double z) {
    switch (act.type) {
        case ActivationType::Linear: return z;
        case ActivationType::Binary: return z > 0.0 ? 1.0 : 0.0;
        case ActivationType::ReLU: return z > 0.0 ? z : 0.0;
        case ActivationType::SELU:
            return z > 0.0 ? act.selu_lambda * z
                           : act.selu_lambda * act.selu_alpha * std::expm1(z);
        case ActivationType::Sigmoid: return sigmoid(z);
        case ActivationType::Tanh: return std::tanh(z);
    }
    return z;
}

double activate_deriv(const Activation& act, double z) {
    switch (act.type) {
        case ActivationType::Linear: return 1.0;
        case ActivationType::Binary: return 0.0;
        case ActivationType::ReLU: return z >= 0.0 ? 1.0 : 0.0;
        case ActivationType::SELU:
            return z >= 0.0 ? act.selu_lambda : act.selu_lambda * act.selu_alpha * std::exp(z);
        case ActivationType::Sigmoid: {
            const double s = sigmoid(z);
            return s * (1.0 - s);
        }
        case ActivationType::Tanh: {
            const double t = std::tanh(z);
            return 1.0 - t * t;
        }
    }
    return 1.0;
}

Matrix activate(const Activation& act, const Matrix& z) {
    Matrix out(z.rows(), z.cols());
    auto src = z.data();
    auto dst = out.data();
    for (std::size_t i = 0; i < src.size(); ++i) dst[i] = activate(act, src[i]);
    return out;
}

Matrix activate_deriv(const Activation& act, const Matrix& z) {
    Matrix out(z.rows(), z.cols());
    auto src = z.data();
    auto dst = out.data();
    for (std::size_t i = 0; i < src.size(); ++i) dst[i] = activate_deriv(act, src[i]);
    return out;
}

Matrix activate_deriv(const Activation& act, const Matrix& z, const Matrix& h) {
    require_same_shape(z, h, "activate_deriv");
    Matrix out(z.rows(), z.cols());
    auto zs = z.data();
    auto hs = h.data();
    auto dst = out.data();
    switch (act.type) {
        case ActivationType::Sigmoid:
            for (std::size_t i = 0; i < dst.size(); ++i) dst[i] = hs[i] * (1.0 - hs[i]);
            break;
        case ActivationType::Tanh:
            for (std::size_t i = 0; i < dst.size(); ++i) dst[i] = 1.0 - hs[i] * hs[i];
            break;
        case ActivationType::SELU:
            // For z < 0, s'(z) = s(z) + lambda*alpha.
            for (std::size_t i = 0; i < dst.size(); ++i)
                dst[i] = zs[i] >= 0.0 ? act.selu_lambda : hs[i] + act.selu_lambda * act.selu_alpha;
            break;
        default:
            for (std::size_t i = 0; i < dst.size(); ++i) dst[i] = activate_deriv(act, zs[i]);
    }
    return out;
}

std::optional<std::pair<double, double>> output_range(const Activation& act) {
    switch (act.type) {
        case ActivationType::Sigmoid: return std::pair{0.0, 1.0};
        case ActivationType::Tanh: return std::pair{-1.0, 1.0};
        default: return std::nullopt;
    }
}

std::string to_string(const Activation& act) {
    switch (act.type) {
        case ActivationType::Linear: return "linear";
        case ActivationType::Binary: return "binary";
        case ActivationType::ReLU: return "relu";
        case ActivationType::SELU: {
            if (act == Activation::selu()) return "selu";
            char buf[80];
            std::snprintf(buf, sizeof buf, "selu:%.17g:%.17g", act.selu_lambda, act.selu_alpha);
            return buf;
        }
        case ActivationType::Sigmoid: return "sigmoid";
        case ActivationType::Tanh: return "tanh";
    }
    return "linear";
}

Activation parse_activation(std::string_view name) {
    if (name == "linear") return Activation::linear();
    if (name == "binary") return Activation::binary();
    if (name == "relu") return Activation::relu();
    if (name == "sigmoid") return Activation::sigmoid();
    if (name == "tanh") return Activation::tanh();
    if (name == "selu") return Activation::selu();
    if (name.starts_with("selu:")) {
        const auto rest = name.substr(5);
        const auto colon = rest.find(':');
        if (colon == std::string_view::npos)
            throw ConfigError("selu parameters must be given as selu:<lambda>:<alpha>");
        return Activation::selu(parse_real(rest.substr(0, colon), name),
                                parse_real(rest.substr(colon + 1), name));
    }
    throw ConfigError("unknown activation '" + std::string(name) +
                      "' (expected linear, binary, relu, selu, sigmoid or tanh)");
}

}  // namespace aefuse
