#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>

#include "aefuse/matrix.hpp"

namespace aefuse {

enum class ActivationType { Linear, Binary, ReLU, SELU, Sigmoid, Tanh };

/// An activation function. SELU carries its scale (> 1) and alpha.
struct Activation {
    ActivationType type = ActivationType::Linear;
    double selu_lambda = 1.0507;
    double selu_alpha = 1.6733;

    static Activation linear() { return {ActivationType::Linear}; }
    static Activation binary() { return {ActivationType::Binary}; }
    static Activation relu() { return {ActivationType::ReLU}; }
    static Activation sigmoid() { return {ActivationType::Sigmoid}; }
    static Activation tanh() { return {ActivationType::Tanh}; }
    /// Throws ConfigError unless lambda > 1.
    static Activation selu(double lambda = 1.0507, double alpha = 1.6733);

    friend bool operator==(const Activation&, const Activation&) = default;
};

double activate(const Activation& act, double z);
/// Derivative with respect to the pre-activation. At the ReLU/SELU kink the
/// right-hand limit is used; Binary has derivative 0 everywhere.
double activate_deriv(const Activation& act, double z);

Matrix activate(const Activation& act, const Matrix& z);
Matrix activate_deriv(const Activation& act, const Matrix& z);

/// s'(z) computed from z and the already-evaluated output h = s(z).
/// Cheaper than activate_deriv for sigmoid and tanh.
Matrix activate_deriv(const Activation& act, const Matrix& z, const Matrix& h);

/// Bounded output interval of sigmoid (0,1) and tanh (-1,1); nullopt otherwise.
std::optional<std::pair<double, double>> output_range(const Activation& act);

/// Textual names: linear, binary, relu, selu, sigmoid, tanh.
std::string to_string(const Activation& act);
/// Parses a textual name. "selu:<lambda>:<alpha>" sets SELU constants.
Activation parse_activation(std::string_view name);

}  // namespace aefuse
