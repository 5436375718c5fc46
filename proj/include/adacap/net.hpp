#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

namespace adacap::net {

enum class Activation { ReLU, SELU };

// Published self-normalizing-network constants.
inline constexpr double kSeluAlpha = 1.6732632423543772;
inline constexpr double kSeluScale = 1.0507009873554805;

struct Layer {
    Eigen::MatrixXd w;  // in_dim x out_dim
    Eigen::VectorXd b;  // out_dim
};

// Trainable parameters: the hidden stack plus the Tikhonov parameter in
// log-space (lambda = exp(log_lambda) stays positive by construction).
// There is no output layer; the closed-form ridge provides it.
struct MlpParams {
    std::vector<Layer> layers;  // layer 1: d x J, layers 2..L: J x J
    Activation activation = Activation::ReLU;
    double log_lambda = std::numeric_limits<double>::quiet_NaN();

    int depth() const { return static_cast<int>(layers.size()); }
    int width() const { return static_cast<int>(layers.back().w.cols()); }
    int input_dim() const { return static_cast<int>(layers.front().w.rows()); }
    double lambda() const { return std::exp(log_lambda); }
};

struct ForwardTape {
    Eigen::MatrixXd input;                 // A_0 = x
    std::vector<Eigen::MatrixXd> pre;      // Z_l, l = 1..L
    std::vector<Eigen::MatrixXd> act;      // A_l, l = 1..L
    const Eigen::MatrixXd& last_hidden() const { return act.back(); }
};

struct ParamGrads {
    std::vector<Eigen::MatrixXd> d_w;
    std::vector<Eigen::VectorXd> d_b;
};

// Glorot-uniform weights, zero biases; deterministic per seed.
MlpParams init_params(int d, int width, int depth, Activation activation,
                      std::uint64_t seed);

// Forward pass up to the last hidden layer. Throws InputError on non-finite
// input, ShapeError on column mismatch.
ForwardTape forward(const MlpParams& params, const Eigen::MatrixXd& x);

// Reverse-mode gradients of <upstream, A_last> w.r.t. every W_l, b_l.
// ReLU subgradient at 0 is 0.
ParamGrads backward(const ForwardTape& tape, const MlpParams& params,
                    const Eigen::MatrixXd& upstream);

ParamGrads zero_like(const MlpParams& params);

}  // namespace adacap::net
