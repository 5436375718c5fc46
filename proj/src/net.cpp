#include "adacap/net.hpp"

#include <cmath>

#include "adacap/errors.hpp"
#include "adacap/rng.hpp"

namespace adacap::net {

MlpParams init_params(int d, int width, int depth, Activation activation,
                      std::uint64_t seed) {
    if (d < 1 || width < 1 || depth < 1)
        throw DomainError("init_params: d, width, depth must be >= 1");
    RandomStream rng(RandomStream::derive(seed, /*salt=*/0xA11CE));
    MlpParams params;
    params.activation = activation;
    params.layers.reserve(depth);
    int fan_in = d;
    for (int l = 0; l < depth; ++l) {
        Layer layer;
        layer.w.resize(fan_in, width);
        const double lim = std::sqrt(6.0 / (fan_in + width));
        for (int i = 0; i < layer.w.rows(); ++i)
            for (int j = 0; j < layer.w.cols(); ++j)
                layer.w(i, j) = rng.uniform(-lim, lim);
        layer.b = Eigen::VectorXd::Zero(width);
        params.layers.push_back(std::move(layer));
        fan_in = width;
    }
    return params;
}

namespace {

inline double selu(double z) {
    return z > 0.0 ? kSeluScale * z : kSeluScale * kSeluAlpha * std::expm1(z);
}

inline double selu_grad(double z) {
    return z > 0.0 ? kSeluScale : kSeluScale * kSeluAlpha * std::exp(z);
}

}  // namespace

ForwardTape forward(const MlpParams& params, const Eigen::MatrixXd& x) {
    if (x.cols() != params.input_dim())
        throw ShapeError("forward: input has " + std::to_string(x.cols()) +
                         " columns, expected " + std::to_string(params.input_dim()));
    if (!x.allFinite()) throw InputError("forward: non-finite input");

    ForwardTape tape;
    tape.input = x;
    tape.pre.reserve(params.layers.size());
    tape.act.reserve(params.layers.size());
    const Eigen::MatrixXd* prev = &tape.input;
    for (const Layer& layer : params.layers) {
        Eigen::MatrixXd z = (*prev) * layer.w;
        z.rowwise() += layer.b.transpose();
        Eigen::MatrixXd a;
        if (params.activation == Activation::ReLU) {
            a = z.cwiseMax(0.0);
        } else {
            a = z.unaryExpr([](double v) { return selu(v); });
        }
        tape.pre.push_back(std::move(z));
        tape.act.push_back(std::move(a));
        prev = &tape.act.back();
    }
    return tape;
}

ParamGrads zero_like(const MlpParams& params) {
    ParamGrads g;
    for (const Layer& layer : params.layers) {
        g.d_w.emplace_back(Eigen::MatrixXd::Zero(layer.w.rows(), layer.w.cols()));
        g.d_b.emplace_back(Eigen::VectorXd::Zero(layer.b.size()));
    }
    return g;
}

ParamGrads backward(const ForwardTape& tape, const MlpParams& params,
                    const Eigen::MatrixXd& upstream) {
    const int L = params.depth();
    if (upstream.rows() != tape.act.back().rows() ||
        upstream.cols() != tape.act.back().cols())
        throw ShapeError("backward: upstream shape mismatch");

    ParamGrads grads = zero_like(params);
    Eigen::MatrixXd g = upstream;
    for (int l = L - 1; l >= 0; --l) {
        const Eigen::MatrixXd& z = tape.pre[l];
        Eigen::MatrixXd dz;
        if (params.activation == Activation::ReLU) {
            dz = (z.array() > 0.0).select(g, 0.0);
        } else {
            dz = g.cwiseProduct(z.unaryExpr([](double v) { return selu_grad(v); }));
        }
        const Eigen::MatrixXd& a_prev = (l == 0) ? tape.input : tape.act[l - 1];
        grads.d_w[l] = a_prev.transpose() * dz;
        grads.d_b[l] = dz.colwise().sum().transpose();
        if (l > 0) g = dz * params.layers[l].w.transpose();
    }
    return grads;
}

}  // namespace adacap::net
