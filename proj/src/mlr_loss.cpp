#include "adacap/mlr_loss.hpp"

#include <cmath>

#include "adacap/errors.hpp"

namespace adacap::mlr {

PermutationSet draw_permutations(int n, int t_count, std::uint64_t seed) {
    if (n < 2) throw DomainError("draw_permutations: n must be >= 2");
    if (t_count < 0) throw DomainError("draw_permutations: T must be >= 0");
    PermutationSet set;
    set.seed = seed;
    set.n = n;
    RandomStream rng(RandomStream::derive(seed, /*salt=*/0x9E12));
    set.perms.reserve(t_count);
    for (int t = 0; t < t_count; ++t) set.perms.push_back(rng.permutation(n));
    return set;
}

Eigen::VectorXd apply_perm(const std::vector<int>& perm, const Eigen::VectorXd& y) {
    if (static_cast<int>(perm.size()) != y.size())
        throw ShapeError("apply_perm: length mismatch");
    Eigen::VectorXd out(y.size());
    for (int i = 0; i < y.size(); ++i) out[i] = y[perm[i]];
    return out;
}

Eigen::VectorXd structured_dither(const tikhonov::TikhonovState& state,
                                  const Eigen::VectorXd& xi) {
    if (xi.size() != state.rows())
        throw ShapeError("structured_dither: xi length mismatch");
    return xi - state.apply_h(xi);
}

NoiseBlock draw_noise(const DitherConfig& cfg, int n, int t_count, RandomStream& rng) {
    NoiseBlock block;
    if (cfg.sigma_tilde > 0.0) {
        block.eps.resize(n, 1 + t_count);
        for (int c = 0; c < block.eps.cols(); ++c)
            for (int i = 0; i < n; ++i) block.eps(i, c) = cfg.sigma_tilde * rng.normal();
    }
    if (cfg.structured) {
        block.xi.resize(n, 1 + t_count);
        for (int c = 0; c < block.xi.cols(); ++c)
            for (int i = 0; i < n; ++i) block.xi(i, c) = rng.normal();
    }
    return block;
}

double rmse(const Eigen::VectorXd& y, const Eigen::VectorXd& yhat) {
    if (y.size() != yhat.size()) throw ShapeError("rmse: length mismatch");
    return std::sqrt((y - yhat).squaredNorm() / static_cast<double>(y.size()));
}

double baseline_rmse(const Eigen::VectorXd& y) {
    const double mean = y.mean();
    return std::sqrt((y.array() - mean).square().sum() / static_cast<double>(y.size()));
}

namespace {

// Columns 0..T of the target block: true target first, then permutations,
// each with its own dither column when enabled.
Eigen::MatrixXd target_block(const Eigen::VectorXd& y, const PermutationSet& perms,
                             const Eigen::MatrixXd& eps) {
    const int n = static_cast<int>(y.size());
    const int t_count = perms.count();
    Eigen::MatrixXd block(n, 1 + t_count);
    block.col(0) = y;
    for (int t = 0; t < t_count; ++t) block.col(1 + t) = apply_perm(perms.perms[t], y);
    if (eps.size() > 0) {
        if (eps.rows() != n || eps.cols() != 1 + t_count)
            throw ShapeError("mlr loss: dither block shape mismatch");
        block += eps;
    }
    return block;
}

}  // namespace

LossResult mlr_regression_loss(const tikhonov::TikhonovState& state,
                               const Eigen::VectorXd& y,
                               const PermutationSet& perms,
                               const NoiseBlock& noise,
                               bool with_grad) {
    const int n = state.rows();
    if (y.size() != n) throw ShapeError("mlr_regression_loss: y length mismatch");
    if (perms.count() > 0 && perms.n != n)
        throw ShapeError("mlr_regression_loss: permutation length mismatch");

    const int t_count = perms.count();
    const Eigen::MatrixXd targets = target_block(y, perms, noise.eps);

    // Residual of column c is (I - H)(target_c + xi_c): both the fitted term
    // H target and the structured dither route through the same operator.
    Eigen::MatrixXd m = targets;
    if (noise.xi.size() > 0) {
        if (noise.xi.rows() != n || noise.xi.cols() != 1 + t_count)
            throw ShapeError("mlr loss: structured dither block shape mismatch");
        m += noise.xi;
    }
    const Eigen::MatrixXd hm = state.apply_h(m);
    const Eigen::MatrixXd resid = m - hm;

    LossResult out;
    Eigen::VectorXd col_rmse(1 + t_count);
    for (int c = 0; c <= t_count; ++c)
        col_rmse[c] = std::sqrt(resid.col(c).squaredNorm() / n);

    out.parts.fit = col_rmse[0];
    out.parts.baseline = baseline_rmse(y);
    out.value = col_rmse[0];
    Eigen::VectorXd weight = Eigen::VectorXd::Zero(1 + t_count);
    weight[0] = 1.0;
    for (int t = 0; t < t_count; ++t) {
        const double diff = out.parts.baseline - col_rmse[1 + t];
        out.parts.permuted_fits.push_back(col_rmse[1 + t]);
        out.parts.signed_diffs.push_back(diff);
        out.value += std::abs(diff) / t_count;
        // d|diff|/d col_rmse = -sign(diff); sign(0) taken as 0.
        weight[1 + t] = (diff > 0.0 ? -1.0 : (diff < 0.0 ? 1.0 : 0.0)) / t_count;
    }

    if (with_grad) {
        Eigen::MatrixXd d_resid(n, 1 + t_count);
        for (int c = 0; c <= t_count; ++c) {
            if (col_rmse[c] > 0.0)
                d_resid.col(c) = resid.col(c) * (weight[c] / (n * col_rmse[c]));
            else
                d_resid.col(c).setZero();  // RMSE subgradient at a perfect fit
        }
        // loss depends on H through -H m; upstream for <U, H m> is -d_resid.
        const tikhonov::RidgeVjp vjp = state.vjp(-d_resid, m);
        out.d_a_last = vjp.d_a_last;
        out.d_lambda = vjp.d_lambda;
    }
    return out;
}

double bce_with_logits(const Eigen::VectorXd& y, const Eigen::VectorXd& logits) {
    if (y.size() != logits.size()) throw ShapeError("bce: length mismatch");
    double total = 0.0;
    for (int i = 0; i < y.size(); ++i) {
        const double z = logits[i];
        total += std::max(z, 0.0) - z * y[i] + std::log1p(std::exp(-std::abs(z)));
    }
    return total / static_cast<double>(y.size());
}

double bce_with_probability(const Eigen::VectorXd& y, double p) {
    const double eps = 1e-12;
    p = std::min(std::max(p, eps), 1.0 - eps);
    double total = 0.0;
    for (int i = 0; i < y.size(); ++i)
        total += -(y[i] * std::log(p) + (1.0 - y[i]) * std::log(1.0 - p));
    return total / static_cast<double>(y.size());
}

LossResult bce_mlr_loss(const tikhonov::TikhonovState& state,
                        const Eigen::VectorXd& y,
                        const PermutationSet& perms,
                        const NoiseBlock& noise,
                        bool with_grad) {
    const int n = state.rows();
    if (y.size() != n) throw ShapeError("bce_mlr_loss: y length mismatch");
    for (int i = 0; i < n; ++i)
        if (y[i] != 0.0 && y[i] != 1.0)
            throw DomainError("bce_mlr_loss: targets must be 0/1");

    const int t_count = perms.count();
    const Eigen::VectorXd y_sym = 2.0 * y.array() - 1.0;  // Y* in {-1, +1}

    Eigen::MatrixXd s(n, 1 + t_count);
    s.col(0) = y_sym;
    for (int t = 0; t < t_count; ++t) s.col(1 + t) = apply_perm(perms.perms[t], y_sym);

    // logits_c = s_c + (I-H) xi_c + H s_c = s_c + xi_c + H (s_c - xi_c)
    Eigen::MatrixXd xi = Eigen::MatrixXd::Zero(n, 1 + t_count);
    if (noise.xi.size() > 0) {
        if (noise.xi.rows() != n || noise.xi.cols() != 1 + t_count)
            throw ShapeError("bce_mlr_loss: structured dither block shape mismatch");
        xi = noise.xi;
    }
    const Eigen::MatrixXd m = s - xi;
    const Eigen::MatrixXd hm = state.apply_h(m);
    const Eigen::MatrixXd logits = s + xi + hm;

    LossResult out;
    out.parts.baseline = bce_with_probability(y, y.mean());
    out.parts.fit = bce_with_logits(y, logits.col(0));
    out.value = out.parts.fit;

    // d(bce)/d logit = (sigmoid(logit) - target) / n, scaled per column.
    Eigen::MatrixXd d_logits(n, 1 + t_count);
    auto sigmoid = [](double z) { return 1.0 / (1.0 + std::exp(-z)); };

    Eigen::VectorXd target0 = y;
    for (int i = 0; i < n; ++i)
        d_logits(i, 0) = (sigmoid(logits(i, 0)) - target0[i]) / n;

    for (int t = 0; t < t_count; ++t) {
        // permuted +-1 targets mapped back to {0,1} for the BCE target slot
        Eigen::VectorXd yt = (s.col(1 + t).array() + 1.0) / 2.0;
        const double fit_t = bce_with_logits(yt, logits.col(1 + t));
        const double diff = out.parts.baseline - fit_t;
        out.parts.permuted_fits.push_back(fit_t);
        out.parts.signed_diffs.push_back(diff);
        out.value += std::abs(diff) / t_count;
        const double w = (diff > 0.0 ? -1.0 : (diff < 0.0 ? 1.0 : 0.0)) / t_count;
        for (int i = 0; i < n; ++i)
            d_logits(i, 1 + t) = w * (sigmoid(logits(i, 1 + t)) - yt[i]) / n;
    }

    if (with_grad) {
        const tikhonov::RidgeVjp vjp = state.vjp(d_logits, m);
        out.d_a_last = vjp.d_a_last;
        out.d_lambda = vjp.d_lambda;
    } else {
        (void)d_logits;
    }
    return out;
}

}  // namespace adacap::mlr
