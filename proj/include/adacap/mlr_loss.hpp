#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <vector>

#include "adacap/rng.hpp"
#include "adacap/tikhonov.hpp"

namespace adacap::mlr {

// T label permutations, drawn once before training and never redrawn.
struct PermutationSet {
    std::vector<std::vector<int>> perms;
    std::uint64_t seed = 0;
    int n = 0;
    int count() const { return static_cast<int>(perms.size()); }
};

PermutationSet draw_permutations(int n, int t_count, std::uint64_t seed);

Eigen::VectorXd apply_perm(const std::vector<int>& perm, const Eigen::VectorXd& y);

// (I - H) xi: noise with larger variance along directions the model fits weakly.
Eigen::VectorXd structured_dither(const tikhonov::TikhonovState& state,
                                  const Eigen::VectorXd& xi);

struct DitherConfig {
    double sigma_tilde = 0.03;  // target dither; 0 for classification
    bool structured = true;     // (I - H) xi term
    std::uint64_t noise_seed = 0;
};

// Pre-drawn noise for one loss evaluation; reusing a block freezes the noise
// (lambda-init scan, finite-difference tests). Empty matrices mean "off".
struct NoiseBlock {
    Eigen::MatrixXd eps;  // n x (1+T) target dither, or 0 x 0
    Eigen::MatrixXd xi;   // n x (1+T) structured dither, or 0 x 0
};

NoiseBlock draw_noise(const DitherConfig& cfg, int n, int t_count, RandomStream& rng);

double rmse(const Eigen::VectorXd& y, const Eigen::VectorXd& yhat);
// RMSE(y, mean(y) 1) = population standard deviation of y.
double baseline_rmse(const Eigen::VectorXd& y);

struct LossParts {
    double fit = 0.0;       // first RMSE/BCE term
    double baseline = 0.0;  // RMSE(Y, mean 1) or BCE(Y, mean-as-probability)
    std::vector<double> permuted_fits;  // per-permutation fitted term
    std::vector<double> signed_diffs;   // baseline - permuted fit, pre |.|
};

struct LossResult {
    double value = 0.0;
    LossParts parts;
    Eigen::MatrixXd d_a_last;  // n x J
    double d_lambda = 0.0;     // chain to log-lambda via * lambda
};

// MLR regression loss
//   RMSE(Y_eps + (I-H) xi ; H Y_eps)
//   + (1/T) sum_t | RMSE(Y, mean(Y) 1) - RMSE(perm_t(Y)_eps + (I-H) xi_t ; H perm_t(Y)_eps) |
// All permuted targets go through H as one n x (1+T) block.
LossResult mlr_regression_loss(const tikhonov::TikhonovState& state,
                               const Eigen::VectorXd& y,
                               const PermutationSet& perms,
                               const NoiseBlock& noise,
                               bool with_grad = true);

// BCE-MLR loss with Y* = 2Y - 1 and logits s + (I-H) xi + H s.
LossResult bce_mlr_loss(const tikhonov::TikhonovState& state,
                        const Eigen::VectorXd& y,
                        const PermutationSet& perms,
                        const NoiseBlock& noise,
                        bool with_grad = true);

double bce_with_logits(const Eigen::VectorXd& y, const Eigen::VectorXd& logits);
double bce_with_probability(const Eigen::VectorXd& y, double p);

}  // namespace adacap::mlr
