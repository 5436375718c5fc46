#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <limits>
#include <utility>
#include <vector>

#include "adacap/mlr_loss.hpp"
#include "adacap/net.hpp"

namespace adacap::trainer {

enum class Task { Regression, BinaryClassification };

enum class LossVariant {
    Mse,              // plain MSE MLP with a trained output layer (baseline)
    RidgeOnly,        // MLR fit term only: no permutations, no dithering
    RidgeDither,      // + structured dithering
    RidgePermutation, // + permutations, no dithering
    FullMlr,          // the complete loss
};

struct TrainConfig {
    int depth = 2;
    int width = 1024;
    double learning_rate = 0.0;  // 0 -> default for depth
    int max_iter = 0;            // 0 -> default for depth
    int batch_size = 0;          // 0 -> min(n_fit, width)
    int permutations = 16;
    double sigma_tilde = -1.0;   // <0 -> 0.03 regression / 0 classification
    bool structured_dither = true;
    double val_fraction = 0.20;
    int val_cap = 2048;
    double wall_budget_secs = 0.0;  // 0 -> unlimited
    std::uint64_t seed = 0;
    net::Activation activation = net::Activation::ReLU;
    Task task = Task::Regression;
    LossVariant variant = LossVariant::FullMlr;

    double resolved_learning_rate() const;
    int resolved_max_iter() const;
    double resolved_sigma_tilde() const;
    void validate() const;
};

struct TrainedModel {
    net::MlpParams params;
    Eigen::VectorXd frozen_w;
    Task task = Task::Regression;
    int best_iter = 0;
    std::vector<std::pair<int, double>> val_history;  // (iter, score)
    std::vector<std::pair<int, double>> loss_history; // (iter, train loss)
    double best_val_score = -std::numeric_limits<double>::infinity();
    double lambda_init = 0.0;
};

// Forward-difference scan of the MLR loss over the fixed grid
// lambda_k = 1e-1 * 10^(5k/11), k = 0..11; returns the geometric mean of the
// bracketing pair at the steepest increase. Noise frozen across the grid.
struct LambdaScan {
    std::vector<double> grid;
    std::vector<double> loss;
    int k_hat = 0;
    double lambda_init = 0.0;
};

std::vector<double> lambda_init_grid();

LambdaScan lambda_init_scan(const net::MlpParams& params,
                            const Eigen::MatrixXd& batch_x,
                            const Eigen::VectorXd& batch_y,
                            const mlr::PermutationSet& perms,
                            const mlr::DitherConfig& dither,
                            Task task = Task::Regression);

// Bias-corrected Adam over all of theta plus log-lambda.
class Adam {
public:
    Adam(int n_params, double lr) : lr_(lr) {
        m_ = Eigen::VectorXd::Zero(n_params);
        v_ = Eigen::VectorXd::Zero(n_params);
    }
    void step(Eigen::Ref<Eigen::VectorXd> params, const Eigen::VectorXd& grads);
    int t() const { return t_; }

private:
    Eigen::VectorXd m_, v_;
    double lr_;
    int t_ = 0;
};

// End-to-end training on a preprocessed matrix/target pair.
TrainedModel train(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                   const TrainConfig& config);

// Regression: standardized-unit predictions; classification: probabilities.
Eigen::VectorXd predict(const TrainedModel& model, const Eigen::MatrixXd& x_new);
// 0/1 labels with the 0.5 tie mapped to 1.
Eigen::VectorXd predict_labels(const TrainedModel& model, const Eigen::MatrixXd& x_new);

}  // namespace adacap::trainer
