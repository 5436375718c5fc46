#pragma once

#include <Eigen/Dense>

namespace adacap::tikhonov {

enum class Side { Feature, Gram };

struct RidgeVjp {
    Eigen::MatrixXd d_a_last;  // n x J
    double d_lambda = 0.0;
};

// Cached factorization of the regularized Gram matrix behind the operators
//   P = (A^T A + lambda I)^{-1} A^T      (J x n)
//   H = A P                              (n x n)
// Inverts the smaller side: Feature (J x J) when J <= n, Gram (n x n)
// otherwise; both give identical H by the push-through identity.
class TikhonovState {
public:
    static TikhonovState build(const Eigen::MatrixXd& a_last, double lambda);

    int rows() const { return static_cast<int>(a_.rows()); }
    int cols() const { return static_cast<int>(a_.cols()); }
    double lambda() const { return lambda_; }
    Side side() const { return side_; }
    const Eigen::MatrixXd& a_last() const { return a_; }

    // H y for y with n rows (any column count).
    Eigen::MatrixXd apply_h(const Eigen::MatrixXd& y) const;
    // P y (J x k).
    Eigen::MatrixXd apply_p(const Eigen::MatrixXd& y) const;
    // Dense H, for small instances and tests.
    Eigen::MatrixXd h_matrix() const;

    // Gradients of <upstream, H y> w.r.t. a_last and lambda, treating y as
    // constant. Exact differentiation through the factorized solve.
    RidgeVjp vjp(const Eigen::MatrixXd& upstream, const Eigen::MatrixXd& y) const;

    // Output weights W = P y; after freezing, predictions need neither
    // lambda nor the training targets.
    Eigen::VectorXd freeze_output(const Eigen::VectorXd& y_train) const;

private:
    TikhonovState() = default;
    Eigen::MatrixXd solve(const Eigen::MatrixXd& rhs) const;  // M^{-1} rhs

    Eigen::MatrixXd a_;  // n x J copy of the last hidden layer
    double lambda_ = 0.0;
    Side side_ = Side::Feature;
    Eigen::LLT<Eigen::MatrixXd> llt_;  // of A^T A + lambda I  or  A A^T + lambda I
};

inline TikhonovState ridge_projector(const Eigen::MatrixXd& a_last, double lambda) {
    return TikhonovState::build(a_last, lambda);
}

}  // namespace adacap::tikhonov
