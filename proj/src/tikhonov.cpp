#include "adacap/tikhonov.hpp"

#include <string>

#include "adacap/errors.hpp"

namespace adacap::tikhonov {

TikhonovState TikhonovState::build(const Eigen::MatrixXd& a_last, double lambda) {
    if (!(lambda > 0.0)) throw DomainError("ridge_projector: lambda must be > 0");
    if (!a_last.allFinite()) throw InputError("ridge_projector: non-finite input");

    TikhonovState state;
    state.a_ = a_last;
    state.lambda_ = lambda;
    state.side_ = a_last.cols() <= a_last.rows() ? Side::Feature : Side::Gram;

    const int dim = state.side_ == Side::Feature ? state.cols() : state.rows();
    Eigen::MatrixXd m(dim, dim);
    if (state.side_ == Side::Feature)
        m.noalias() = a_last.transpose() * a_last;
    else
        m.noalias() = a_last * a_last.transpose();
    m.diagonal().array() += lambda;

    state.llt_.compute(m);
    if (state.llt_.info() != Eigen::Success) {
        // lambda > 0 makes m SPD in exact arithmetic; jitter once if the
        // factorization hits roundoff trouble.
        m.diagonal().array() += 1e-10 * m.trace() / dim;
        state.llt_.compute(m);
        if (state.llt_.info() != Eigen::Success)
            throw DiagnosticError("ridge_projector: SPD factorization failed");
    }
    return state;
}

Eigen::MatrixXd TikhonovState::solve(const Eigen::MatrixXd& rhs) const {
    return llt_.solve(rhs);
}

Eigen::MatrixXd TikhonovState::apply_p(const Eigen::MatrixXd& y) const {
    if (y.rows() != a_.rows())
        throw ShapeError("apply_p: y has " + std::to_string(y.rows()) +
                         " rows, expected " + std::to_string(a_.rows()));
    if (side_ == Side::Feature) return solve(a_.transpose() * y);
    return a_.transpose() * solve(y);  // push-through
}

Eigen::MatrixXd TikhonovState::apply_h(const Eigen::MatrixXd& y) const {
    if (y.rows() != a_.rows())
        throw ShapeError("apply_h: y has " + std::to_string(y.rows()) +
                         " rows, expected " + std::to_string(a_.rows()));
    if (side_ == Side::Feature) return a_ * solve(a_.transpose() * y);
    return solve(a_ * (a_.transpose() * y));
}

Eigen::MatrixXd TikhonovState::h_matrix() const {
    return apply_h(Eigen::MatrixXd::Identity(rows(), rows()));
}

RidgeVjp TikhonovState::vjp(const Eigen::MatrixXd& upstream,
                            const Eigen::MatrixXd& y) const {
    if (upstream.rows() != a_.rows() || y.rows() != a_.rows() ||
        upstream.cols() != y.cols())
        throw ShapeError("ridge_vjp: shape mismatch");

    RidgeVjp out;
    if (side_ == Side::Feature) {
        // value = tr(U^T A G^{-1} A^T y), G = A^T A + lambda I.
        const Eigen::MatrixXd s = solve(a_.transpose() * y);         // J x k
        const Eigen::MatrixXd r = solve(a_.transpose() * upstream);  // J x k
        out.d_a_last.noalias() = upstream * s.transpose() + y * r.transpose();
        out.d_a_last.noalias() -= a_ * (r * s.transpose() + s * r.transpose());
        out.d_lambda = -(r.cwiseProduct(s)).sum();
    } else {
        // value = tr(U^T M^{-1} A A^T y), M = A A^T + lambda I.
        const Eigen::MatrixXd w = solve(upstream);                    // n x k
        const Eigen::MatrixXd hy = solve(a_ * (a_.transpose() * y));  // n x k
        const Eigen::MatrixXd resid = y - hy;
        out.d_a_last.noalias() = w * (resid.transpose() * a_);
        out.d_a_last.noalias() += resid * (w.transpose() * a_);
        out.d_lambda = -(w.cwiseProduct(hy)).sum();
    }
    return out;
}

Eigen::VectorXd TikhonovState::freeze_output(const Eigen::VectorXd& y_train) const {
    return apply_p(y_train);
}

}  // namespace adacap::tikhonov
